"""Quantum period finding on the grid-discretized distance function.

The function f(k) = (ideal left of k/N, gap floored to the 1/N grid) has
the irrational period S = N*R.  Fourier sampling over [0, q) with q a
power of two at least 3*S^2 concentrates outcomes near multiples of q/S;
two nonzero samples decoded through continued fractions give an integer
within 1 of S, and the distance machinery certifies the candidate and
refines the regulator to the requested precision.

No quantum state is materialized: measuring the value register amounts to
drawing a uniform grid point, and the transform of the surviving
superposition is the transform of that value's preimage indicator.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cycle import PrincipalCycle, walk_cycle
from .errors import (BadEstimateError, InputError, PrecisionError,
                     ResourceCapError, TrialsExhaustedError)
from .field import FieldCtx
from .ideal import ReducedIdeal
from .navigator import h_eval, near_unit_distance, refine_regulator
from .numerics import FixReal, cf_convergents, dft_indicator, div_round, ln_fix


@dataclass(frozen=True)
class HTildeValue:
    """One value of the discretized function: the cycle ideal left of k/N
    and the leftover gap in whole 1/N units."""

    ideal: ReducedIdeal
    gap_units: int

    @property
    def key(self) -> tuple[int, int, int]:
        a, b = self.ideal.key
        return (a, b, self.gap_units)


def h_tilde(ctx: FieldCtx, N: int, k: int, prec_bits: int = 96) -> HTildeValue:
    """f(k) evaluated through the navigator at x = k/N.

    gap_units = k - ceil(N * delta) is the gap floored to the grid.  The
    rounding is certified; when N*delta sits inside the error interval of
    an integer the evaluation retries at doubled precision.
    """
    if not isinstance(N, int) or N < 1:
        raise InputError("grid denominator N must be a positive integer")
    if not isinstance(k, int) or k < 0:
        raise InputError("grid index k must be a nonnegative integer")
    p = prec_bits
    for _ in range(8):
        hv = h_eval(ctx, Fraction(k, N), p)
        c, ok = hv.delta.ceil_mul(N)
        if ok:
            return HTildeValue(hv.ideal, k - c)
        p *= 2
    raise PrecisionError("grid rounding of the distance would not certify")


class DiscretizedH:
    """Grid evaluation f(k) = (ideal at distance <= k/N, gap in 1/N units).

    backend "table" unrolls the principal cycle across wraps once and
    answers queries by bisection; backend "navigator" runs the h machinery
    per query.  Both produce identical values (each side certifies its
    rounding), so the slow backend cross-checks the fast one.
    """

    def __init__(self, ctx: FieldCtx, N: int, backend: str = "table",
                 prec_bits: int = 96):
        if not isinstance(N, int) or N < 1:
            raise InputError("grid denominator N must be a positive integer")
        if backend not in ("table", "navigator"):
            raise InputError(f"unknown backend {backend!r}")
        self.ctx = ctx
        self.N = N
        self.backend = backend
        self.prec_bits = prec_bits
        self._cycle: PrincipalCycle | None = None
        self._pos: list[int] = []  # ceil(N * delta) per unrolled entry
        self._who: list[int] = []  # cycle position per unrolled entry
        if backend == "table":
            self._extend(0)

    @property
    def cycle(self) -> PrincipalCycle:
        if self._cycle is None:
            self._cycle = walk_cycle(self.ctx, self.prec_bits)
        return self._cycle

    def _sharpen(self) -> None:
        # a grid boundary fell inside the error interval; rewalk sharper
        self.prec_bits *= 2
        if self.prec_bits > 1 << 20:
            raise PrecisionError("grid rounding kept landing on boundaries")
        self._cycle = walk_cycle(self.ctx, self.prec_bits)

    def _extend(self, k_limit: int) -> None:
        """Grow the unrolled table until its last position exceeds k_limit,
        so every entry relevant to queries <= k_limit is present."""
        while not self._pos or self._pos[-1] <= k_limit:
            cyc = self.cycle
            w, j = divmod(len(self._pos), len(cyc))
            t = cyc.entries[j].delta + cyc.regulator.mul_int(w)
            c, ok = t.ceil_mul(self.N)
            if not ok:
                self._sharpen()
                continue
            self._pos.append(c)
            self._who.append(j)

    def value(self, k: int) -> HTildeValue:
        if not isinstance(k, int) or k < 0:
            raise InputError("grid index k must be a nonnegative integer")
        if self.backend == "navigator":
            return h_tilde(self.ctx, self.N, k, self.prec_bits)
        self._extend(k)
        i = bisect_right(self._pos, k) - 1
        ideal = self.cycle.entries[self._who[i]].ideal
        return HTildeValue(ideal, k - self._pos[i])


def audit_periodic_function(f, S: FixReal, k_limit: int, l_values) -> Fraction:
    """Fraction of pairs (k, l) with f(k + floor(lS)) or f(k + ceil(lS))
    equal to f(k), over k in 0..k_limit and the given l values."""
    hits = 0
    total = 0
    for l in l_values:
        if not isinstance(l, int) or l < 1:
            raise InputError("period multiples l must be positive integers")
        t = S.mul_int(l)
        fl, ok_f = t.floor_mul(1)
        cl, ok_c = t.ceil_mul(1)
        if not (ok_f and ok_c):
            raise PrecisionError("floor(l*S) did not certify at this precision")
        for k in range(k_limit + 1):
            base = f(k)
            if f(k + fl) == base or (cl != fl and f(k + cl) == base):
                hits += 1
            total += 1
    return Fraction(hits, total)


def audit_weak_periodicity(ctx: FieldCtx, N: int, l_values=(1, 2, 3, 4),
                           prec_bits: int = 96,
                           dh: DiscretizedH | None = None) -> Fraction:
    """Measured weak-periodicity fraction of the grid function at S = N*R.

    The reference period comes from the cycle walk; it is instrumentation
    for the audit only and never feeds the decoding path.
    """
    if dh is None:
        dh = DiscretizedH(ctx, N, "table", prec_bits)
    S = dh.cycle.regulator.mul_int(N)
    k_limit, ok = S.floor_mul(1)
    if not ok:
        raise PrecisionError("N*R landed on a grid boundary; raise precision")
    return audit_periodic_function(dh.value, S, k_limit, l_values)


def grid_premise_ok(ctx: FieldCtx, N: int) -> bool:
    """Whether 1/N < d_min / ln d, the grid condition under which the
    weak-periodicity fraction is guaranteed to be high."""
    hi = ln_fix(Fraction(ctx.d), 64).interval()[1]
    return Fraction(N) * ctx.d_min > hi


@dataclass(frozen=True)
class GoodJ:
    """A Fourier outcome within 1/2 of k*q/S for some k >= 1, below the
    q/ln(S) cutoff that the decoding analysis needs."""

    j: int
    k: int


def _round_ratio(n: int, S: FixReal) -> int:
    """Nearest integer to n / S, certified from the interval of S."""
    lo, hi = S.interval()
    if lo <= 0:
        raise InputError("period must be positive")
    j = math.floor(Fraction(n) / S.approx_fraction() + Fraction(1, 2))
    if (2 * j - 1) * hi < 2 * n and 2 * n < (2 * j + 1) * lo:
        return j
    raise PrecisionError("rounding k*q/S did not certify")


def _below_good_cutoff(j: int, q: int, S: FixReal) -> bool:
    """Certified j < q / ln(S).  A period below e makes the cutoff vacuous."""
    slo, shi = S.interval()
    lo = ln_fix(slo, 96).interval()[0]
    hi = ln_fix(shi, 96).interval()[1]
    if hi <= 0:
        return True
    if j * hi < q:
        return True
    if j * lo >= q:
        return False
    raise PrecisionError("good-j cutoff did not certify")


class QRun:
    """One Fourier-sampling setup over Z_q for the grid function.

    Holds every preimage group of f on [0, q).  Measuring the value
    register is a uniform draw of a grid point; the outcome distribution
    conditioned on its group is the transform of the group's indicator.
    """

    def __init__(self, ctx: FieldCtx, N: int, q: int, S: FixReal,
                 group_keys: tuple, group_positions: tuple):
        self.ctx = ctx
        self.N = N
        self.q = q
        self.S = S
        self.group_keys = group_keys
        self.group_positions = group_positions
        self._mixture: np.ndarray | None = None
        self._k_to_group: np.ndarray | None = None
        self._cum: dict[int, np.ndarray] = {}
        self._good: list[GoodJ] | None = None

    def mixture(self) -> np.ndarray:
        """Unconditional outcome distribution over j: each group weighted
        by its size over q."""
        if self._mixture is None:
            acc = np.zeros(self.q)
            for pos in self.group_positions:
                acc += (pos.size / self.q) * dft_indicator(pos, self.q)
            if abs(acc.sum() - 1.0) > 1e-12:
                raise PrecisionError("mixture mass drifted beyond 1e-12")
            self._mixture = acc
        return self._mixture

    def sample(self, rng: random.Random) -> tuple[int, int]:
        """(group index, j): measure the value register, then draw j from
        the conditional Fourier distribution of that group."""
        if self._k_to_group is None:
            m = np.empty(self.q, dtype=np.int64)
            for g, pos in enumerate(self.group_positions):
                m[pos] = g
            self._k_to_group = m
        g = int(self._k_to_group[rng.randrange(self.q)])
        if g not in self._cum:
            self._cum[g] = np.cumsum(dft_indicator(self.group_positions[g],
                                                   self.q))
        j = int(np.searchsorted(self._cum[g], rng.random(), side="right"))
        return g, min(j, self.q - 1)

    def good_js(self) -> list[GoodJ]:
        """Outcomes j = round(k*q/S), k = 1, 2, ..., while j stays below
        the q/ln(S) cutoff."""
        if self._good is None:
            out = []
            k = 1
            while True:
                j = _round_ratio(k * self.q, self.S)
                if j >= self.q or not _below_good_cutoff(j, self.q, self.S):
                    break
                out.append(GoodJ(j, k))
                k += 1
            self._good = out
        return list(self._good)


def build_run(ctx: FieldCtx, N: int, q_exponent: int | None = None,
              prec_bits: int = 96, dh: DiscretizedH | None = None) -> QRun:
    """Evaluate f on all of [0, q), group grid points by value, and package
    the run.  q must be a power of two at or above 3*S^2; with q_exponent
    None the smallest such power is chosen from the reference period."""
    if dh is None:
        dh = DiscretizedH(ctx, N, "table", prec_bits)
    elif dh.ctx is not ctx or dh.N != N or dh.backend != "table":
        raise InputError("build_run needs a table grid on the same field")
    S = dh.cycle.regulator.mul_int(N)
    shi = S.interval()[1]
    need = 3 * shi * shi
    if q_exponent is None:
        e = (math.ceil(need) - 1).bit_length()
    else:
        if not isinstance(q_exponent, int) or q_exponent < 1:
            raise InputError("q exponent must be a positive integer")
        e = q_exponent
    q = 1 << e
    if q > 1 << 24:
        raise ResourceCapError(f"q = 2^{e} exceeds the 2^24 in-memory cap")
    if Fraction(q) < need:
        raise InputError(f"q = 2^{e} is below 3*S^2")

    dh._extend(q - 1)
    pos = np.array(dh._pos, dtype=np.int64)
    who = np.array(dh._who, dtype=np.int64)
    ks = np.arange(q, dtype=np.int64)
    idx = np.searchsorted(pos, ks, side="right") - 1
    gaps = ks - pos[idx]
    cyc_pos = who[idx]
    # one integer code per (cycle position, gap) value
    code = gaps * len(dh.cycle) + cyc_pos
    order = np.argsort(code, kind="stable")
    cuts = np.flatnonzero(np.diff(code[order])) + 1
    chunks = np.split(order, cuts)
    keys = []
    groups = []
    for ch in chunks:
        k0 = int(ch[0])
        entry = dh.cycle.entries[int(cyc_pos[k0])]
        keys.append((*entry.ideal.key, int(gaps[k0])))
        groups.append(np.sort(ch))
    return QRun(ctx, N, q, S, tuple(keys), tuple(groups))


def decode_two_samples(c: int, d: int, q: int,
                       s_hint_digits: int | None = None) -> list[int]:
    """Candidate period integers from two Fourier samples.

    When both samples are good with coprime multipliers k1, k2, the reduced
    pair appears among the convergents of c/d and the matching candidate
    round(k1*q/c) lands within 1 of S.  Candidates come back ascending so
    the caller can stop at the smallest one that validates."""
    if not (isinstance(c, int) and isinstance(d, int)):
        raise InputError("samples must be integers")
    if c == 0 or d == 0:
        raise InputError("zero Fourier sample; draw again")
    if not (0 < c < q and 0 < d < q):
        raise InputError("samples must lie in (0, q)")
    cands = set()
    for cn, _dn in cf_convergents(c, d).convergents:
        if cn < 1:
            continue
        m = div_round(cn * q, c)
        if m >= 1:
            cands.add(m)
    if s_hint_digits is not None:
        cands = {m for m in cands if len(str(m)) <= s_hint_digits}
    return sorted(cands)


@dataclass(frozen=True)
class QSolveResult:
    """End-to-end outcome: the certified regulator, the accepted grid
    period candidate m (|m - N*R| < 1), and the trial statistics."""

    regulator: FixReal
    m: int
    N: int
    q: int
    stats: dict


def _default_grid(ctx: FieldCtx, max_q_exponent: int, prec_bits: int) -> int:
    """Smallest power-of-two N with 1/N < d_min/ln d, halved while the
    induced q = 2^ceil(lg 3S^2) would exceed the exponent cap."""
    lnd_hi = ln_fix(Fraction(ctx.d), 64).interval()[1]
    N = 1
    while ctx.d_min * N <= lnd_hi:
        N *= 2
    r_hi = walk_cycle(ctx, min(prec_bits, 64)).regulator.interval()[1]
    while N > 1:
        need = 3 * (r_hi * N) ** 2
        if (math.ceil(need) - 1).bit_length() <= max_q_exponent:
            return N
        N //= 2
    raise ResourceCapError("no grid fits the q cap for this field")


def qsolve(ctx: FieldCtx, n_digits: int, max_trials: int = 200,
           N: int | None = None, q_exponent: int | None = None,
           seed: int | None = None, max_q_exponent: int = 16,
           prec_bits: int = 96) -> QSolveResult:
    """Full pipeline: sample Fourier outcomes in pairs, decode candidates,
    validate them through the certified distance test, and refine the best
    survivor to n_digits decimal digits.

    All max_trials pairs are drawn so the reported success rate is a real
    frequency, not a stopped one.  Raises TrialsExhaustedError (with the
    statistics attached) when no candidate survives validation."""
    if not isinstance(n_digits, int) or n_digits < 1:
        raise InputError("digit count must be a positive integer")
    if not isinstance(max_trials, int) or max_trials < 1:
        raise InputError("trial budget must be a positive integer")
    rng = random.Random(seed)
    if N is None:
        N = _default_grid(ctx, max_q_exponent, prec_bits)
    dh = DiscretizedH(ctx, N, "table", prec_bits)
    run = build_run(ctx, N, q_exponent, prec_bits, dh)
    weak = audit_weak_periodicity(ctx, N, (1, 2), prec_bits, dh)
    premise = grid_premise_ok(ctx, N)
    lnd_lo = ln_fix(Fraction(ctx.d), 64).interval()[0]
    flagged = lnd_lo > 0 and (1 - weak) > 1 / lnd_lo

    tol = Fraction(1, N)
    zero = FixReal.zero()
    checked: dict[int, bool] = {}
    successes: list[int] = []
    zero_draws = 0
    unvalidated = 0
    for _ in range(max_trials):
        c = run.sample(rng)[1]
        d = run.sample(rng)[1]
        if c == 0 or d == 0:
            zero_draws += 1
            continue
        found = None
        for m in decode_two_samples(c, d, run.q):
            if m not in checked:
                hit = near_unit_distance(ctx, Fraction(m, N), tol, prec_bits)
                checked[m] = hit is not None and hit.cmp(zero) == 1
            if checked[m]:
                found = m
                break
        if found is None:
            unvalidated += 1
        else:
            successes.append(found)

    stats = {
        "trials": max_trials,
        "successes": len(successes),
        "zero_draws": zero_draws,
        "unvalidated": unvalidated,
        "success_rate": len(successes) / max_trials,
        "weak_fraction": float(weak),
        "premise_ok": premise,
        "flagged": flagged,
        "N": N,
        "q": run.q,
    }
    if not successes:
        raise TrialsExhaustedError(
            f"no validated period candidate in {max_trials} trials", stats)

    final_bits = max(prec_bits, int(n_digits * math.log2(10)) + 32)
    for m in sorted(set(successes)):
        try:
            reg = refine_regulator(ctx, Fraction(m, N), final_bits)
        except BadEstimateError:
            continue
        t = reg - FixReal.from_fraction(Fraction(m, N), reg.scale)
        if t.man < 0:
            t = -t
        if t.cmp(FixReal.from_fraction(tol, t.scale)) == -1:
            return QSolveResult(reg, m, N, run.q, stats)
    raise TrialsExhaustedError(
        "validated candidates did not survive refinement", stats)
