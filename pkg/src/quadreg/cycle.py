"""The principal cycle: reduced ideals reachable from the whole ring.

`walk_cycle` iterates rho from the unit ideal until it returns, recording
each ideal together with its real distance delta (a certified FixReal)
and the relative generator gamma of the outgoing step.  The total
distance around the loop is the regulator.

`check_cycle_bounds` certifies the structural facts downstream code
leans on: every gap lies in (3/(32 D), ln(D)/2), two consecutive steps
advance by more than ln 2, and the cycle length is squeezed between
2R/ln D and 2R/ln 2 + 1.  All checks compare exact integers or interval
endpoints, so a True verdict is sound, never a float coincidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceCapError
from .field import FieldCtx
from .ideal import GammaVal, ReducedIdeal, rho, unit_ideal
from .numerics import FixReal, ln2_fix, ln_fix


@dataclass(frozen=True)
class CycleEntry:
    position: int
    ideal: ReducedIdeal
    gamma: GammaVal
    delta: FixReal


class PrincipalCycle:
    """Immutable walk result with O(1) lookup by ideal key."""

    def __init__(self, ctx: FieldCtx, entries: list[CycleEntry], regulator: FixReal):
        self.ctx = ctx
        self.entries = tuple(entries)
        self.regulator = regulator
        self._index = {e.ideal.key: e.position for e in entries}

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, j: int) -> CycleEntry:
        return self.entries[j % len(self.entries)]

    def position_of(self, key: tuple[int, int]) -> int:
        if key not in self._index:
            raise InputError(f"ideal {key} is not on the principal cycle")
        return self._index[key]

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self._index


def walk_cycle(ctx: FieldCtx, prec_bits: int = 96, max_steps: int = 10 ** 7) -> PrincipalCycle:
    """Walk rho from the unit ideal all the way around.

    The walk is deterministic, so results are cached on the field context
    per precision (only for the default step cap).
    """
    cache_key = ("cycle", prec_bits) if max_steps == 10 ** 7 else None
    if cache_key is not None and cache_key in ctx._caches:
        return ctx._caches[cache_key]
    work = prec_bits + 32
    start = unit_ideal(ctx)
    entries = []
    delta = FixReal.zero(work)
    cur = start
    pos = 0
    while True:
        nxt, gamma = rho(cur)
        entries.append(CycleEntry(pos, cur, gamma, delta.rescale(prec_bits)))
        delta = delta + gamma.ln_abs(work)
        pos += 1
        if nxt.key == start.key:
            break
        if pos >= max_steps:
            raise ResourceCapError(f"cycle exceeds {max_steps} ideals")
        cur = nxt
    out = PrincipalCycle(ctx, entries, delta.rescale(prec_bits))
    if cache_key is not None:
        ctx._caches[cache_key] = out
    return out


def check_cycle_bounds(cycle: PrincipalCycle) -> dict:
    """Certified structural bounds; every value is True only when proven."""
    ctx = cycle.ctx
    D = ctx.D
    n = len(cycle)
    gap_low = True
    gap_high = True
    two_step = True
    # ln gamma > 3/(32 D) via gamma > 32D/(32D - 3) >= exp(3/(32 D));
    # ln gamma < ln(D)/2 via gamma < sqrt(D)
    low_rat = Fraction(32 * D, 32 * D - 3)
    for e in cycle.entries:
        g = e.gamma.as_quad_elem()
        if not g.cmp_fraction(low_rat) > 0:
            gap_low = False
        b, a = e.gamma.b, e.gamma.a
        # (b + sqrt D)/(2a) < sqrt D  <=>  b < (2a - 1) sqrt D
        t = 2 * a - 1
        if not (b <= 0 or b * b < t * t * D):
            gap_high = False
    for j in range(n):
        g1 = cycle.entry(j).gamma.as_quad_elem()
        g2 = cycle.entry(j + 1).gamma.as_quad_elem()
        if not (g1 * g2).cmp_fraction(2) > 0:
            two_step = False
    r_lo, r_hi = cycle.regulator.interval()
    prec = cycle.regulator.scale
    ln_d = ln_fix(Fraction(D), prec)
    ld_lo, ld_hi = ln_d.interval()
    l2_lo, l2_hi = ln2_fix(prec).interval()
    count_low = n * ld_lo >= 2 * r_hi
    count_high = (n - 1) * l2_hi <= 2 * r_lo
    return {
        "gap_low": gap_low,
        "gap_high": gap_high,
        "two_step": two_step,
        "count_low": count_low,
        "count_high": count_high,
    }


def locate_on_cycle(cycle: PrincipalCycle, x, prec_bits: int = 96):
    """Largest cycle position (with wraps) whose distance is <= x.

    Returns (entry, wraps, gap) where gap = x - (wraps * R + delta) as a
    FixReal.  x may be a Fraction or int, x >= 0.  Distances other than 0
    are logarithms of algebraic numbers, hence irrational, so every
    comparison resolves at some finite precision.
    """
    x = Fraction(x)
    if x < 0:
        raise InputError("position must be >= 0")
    prec = prec_bits
    for _ in range(8):
        res = _try_locate(cycle, x, prec)
        if res is not None:
            return res
        prec *= 2
    raise ResourceCapError("could not certify cycle location")


def _try_locate(cycle: PrincipalCycle, x: Fraction, prec: int):
    ctx = cycle.ctx
    fresh = walk_cycle(ctx, prec) if prec > cycle.regulator.scale else cycle
    r_lo, r_hi = fresh.regulator.interval()
    if x < r_lo:
        wraps = 0
    else:
        w1 = int(x / r_hi)
        w2 = int(x / r_lo)
        if w1 != w2:
            return None
        wraps = w1
    xf = FixReal.from_fraction(x, fresh.regulator.scale)
    base = fresh.regulator.mul_int(wraps)
    # deltas ascend; find the last entry with wraps*R + delta <= x
    lo, hi = 0, len(fresh) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        pos = base + fresh.entry(mid).delta
        c = pos.cmp(xf)
        if c is None:
            return None
        if c <= 0:
            best = mid
            lo = mid + 1
        else:
            hi = mid - 1
    if best is None:
        # x below every position at this wrap count: must mean wraps
        # was overestimated by the interval split; retry sharper
        return None
    gap = xf - (base + fresh.entry(best).delta)
    return fresh.entry(best), wraps, gap
