"""Distance-targeted navigation of the principal cycle.

`h_eval(ctx, x)` finds the reduced principal ideal sitting immediately
left of real position x together with the leftover gap, in time
polynomial in log x: a ladder of star-squarings doubles the distance,
then a greedy descent closes in, and a short rho walk finishes.

The star product multiplies two anchored ideals, reduces, and aligns the
result so its certified distance is the last one not beyond the sum of
the inputs' distances.  All comparisons use certified FixReal intervals;
when an interval straddles the target the ideal is treated as left of
it, which keeps the walk deterministic and at worst one step shy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadEstimateError, InputError, PrecisionError
from .field import FieldCtx
from .ideal import ReducedIdeal, multiply, reduce_to_reduced, rho, rho_inv, unit_ideal
from .numerics import FixReal, ln_fix


@dataclass(frozen=True)
class AnchoredIdeal:
    """A reduced ideal with a certified absolute distance from the ring."""

    ideal: ReducedIdeal
    delta: FixReal


@dataclass(frozen=True)
class HValue:
    """Result of h_eval: the ideal left of x, its distance, and x - distance."""

    ideal: ReducedIdeal
    delta: FixReal
    gap: FixReal


def _ln_int(ctx: FieldCtx, k: int, prec_bits: int) -> FixReal:
    bucket = ((prec_bits + 31) // 32) * 32
    key = ("lnk", k, bucket)
    cache = ctx._caches
    if key not in cache:
        cache[key] = ln_fix(Fraction(k), bucket)
    return cache[key].rescale(prec_bits)


def _work_bits(ctx: FieldCtx, prec_bits: int, x: Fraction) -> int:
    # the ladder doubles absolute errors along with distances, so the
    # working precision needs the magnitude of x on top of the target
    # precision and the d_min alignment guard
    mag = max(0, x.numerator.bit_length() - x.denominator.bit_length())
    return prec_bits + ctx.D.bit_length() + mag + 48


def _step_fwd(anch: AnchoredIdeal, wp: int) -> AnchoredIdeal:
    nxt, gamma = rho(anch.ideal)
    return AnchoredIdeal(nxt, anch.delta + gamma.ln_abs(wp))


def _step_back(anch: AnchoredIdeal, wp: int) -> AnchoredIdeal:
    prev, gamma = rho_inv(anch.ideal)
    return AnchoredIdeal(prev, anch.delta - gamma.ln_abs(wp))


def _next_delta(anch: AnchoredIdeal, wp: int) -> FixReal:
    return anch.delta + anch.ideal.gamma().ln_abs(wp)


def star(a1: AnchoredIdeal, a2: AnchoredIdeal, prec_bits: int) -> AnchoredIdeal:
    """Reduced product aligned to the last position not beyond
    delta(a1) + delta(a2)."""
    ctx = a1.ideal.ctx
    wp = max(prec_bits, ctx.D.bit_length() + 16)
    target = a1.delta + a2.delta
    raw, k = multiply(a1.ideal.pair, a2.ideal.pair)
    red, shift, _ = reduce_to_reduced(raw, wp)
    delta = target + shift
    if k > 1:
        delta = delta - _ln_int(ctx, k, wp)
    cur = AnchoredIdeal(red, delta)
    window = 3 * ctx.D.bit_length() + 8
    back = fwd = 0
    while cur.delta.cmp(target) == 1:
        cur = _step_back(cur, wp)
        back += 1
        if back > window:
            raise PrecisionError("star alignment exceeded its window")
    while _next_delta(cur, wp).cmp(target) != 1:
        cur = _step_fwd(cur, wp)
        fwd += 1
        if fwd > window:
            raise PrecisionError("star alignment exceeded its window")
    return cur


def h_eval(ctx: FieldCtx, x, prec_bits: int = 96) -> HValue:
    """The reduced principal ideal immediately left of position x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise InputError("position must be >= 0")
    wp = _work_bits(ctx, prec_bits, x)
    origin = AnchoredIdeal(unit_ideal(ctx), FixReal.zero(wp))
    # base distance that guarantees geometric ladder growth: B > ln(D)/2 + 1
    base_bound = Fraction(ctx.D.bit_length(), 2) + 2  # > ln(D)/2 + 1 always
    if x <= 2 * base_bound:
        anch = _walk_to(origin, x, wp)
        return _finish(anch, x, prec_bits, wp)
    base = _walk_to(origin, base_bound, wp)
    base = _step_fwd(base, wp)  # now certainly past base_bound
    ladder = [base]
    half_x = x / 2
    while ladder[-1].delta.cmp(half_x) != 1:
        ladder.append(star(ladder[-1], ladder[-1], wp))
        if len(ladder) > 8 * len(bin(x.numerator)) + 64:
            raise PrecisionError("ladder failed to reach the target")
    acc = ladder[-1] if ladder[-1].delta.cmp(x) != 1 else ladder[-2]
    budget = 8 * (len(ladder) + 2) + 64
    for rung in reversed(ladder):
        while (acc.delta + rung.delta).cmp(x) == -1:
            acc = star(acc, rung, wp)
            budget -= 1
            if budget < 0:
                raise PrecisionError("descent failed to converge")
    anch = _walk_to(acc, x, wp)
    return _finish(anch, x, prec_bits, wp)


def _walk_to(anch: AnchoredIdeal, x: Fraction, wp: int) -> AnchoredIdeal:
    # rho forward while the next position is not certainly past x
    guard = 0
    cap = 8 * max(4, int(4 * (x - anch.delta.approx_fraction())) + 8)
    while _next_delta(anch, wp).cmp(x) != 1:
        anch = _step_fwd(anch, wp)
        guard += 1
        if guard > cap:
            raise PrecisionError("forward walk failed to converge")
    return anch


def _finish(anch: AnchoredIdeal, x: Fraction, prec_bits: int, wp: int) -> HValue:
    xf = FixReal.from_fraction(x, wp)
    gap = xf - anch.delta
    return HValue(anch.ideal, anch.delta.rescale(prec_bits), gap.rescale(prec_bits))


def refine_regulator(ctx: FieldCtx, estimate, prec_bits: int = 96) -> FixReal:
    """Exact unit-ideal distance within 1 of `estimate`, or BadEstimateError.

    Walks forward from h(max(0, estimate - 1)) looking for the unit
    ideal; a hit at certified distance inside (estimate - 1, estimate + 1)
    is returned at full precision.
    """
    m = Fraction(estimate)
    lo = max(Fraction(0), m - 1)
    hi = m + 1
    wp = _work_bits(ctx, prec_bits, hi)
    hv = h_eval(ctx, lo, wp)
    anch = AnchoredIdeal(hv.ideal, hv.delta)
    key = unit_ideal(ctx).key
    cap = 3 * ctx.D.bit_length() + 48
    for _ in range(cap):
        if anch.delta.cmp(hi) == 1:
            break
        if (anch.ideal.key == key and anch.delta.cmp(lo) == 1
                and anch.delta.cmp(hi) == -1):
            return anch.delta.rescale(prec_bits)
        anch = _step_fwd(anch, wp)
    raise BadEstimateError(
        f"no principal-cycle return within 1 of {float(m):.6g}")


def near_unit_distance(ctx: FieldCtx, x, tol, prec_bits: int = 96):
    """Certified unit-ideal distance within tol of x, or None.

    Scans a fixed window of cycle steps around h(x): 5 back and 12 in
    all.  Five consecutive steps span at least 2 ln 2 > 1 >= tol of
    distance, so the window covers (x - tol, x + tol) with room over.
    """
    x = Fraction(x)
    tol = Fraction(tol)
    if tol <= 0 or tol > 1:
        raise InputError("tolerance must be in (0, 1]")
    wp = _work_bits(ctx, prec_bits, abs(x) + 1)
    hv = h_eval(ctx, max(Fraction(0), x), wp)
    anch = AnchoredIdeal(hv.ideal, hv.delta)
    key = unit_ideal(ctx).key
    probe = anch
    best = None
    for _ in range(5):
        probe = _step_back(probe, wp)
    for _ in range(12):
        if probe.ideal.key == key:
            if (probe.delta.cmp(x - tol) == 1 and probe.delta.cmp(x + tol) == -1):
                d = probe.delta
                if best is None or abs((d - FixReal.from_fraction(x, d.scale)).man) < abs(
                        (best - FixReal.from_fraction(x, best.scale)).man):
                    best = d
        probe = _step_fwd(probe, wp)
    return best.rescale(prec_bits) if best is not None else None
