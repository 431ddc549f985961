import math
import random
from fractions import Fraction

import pytest

from quadreg.errors import BadEstimateError, InputError
from quadreg.field import make_field, make_order
from quadreg.cycle import locate_on_cycle, walk_cycle
from quadreg.ideal import unit_ideal
from quadreg.navigator import (
    AnchoredIdeal,
    h_eval,
    near_unit_distance,
    refine_regulator,
    star,
)


def ctx_for(d):
    try:
        return make_field(d)
    except Exception:
        return make_order(d)


FIELDS = [2, 3, 5, 7, 10, 13, 19, 31, 61, 94, 109, 211, 1009]


# ---------------------------------------------------------------------------
# h_eval against the unrolled-cycle reference
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", FIELDS)
def test_h_eval_matches_cycle_table(d):
    ctx = ctx_for(d)
    cyc = walk_cycle(ctx, prec_bits=128)
    rng = random.Random(d * 7 + 1)
    xs = [Fraction(0), Fraction(1, 3), Fraction(7, 2)]
    xs += [Fraction(rng.randint(1, 2000), rng.randint(1, 5)) for _ in range(12)]
    for x in xs:
        hv = h_eval(ctx, x, prec_bits=96)
        entry, wraps, gap = locate_on_cycle(cyc, x, prec_bits=128)
        assert hv.ideal.key == entry.ideal.key, (d, x)
        assert hv.gap.to_float() == pytest.approx(gap.to_float(), rel=1e-12, abs=1e-12)
        assert hv.delta.to_float() == pytest.approx(
            wraps * cyc.regulator.to_float() + entry.delta.to_float(),
            rel=1e-12, abs=1e-12)


def test_h_eval_ladder_path_deep():
    # far beyond the direct-walk band: distance ~ 10^9 forces the ladder
    ctx = make_field(13)
    R = walk_cycle(ctx).regulator.to_float()
    x = Fraction(10 ** 9) + Fraction(1, 7)
    hv = h_eval(ctx, x, prec_bits=96)
    # delta must be within one gap of x and equal to wraps * R for the
    # unit ideal context (cycle length 1 means every member is O)
    assert hv.ideal.key == unit_ideal(ctx).key
    winds = round(hv.delta.to_float() / R)
    assert hv.delta.to_float() == pytest.approx(winds * R, rel=1e-12)
    assert 0 <= hv.gap.to_float() < R + 1e-9
    assert hv.delta.to_float() + hv.gap.to_float() == pytest.approx(float(x), rel=1e-12)


def test_h_eval_rejects_negative():
    with pytest.raises(InputError):
        h_eval(make_field(5), -1)


def test_h_eval_huge_position_runs():
    # 60-digit target exercises ladder depth ~ 200 without trouble
    ctx = make_field(109)
    x = Fraction(10 ** 60)
    hv = h_eval(ctx, x, prec_bits=128)
    assert hv.gap.to_float() >= -1e-25
    assert hv.gap.to_float() < 0.5 * math.log(109) + 1e-9


# ---------------------------------------------------------------------------
# star product
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", [3, 19, 31, 61, 94])
def test_star_lands_left_of_sum(d):
    ctx = ctx_for(d)
    cyc = walk_cycle(ctx, prec_bits=128)
    R = cyc.regulator.to_float()
    deltas = [e.delta.to_float() for e in cyc.entries]
    keys = [e.ideal.key for e in cyc.entries]
    rng = random.Random(d)
    wp = 128
    for _ in range(25):
        i, j = rng.randrange(len(cyc)), rng.randrange(len(cyc))
        a1 = AnchoredIdeal(cyc.entry(i).ideal, cyc.entry(i).delta)
        a2 = AnchoredIdeal(cyc.entry(j).ideal, cyc.entry(j).delta)
        out = star(a1, a2, wp)
        target = deltas[i] + deltas[j]
        # reference: last wrapped position <= target
        ref_pos, ref_key = None, None
        for w in range(0, 4):
            for k, dv in enumerate(deltas):
                p = w * R + dv
                if p <= target + 1e-12 and (ref_pos is None or p > ref_pos):
                    ref_pos, ref_key = p, keys[k]
        if abs(target - ref_pos) < 1e-9 or min(
                abs(w * R + dv - target) for w in range(4) for dv in deltas + [R]) < 1e-9:
            continue  # skip float-boundary coincidences
        assert out.ideal.key == ref_key, (d, i, j)
        assert out.delta.to_float() == pytest.approx(ref_pos, abs=1e-12)


def test_star_squaring_from_origin_region():
    ctx = make_field(61)
    cyc = walk_cycle(ctx)
    e = cyc.entry(2)
    a = AnchoredIdeal(e.ideal, e.delta)
    out = star(a, a, 160)
    assert out.delta.to_float() <= 2 * e.delta.to_float() + 1e-12
    assert out.delta.to_float() > 2 * e.delta.to_float() - 0.5 * math.log(244) - 1e-9


# ---------------------------------------------------------------------------
# refine_regulator
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 5, 13, 19, 31, 61, 94, 109, 211])
def test_refine_regulator_recovers_R(d):
    ctx = ctx_for(d)
    cyc = walk_cycle(ctx, prec_bits=160)
    R = cyc.regulator
    for fuzz in (Fraction(0), Fraction(7, 10), Fraction(-4, 5)):
        est = R.approx_fraction() + fuzz
        if est <= 0:
            continue
        got = refine_regulator(ctx, est, prec_bits=128)
        lo, hi = got.interval()
        rlo, rhi = R.interval()
        assert lo <= rhi and rlo <= hi, (d, fuzz)  # intervals overlap
        assert got.to_float() == pytest.approx(R.to_float(), rel=1e-12)


def test_refine_regulator_multiple_of_R():
    ctx = make_field(13)
    R = walk_cycle(ctx).regulator
    est = 3 * R.approx_fraction() + Fraction(1, 2)
    got = refine_regulator(ctx, est, prec_bits=96)
    assert got.to_float() == pytest.approx(3 * R.to_float(), rel=1e-15)


def test_refine_regulator_bad_estimate():
    ctx = make_field(61)  # R = 3.66, so 1.8 is far from 0 and R alike
    with pytest.raises(BadEstimateError):
        refine_regulator(ctx, Fraction(18, 10), prec_bits=96)


# ---------------------------------------------------------------------------
# near_unit_distance
# ---------------------------------------------------------------------------


def test_near_unit_distance_hits_and_misses():
    ctx = make_field(61)
    R = walk_cycle(ctx).regulator.approx_fraction()
    for k in (1, 2, 5):
        x = k * R + Fraction(3, 10)
        got = near_unit_distance(ctx, x, Fraction(1, 2), prec_bits=96)
        assert got is not None
        assert got.to_float() == pytest.approx(float(k * R), rel=1e-12)
    # midway between multiples, small tolerance: no hit
    x = R + R / 2
    assert near_unit_distance(ctx, x, Fraction(1, 4), prec_bits=96) is None
    # at zero the unit ideal itself sits inside any window
    got = near_unit_distance(ctx, Fraction(1, 100), Fraction(1, 2), prec_bits=96)
    assert got is not None and abs(got.to_float()) < 1e-15


def test_near_unit_distance_grid_tolerance():
    ctx = make_field(13)
    R = walk_cycle(ctx).regulator.approx_fraction()
    N = 64
    m = round(2 * R * N)
    got = near_unit_distance(ctx, Fraction(m, N), Fraction(1, N), prec_bits=96)
    assert got is not None
    off = Fraction(m + 3, N)  # 3/N > 1/N away from 2R
    assert near_unit_distance(ctx, off, Fraction(1, N), prec_bits=96) is None


def test_near_unit_rejects_bad_tol():
    with pytest.raises(InputError):
        near_unit_distance(make_field(5), 1, 2)
