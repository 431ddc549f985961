import math
import random
from fractions import Fraction

import pytest

from quadreg.errors import InputError
from quadreg.field import (
    FieldCtx,
    QuadElem,
    is_alg_integer,
    is_unit,
    make_field,
    make_order,
)


# ---------------------------------------------------------------------------
# oracle: float view of an element, good enough to cross-check exact compares
# ---------------------------------------------------------------------------


def float_value(x: QuadElem) -> float:
    return (float(x.p) + float(x.q) * math.sqrt(x.ctx.D)) / 2


# ---------------------------------------------------------------------------
# contexts
# ---------------------------------------------------------------------------


def test_make_field_discriminants():
    assert make_field(5).D == 5
    assert make_field(13).D == 13
    assert make_field(2).D == 8
    assert make_field(3).D == 12
    assert make_field(7).D == 28
    assert make_field(21).D == 21  # 3*7, 1 mod 4
    assert make_field(5).maximal is True


def test_make_field_rejects_bad_d():
    for bad in (0, 1, -5, 4, 9, 16, 12, 18, 2009):
        with pytest.raises(InputError):
            make_field(bad)
    with pytest.raises(InputError):
        make_field(2.5)


def test_make_order_accepts_square_factors():
    ctx = make_order(2009)  # 7^2 * 41
    assert ctx.D == 4 * 2009
    assert ctx.maximal is False
    assert make_order(6).maximal is True  # Z[sqrt 6] is the maximal order
    assert make_order(5).maximal is False  # index 2 inside Z[(1+sqrt5)/2]
    with pytest.raises(InputError):
        make_order(49)


def test_d_min_bound():
    ctx = make_field(5)
    assert ctx.d_min == Fraction(3, 160)
    assert make_field(3).d_min == Fraction(3, 32 * 12)


# ---------------------------------------------------------------------------
# element arithmetic
# ---------------------------------------------------------------------------


def golden(ctx5):
    # (1 + sqrt 5)/2
    return QuadElem(ctx5, Fraction(1), Fraction(1))


def test_elem_mul_matches_float():
    rng = random.Random(42)
    ctx = make_field(13)
    for _ in range(200):
        a = QuadElem(ctx, Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                     Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        b = QuadElem(ctx, Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                     Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        assert float_value(a * b) == pytest.approx(float_value(a) * float_value(b), abs=1e-9)
        assert float_value(a + b) == pytest.approx(float_value(a) + float_value(b), abs=1e-12)
        if not b.is_zero():
            assert float_value(a / b) == pytest.approx(float_value(a) / float_value(b), rel=1e-9)


def test_norm_and_conj():
    ctx = make_field(5)
    phi = golden(ctx)
    assert phi.norm() == -1
    assert (phi * phi.conj()).p == 2 * phi.norm()
    assert (phi * phi.conj()).q == 0
    ctx2 = make_field(2)
    u = QuadElem.from_sqrt_d_pair(ctx2, 1, 1)  # 1 + sqrt 2
    assert u.norm() == -1
    v = u * u  # 3 + 2 sqrt 2
    assert v.sqrt_d_pair() == (Fraction(3), Fraction(2))
    assert v.norm() == 1


def test_pow_golden_fibonacci():
    # phi^20 = (F19 + F20 sqrt5 ... ) in the (p + q sqrt5)/2 form: p = L20, q = F20
    ctx = make_field(5)
    phi = golden(ctx)
    p20 = phi ** 20
    assert p20.q == 6765  # Fibonacci F(20)
    assert p20.p == 15127  # Lucas L(20)
    assert (phi ** 0).p == 2 and (phi ** 0).q == 0


def test_division_roundtrip():
    ctx = make_field(7)
    a = QuadElem.from_sqrt_d_pair(ctx, Fraction(5, 3), Fraction(-2, 7))
    b = QuadElem.from_sqrt_d_pair(ctx, 8, 3)  # norm 64 - 63 = 1
    assert b.norm() == 1
    q = a / b
    r = q * b
    assert r.p == a.p and r.q == a.q
    with pytest.raises(ZeroDivisionError):
        a / QuadElem(ctx, Fraction(0), Fraction(0))


def test_sqrt_d_pair_roundtrip_both_disc_shapes():
    for d in (5, 13, 2, 3, 7):
        ctx = make_field(d)
        x = QuadElem.from_sqrt_d_pair(ctx, Fraction(3, 2), Fraction(-5, 4))
        r, s = x.sqrt_d_pair()
        assert (r, s) == (Fraction(3, 2), Fraction(-5, 4))
        assert float_value(x) == pytest.approx(1.5 - 1.25 * math.sqrt(d), abs=1e-9)


# ---------------------------------------------------------------------------
# exact comparison with rationals
# ---------------------------------------------------------------------------


def test_cmp_fraction_exhaustive_small():
    ctx = make_field(5)
    rng = random.Random(7)
    for _ in range(500):
        x = QuadElem(ctx, Fraction(rng.randint(-20, 20), rng.randint(1, 5)),
                     Fraction(rng.randint(-20, 20), rng.randint(1, 5)))
        r = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        got = x.cmp_fraction(r)
        want = float_value(x) - float(r)
        if abs(want) > 1e-6:
            assert got == (1 if want > 0 else -1)
    one = QuadElem.from_rational(ctx, Fraction(3, 4))
    assert one.cmp_fraction(Fraction(3, 4)) == 0
    assert (golden(ctx) > 1) and (golden(ctx) < 2)


def test_to_fixreal_brackets_value():
    ctx = make_field(13)
    x = QuadElem.from_sqrt_d_pair(ctx, Fraction(1, 3), Fraction(2, 5))
    fx = x.to_fixreal(64)
    lo, hi = fx.interval()
    v = Fraction(1, 3) + Fraction(2, 5) * Fraction(36185027886661344, 10 ** 16)
    # crude rational bracket of sqrt 13 = 3.6055512754639892931...
    assert float(lo) <= float_value(x) <= float(hi)
    assert abs(float(v) / 3.6 - float_value(x) / 3.6) < 1  # sanity only


# ---------------------------------------------------------------------------
# integrality and units
# ---------------------------------------------------------------------------


def test_is_alg_integer_maximal_one_mod_four():
    ctx = make_field(5)
    assert is_alg_integer(golden(ctx))  # (1+sqrt5)/2
    assert is_alg_integer(QuadElem(ctx, Fraction(3), Fraction(1)))
    assert not is_alg_integer(QuadElem(ctx, Fraction(1), Fraction(2)))  # parity mismatch
    assert not is_alg_integer(QuadElem(ctx, Fraction(1, 2), Fraction(1, 2)))


def test_is_alg_integer_maximal_other_residues():
    ctx = make_field(2)
    assert is_alg_integer(QuadElem.from_sqrt_d_pair(ctx, 1, 1))
    assert not is_alg_integer(QuadElem.from_sqrt_d_pair(ctx, Fraction(1, 2), Fraction(1, 2)))
    ctx3 = make_field(3)
    assert is_alg_integer(QuadElem.from_sqrt_d_pair(ctx3, 2, 1))
    assert not is_alg_integer(QuadElem.from_sqrt_d_pair(ctx3, Fraction(3, 2), Fraction(1, 2)))


def test_is_alg_integer_nonmaximal_order():
    ctx = make_order(5)
    assert not is_alg_integer(QuadElem(ctx, Fraction(1), Fraction(1)))  # would be (1+2sqrt5)/2? no:
    # in D=20 coords, (p + q sqrt20)/2 = p/2 + q sqrt5, so p=1, q=1 is 1/2 + sqrt5: not in Z[sqrt5]
    assert is_alg_integer(QuadElem.from_sqrt_d_pair(ctx, 2, 1))
    assert not is_alg_integer(QuadElem.from_sqrt_d_pair(ctx, Fraction(1, 2), Fraction(3, 2)))


def test_is_unit():
    ctx = make_field(5)
    assert is_unit(golden(ctx))
    assert is_unit(golden(ctx) ** 3)
    assert not is_unit(QuadElem.from_rational(ctx, 2))
    assert not is_unit(QuadElem.from_sqrt_d_pair(ctx, Fraction(1, 3), Fraction(1, 3)))
    ctx2 = make_field(2)
    assert is_unit(QuadElem.from_sqrt_d_pair(ctx2, 1, 1))
    assert is_unit(QuadElem.from_sqrt_d_pair(ctx2, 3, 2))
    assert not is_unit(QuadElem.from_sqrt_d_pair(ctx2, 2, 1))  # norm 2
    # in the order Z[sqrt5], the golden ratio is not a member, so not a unit there
    assert not is_unit(QuadElem(make_order(5), Fraction(1), Fraction(1)))
    assert is_unit(QuadElem.from_sqrt_d_pair(make_order(5), 9, 4))  # 81-80=1


def test_mixed_context_rejected():
    a = QuadElem.from_rational(make_field(5), 1)
    b = QuadElem.from_rational(make_field(13), 1)
    with pytest.raises(InputError):
        a * b
