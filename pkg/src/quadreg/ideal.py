"""Primitive ideals of a real quadratic order, reduction, and products.

An `IdealPair` (a, b) presents the Z-lattice  a*Z + ((b+sqrt(D))/2)*Z
with a > 0 and b^2 = D mod 4a; b is kept in the normal window chosen by
`tau`, which makes the presentation canonical.  `ReducedIdeal` adds the
reducedness predicate; reduced pairs are exactly the members of the
principal cycle once hit by the reduction walk.

Every step operator also reports the relative generator gamma it divided
out, as a `GammaVal`, so the caller can track real distances
delta(rho I) = delta(I) + ln|gamma| without any floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, MalformedIdealError, ResourceCapError
from .field import FieldCtx, QuadElem
from .numerics import FixReal, ceil_div, div_round, ext_gcd, ext_gcd3, ln_fix, tau


# ---------------------------------------------------------------------------
# presentation pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealPair:
    """Canonical presentation (a, b) of a primitive integral ideal."""

    ctx: FieldCtx
    a: int
    b: int

    def __post_init__(self):
        D = self.ctx.D
        if self.a <= 0:
            raise MalformedIdealError(f"a must be positive, got {self.a}")
        if (D - self.b * self.b) % (4 * self.a) != 0:
            raise MalformedIdealError(
                f"b^2 != D mod 4a for (a={self.a}, b={self.b}, D={D})")
        nb = tau(self.b, self.a, D)
        object.__setattr__(self, "b", nb)

    @property
    def c(self) -> int:
        """Third form coefficient: (D - b^2) / (4a), sign included."""
        return (self.ctx.D - self.b * self.b) // (4 * self.a)

    def content(self) -> int:
        return math.gcd(self.a, self.b, abs(self.c))

    def is_primitive(self) -> bool:
        return self.content() == 1

    def norm(self) -> int:
        return self.a

    def lattice_basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Basis vectors in (P, Q) coordinates for elements (P+Q*sqrt D)/2."""
        return (2 * self.a, 0), (self.b, 1)

    def conjugate(self) -> "IdealPair":
        return IdealPair(self.ctx, self.a, -self.b)


def is_reduced(a: int, b: int, ctx: FieldCtx) -> bool:
    """Exact reducedness test: b in the normal window, b > 0, b + sqrt(D) > 2a."""
    D = ctx.D
    if a <= 0 or b <= 0:
        return False
    if b != tau(b, a, D):
        return False
    t = 2 * a - b
    return t < 0 or t * t < D


@dataclass(frozen=True)
class ReducedIdeal:
    """An IdealPair that satisfies the reducedness predicate."""

    ctx: FieldCtx
    a: int
    b: int

    def __post_init__(self):
        if (self.ctx.D - self.b * self.b) % (4 * self.a) != 0:
            raise MalformedIdealError(
                f"b^2 != D mod 4a for (a={self.a}, b={self.b})")
        if not is_reduced(self.a, self.b, self.ctx):
            raise MalformedIdealError(f"(a={self.a}, b={self.b}) is not reduced")

    @property
    def pair(self) -> IdealPair:
        return IdealPair(self.ctx, self.a, self.b)

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b)

    def gamma(self) -> "GammaVal":
        return GammaVal(self.ctx, self.b, self.a)


def unit_ideal(ctx: FieldCtx) -> ReducedIdeal:
    """The whole ring as a reduced pair: (1, tau(D, 1))."""
    cache = ctx._caches
    if "unit_ideal" not in cache:
        cache["unit_ideal"] = ReducedIdeal(ctx, 1, tau(ctx.D, 1, ctx.D))
    return cache["unit_ideal"]


# ---------------------------------------------------------------------------
# relative generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaVal:
    """The number (b + sqrt(D)) / (2a), kept exact."""

    ctx: FieldCtx
    b: int
    a: int

    def as_quad_elem(self) -> QuadElem:
        return QuadElem(self.ctx, Fraction(self.b, self.a), Fraction(1, self.a))

    def exceeds_one(self) -> bool:
        t = 2 * self.a - self.b
        return t < 0 or t * t < self.ctx.D

    def conj_in_unit_interval(self) -> bool:
        """-1 < (b - sqrt D)/(2a) < 0, exactly."""
        D = self.ctx.D
        if self.b <= 0 or self.b * self.b >= D:
            return False
        s = self.b + 2 * self.a
        return s > 0 and s * s > D

    def ln_abs(self, prec_bits: int) -> FixReal:
        """ln |gamma| with a certified error bound, cached per context."""
        bucket = ((prec_bits + 31) // 32) * 32
        key = ("lng", self.b, self.a, bucket)
        cache = self.ctx._caches
        if key not in cache:
            cache[key] = self._ln_abs_raw(bucket)
        return cache[key].rescale(prec_bits)

    def _ln_abs_raw(self, prec_bits: int) -> FixReal:
        D = self.ctx.D
        w = prec_bits + D.bit_length() + 16
        s = self.ctx.sqrt_D_fix(w)
        num = (self.b << w) + s.man
        err = s.err
        if num < 0:
            num = -num
        man = div_round(num, 2 * self.a)
        x = FixReal(man, w, ceil_div(err, 2 * self.a) + 1)
        return ln_fix(x, prec_bits)


# ---------------------------------------------------------------------------
# step operators
# ---------------------------------------------------------------------------


def rho(ideal: "ReducedIdeal | IdealPair") -> tuple:
    """One reduction step.  Returns (image, gamma) with
    delta(image) = delta(ideal) + ln|gamma|.  The image of a reduced
    ideal is reduced (the walk stays on the cycle)."""
    ctx, a, b = ideal.ctx, ideal.a, ideal.b
    D = ctx.D
    c = abs(D - b * b) // (4 * a)
    b2 = tau(-b, c, D)
    gamma = GammaVal(ctx, b, a)
    if isinstance(ideal, ReducedIdeal):
        return ReducedIdeal(ctx, c, b2), gamma
    if is_reduced(c, b2, ctx):
        return ReducedIdeal(ctx, c, b2), gamma
    return IdealPair(ctx, c, b2), gamma


def rho_inv(ideal: ReducedIdeal) -> tuple:
    """Inverse step on the cycle.  Returns (previous, gamma) with
    delta(ideal) = delta(previous) + ln|gamma|; gamma is the relative
    generator of the forward step out of `previous`."""
    ctx, a, b = ideal.ctx, ideal.a, ideal.b
    D = ctx.D
    bs = tau(-b, a, D)
    a2 = (D - bs * bs) // (4 * a)
    prev = ReducedIdeal(ctx, a2, tau(bs, a2, D))
    step, gamma = rho(prev)
    if step.key != ideal.key:
        raise MalformedIdealError(f"inverse step mismatch at (a={a}, b={b})")
    return prev, gamma


def sigma(ideal: "ReducedIdeal | IdealPair") -> IdealPair:
    """Conjugate ideal, same norm: (a, -b) renormalized."""
    return IdealPair(ideal.ctx, ideal.a, -ideal.b)


def reduce_to_reduced(pair: IdealPair, prec_bits: int) -> tuple:
    """Apply rho until reduced.  Returns (reduced, shift, steps) where
    shift is the accumulated sum of ln|gamma| as a FixReal:
    delta(reduced) = delta(pair) + shift."""
    ctx = pair.ctx
    work = prec_bits + 8
    shift = FixReal.zero(work)
    cur: ReducedIdeal | IdealPair = pair
    if is_reduced(pair.a, pair.b, ctx):
        cur = ReducedIdeal(ctx, pair.a, pair.b)
    cap = 2 * pair.a.bit_length() + ctx.D.bit_length() + 32
    steps = 0
    while not isinstance(cur, ReducedIdeal):
        if steps > cap:
            raise ResourceCapError(f"reduction did not settle within {cap} steps")
        cur, gamma = rho(cur)
        shift = shift + gamma.ln_abs(work)
        steps += 1
    return cur, shift.rescale(prec_bits), steps


# ---------------------------------------------------------------------------
# products and principal ideals
# ---------------------------------------------------------------------------


def multiply(i1: IdealPair, i2: IdealPair) -> tuple[IdealPair, int]:
    """Compose two primitive pairs.  Returns (j, k) with
    I1 * I2 = k * J as lattices (k is the content of the raw product).
    Reducing J with accumulated shift s puts the product's cycle
    distance at delta(I1) + delta(I2) + s - ln k."""
    if i1.ctx.D != i2.ctx.D:
        raise InputError("mixed discriminants")
    if not (i1.is_primitive() and i2.is_primitive()):
        raise MalformedIdealError("product needs primitive pairs")
    ctx = i1.ctx
    D = ctx.D
    a1, b1 = i1.a, i1.b
    a2, b2 = i2.a, i2.b
    s = (b1 + b2) // 2
    k, u, v, w = ext_gcd3(a1, a2, s)
    a3 = (a1 * a2) // (k * k)
    e = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2
    if e % k != 0:
        raise MalformedIdealError("composition certificate failed")
    b3 = tau(e // k, a3, D)
    return IdealPair(ctx, a3, b3), k


@dataclass(frozen=True)
class StdIdeal:
    """Fractional ideal (num/den) * (a*Z + ((b+sqrt D)/2)*Z)."""

    ctx: FieldCtx
    a: int
    b: int
    num: int = 1
    den: int = 1

    def __post_init__(self):
        if self.num <= 0 or self.den <= 0:
            raise MalformedIdealError("prefactor must be positive")
        g = math.gcd(self.num, self.den)
        object.__setattr__(self, "num", self.num // g)
        object.__setattr__(self, "den", self.den // g)
        pair = IdealPair(self.ctx, self.a, self.b)
        object.__setattr__(self, "b", pair.b)

    @property
    def pair(self) -> IdealPair:
        return IdealPair(self.ctx, self.a, self.b)

    def contains(self, x: QuadElem) -> bool:
        """Exact lattice membership of (p + q*sqrt D)/2."""
        q_pref = Fraction(self.num, self.den)
        t = x.q / q_pref
        if t.denominator != 1:
            return False
        r = (x.p / q_pref - t * self.b) / (2 * self.a)
        return r.denominator == 1


def principal_std(x: QuadElem) -> StdIdeal:
    """Standard form of the principal ideal x*O for integral nonzero x."""
    ctx = x.ctx
    if x.is_zero():
        raise InputError("zero generates the zero module")
    p, q = x.p, x.q
    if p.denominator != 1 or q.denominator != 1:
        raise InputError("generator must have integer presentation coordinates")
    X, Y = p.numerator, q.numerator
    D = ctx.D
    if (X - Y * D) % 2 != 0:
        raise InputError("generator is not in the working order")
    n4 = X * X - Y * Y * D
    if n4 % 4 != 0:
        raise InputError("generator is not in the working order")
    half = (X + Y * D) // 2
    k, u, v = ext_gcd(Y, half)
    a = abs(n4 // 4) // (k * k)
    entry = u * X + v * ((X + Y) * D) // 2
    if entry % k != 0:
        raise MalformedIdealError("principal form certificate failed")
    b = tau(entry // k, a, D)
    out = StdIdeal(ctx, a, b, num=k, den=1)
    # both module generators of x*O must land inside, and scaled basis
    # vectors of the claimed form must be multiples of x
    omega = QuadElem(ctx, Fraction(D), Fraction(1))
    for gen in (x, x * omega):
        if not out.contains(gen):
            raise MalformedIdealError("principal form misses a generator")
    for vec in (QuadElem(ctx, Fraction(2 * a * k), Fraction(0)),
                QuadElem(ctx, Fraction(b * k), Fraction(k))):
        ratio = vec / x
        rr, ss = ratio.p, ratio.q
        if rr.denominator != 1 or ss.denominator != 1 or (rr.numerator - ss.numerator * D) % 2 != 0:
            raise MalformedIdealError("principal form is too large")
    return out
