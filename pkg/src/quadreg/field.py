"""Real quadratic field/order contexts and exact field elements.

A `FieldCtx` fixes the radicand d, the discriminant D of the ring the
ideal machinery works in, and whether that ring is the maximal order.
For square-free d the ring is the full ring of integers (D = d when
d = 1 mod 4, else D = 4d).  For non-square-free d the Pell path works in
the order Z[sqrt(d)] with D = 4d; the same reduction theory applies to
any non-square discriminant = 0 or 1 mod 4.

`QuadElem` stores (p + q*sqrt(D))/2 with exact rational p, q, which makes
unit products, norms and conjugation loss-free no matter how large the
fundamental unit gets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .numerics import FixReal, div_round, is_square, sqrt_fix


def _square_free(n: int) -> bool:
    if n % 4 == 0:
        return False
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return False
        f += 1 if f == 2 else 2
    return True


@dataclass(frozen=True)
class FieldCtx:
    """Arithmetic context for Q(sqrt d) or the order Z[sqrt d]."""

    d: int
    D: int
    maximal: bool = True
    _caches: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    @property
    def d_min(self) -> Fraction:
        """Certified lower bound on consecutive cycle gaps: 3/(32 D)."""
        return Fraction(3, 32 * self.D)

    @property
    def sqrt_D_floor(self) -> int:
        return math.isqrt(self.D)

    @property
    def omega_desc(self) -> str:
        if not self.maximal:
            return "sqrt(d)"
        return "(-1+sqrt(d))/2" if self.d % 4 == 1 else "sqrt(d)"

    def sqrt_D_fix(self, scale: int) -> FixReal:
        key = ("sqrtD", scale)
        cache = self._caches
        if key not in cache:
            cache[key] = sqrt_fix(self.D, scale)
        return cache[key]


def make_field(d: int) -> FieldCtx:
    """Context for the maximal order of Q(sqrt d); d must be square-free > 1."""
    if not isinstance(d, int) or d <= 1:
        raise InputError(f"d must be an integer > 1, got {d!r}")
    if is_square(d):
        raise InputError(f"d = {d} is a perfect square")
    if not _square_free(d):
        raise InputError(f"d = {d} is not square-free")
    D = d if d % 4 == 1 else 4 * d
    return FieldCtx(d=d, D=D)


def make_order(d: int) -> FieldCtx:
    """Context for the (possibly non-maximal) order Z[sqrt d]; d any
    non-square > 1.  Unit and Pell computations are exact in this order
    even when d carries a square factor."""
    if not isinstance(d, int) or d <= 1:
        raise InputError(f"d must be an integer > 1, got {d!r}")
    if is_square(d):
        raise InputError(f"d = {d} is a perfect square")
    maximal = _square_free(d) and d % 4 != 1
    return FieldCtx(d=d, D=4 * d, maximal=maximal)


@dataclass(frozen=True)
class QuadElem:
    """Value (p + q*sqrt(D))/2 with p, q exact rationals."""

    ctx: FieldCtx
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))

    # -- constructors --------------------------------------------------------

    @classmethod
    def one(cls, ctx: FieldCtx) -> "QuadElem":
        return cls(ctx, Fraction(2), Fraction(0))

    @classmethod
    def from_rational(cls, ctx: FieldCtx, r) -> "QuadElem":
        return cls(ctx, 2 * Fraction(r), Fraction(0))

    @classmethod
    def from_sqrt_d_pair(cls, ctx: FieldCtx, x, y) -> "QuadElem":
        """Element x + y*sqrt(d) in user coordinates."""
        x, y = Fraction(x), Fraction(y)
        if ctx.D == ctx.d:
            return cls(ctx, 2 * x, 2 * y)
        # D = 4d, sqrt(D) = 2 sqrt(d)
        return cls(ctx, 2 * x, y)

    def sqrt_d_pair(self) -> tuple[Fraction, Fraction]:
        """(r, s) with value = r + s*sqrt(d)."""
        if self.ctx.D == self.ctx.d:
            return self.p / 2, self.q / 2
        return self.p / 2, Fraction(self.q)

    # -- ring operations ------------------------------------------------------

    def _check(self, other: "QuadElem"):
        if self.ctx.D != other.ctx.D:
            raise InputError("mixed discriminants")

    def __add__(self, other: "QuadElem") -> "QuadElem":
        self._check(other)
        return QuadElem(self.ctx, self.p + other.p, self.q + other.q)

    def __sub__(self, other: "QuadElem") -> "QuadElem":
        self._check(other)
        return QuadElem(self.ctx, self.p - other.p, self.q - other.q)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.ctx, -self.p, -self.q)

    def __mul__(self, other: "QuadElem") -> "QuadElem":
        self._check(other)
        D = self.ctx.D
        p = (self.p * other.p + self.q * other.q * D) / 2
        q = (self.p * other.q + self.q * other.p) / 2
        return QuadElem(self.ctx, p, q)

    def __truediv__(self, other: "QuadElem") -> "QuadElem":
        self._check(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        co = other.conj()
        num = self * co
        return QuadElem(self.ctx, num.p / n, num.q / n)

    def __pow__(self, k: int) -> "QuadElem":
        if k < 0:
            raise InputError("negative powers not supported here")
        out = QuadElem.one(self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "QuadElem":
        return QuadElem(self.ctx, self.p, -self.q)

    def norm(self) -> Fraction:
        return (self.p * self.p - self.q * self.q * self.ctx.D) / 4

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    # -- exact order comparison versus rationals ------------------------------

    def cmp_fraction(self, r) -> int:
        """Exact sign of (self - r); sqrt(D) irrational so ties need q = 0."""
        r = Fraction(r)
        t = 2 * r - self.p  # compare q*sqrt(D) with t
        if self.q == 0:
            return -1 if t > 0 else (1 if t < 0 else 0)
        if self.q > 0:
            if t < 0:
                return 1
            return 1 if self.q * self.q * self.ctx.D > t * t else -1
        if t > 0:
            return -1
        return -1 if self.q * self.q * self.ctx.D > t * t else 1

    def __gt__(self, r) -> bool:
        return self.cmp_fraction(r) > 0

    def __lt__(self, r) -> bool:
        return self.cmp_fraction(r) < 0

    # -- numeric view ----------------------------------------------------------

    def to_fixreal(self, scale: int) -> FixReal:
        pn, pd = self.p.numerator, self.p.denominator
        qn, qd = self.q.numerator, self.q.denominator
        # (p + q sqrt D)/2 = (A + B sqrt D) / C with integer A, B, C
        C = 2 * pd * qd
        A = pn * qd
        B = qn * pd
        s = self.ctx.sqrt_D_fix(scale)
        num = (A << scale) + B * s.man
        err = abs(B) * s.err
        man = div_round(num, C)
        return FixReal(man, scale, -(-err // C) + 1)

    def __str__(self) -> str:
        return f"({self.p} + {self.q}*sqrt({self.ctx.D}))/2"


# ---------------------------------------------------------------------------
# integrality and unit predicates
# ---------------------------------------------------------------------------


def conj(x: QuadElem) -> QuadElem:
    return x.conj()


def norm(x: QuadElem) -> Fraction:
    return x.norm()


def is_alg_integer(x: QuadElem) -> bool:
    """Membership in the working ring.

    Maximal order: r + s*sqrt(d) is integral iff 2r and r^2 - s^2 d are
    rational integers.  Order Z[sqrt d]: both coordinates must be integers.
    """
    r, s = x.sqrt_d_pair()
    if x.ctx.maximal:
        two_r = 2 * r
        if two_r.denominator != 1:
            return False
        val = r * r - s * s * x.ctx.d
        return val.denominator == 1
    return r.denominator == 1 and s.denominator == 1


def is_unit(x: QuadElem) -> bool:
    """Invertible element of the working ring: integral with norm +-1."""
    return is_alg_integer(x) and abs(x.norm()) == 1
