"""Exact integer kernels and error-bounded fixed-point reals.

Everything downstream leans on two guarantees made here:

* integer predicates (tau normalisation, reducedness-style square
  comparisons) are decided with exact arithmetic only, never through a
  float;
* every approximate real is a `FixReal` carrying an explicit error bound,
  so comparisons can be *certified* (definitely <, definitely >) or
  reported as unresolvable at the current precision.

A `FixReal` stores ``man * 2**-scale`` together with ``err`` in units of
``2**-scale``; the represented true value lies within ``err`` ulps of the
mantissa.  Addition is exact apart from error-bound bookkeeping; `ln_fix`
rounds once at the end and accounts for series truncation, argument
quantisation and any error carried by its input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, PrecisionError, ResourceCapError

# ---------------------------------------------------------------------------
# small integer helpers
# ---------------------------------------------------------------------------


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def div_round(a: int, b: int) -> int:
    """Nearest-integer division, halves away from the floor side. b > 0."""
    q, r = divmod(a, b)
    return q + (1 if 2 * r >= b else 0)


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def tau(b: int, a: int, D: int) -> int:
    """Canonical residue of b modulo 2a for discriminant D.

    Unique tau = b (mod 2|a|) with
        -|a| < tau <= |a|          when a*a > D,
        sqrt(D) - 2|a| < tau <= sqrt(D)   when a*a < D.
    D must be a positive non-square so the two regimes are exclusive and
    the interval endpoints are never integers.
    """
    if a == 0:
        raise InputError("tau needs a != 0")
    if D <= 0 or is_square(D):
        raise InputError("tau needs a positive non-square discriminant")
    aa = abs(a)
    m = 2 * aa
    t = b % m  # in [0, 2|a|)
    if aa * aa > D:
        return t - m if t > aa else t
    r = math.isqrt(D)  # floor of the irrational sqrt(D)
    return r - ((r - t) % m)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with g = gcd(a, b) >= 0 and u*a + v*b = g."""
    if a == 0 and b == 0:
        raise InputError("gcd(0, 0) undefined")
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def _sign(n: int) -> int:
    return 1 if n > 0 else (-1 if n < 0 else 0)


def ext_gcd3(a: int, b: int, c: int) -> tuple[int, int, int, int]:
    """(g, u, v, w) with g = gcd(a, b, c) > 0 and u*a + v*b + w*c = g.

    When a single argument already generates the gcd the trivial
    certificate is returned, which keeps the coefficients minimal for
    the common degenerate calls.
    """
    if a == 0 and b == 0 and c == 0:
        raise InputError("gcd(0, 0, 0) undefined")
    if a != 0 and b % a == 0 and c % a == 0:
        return abs(a), _sign(a), 0, 0
    if b != 0 and a % b == 0 and c % b == 0:
        return abs(b), 0, _sign(b), 0
    if c != 0 and a % c == 0 and b % c == 0:
        return abs(c), 0, 0, _sign(c)
    if a == 0 and b == 0:
        return abs(c), 0, 0, _sign(c)
    g1, u1, v1 = ext_gcd(a, b)
    g, s, w = ext_gcd(g1, c)
    # s is free modulo c/g (with w moving by g1/g); keep it small so the
    # final coefficients stay polynomial in the inputs.
    if c != 0:
        step = c // g
        if step != 0:
            t = div_round(s, step)
            s -= t * step
            w += t * (g1 // g)
    u, v = s * u1, s * v1
    assert u * a + v * b + w * c == g
    return g, u, v, w


# ---------------------------------------------------------------------------
# FixReal
# ---------------------------------------------------------------------------


class FixReal:
    """Signed fixed-point real with a certified absolute error bound."""

    __slots__ = ("man", "scale", "err")

    def __init__(self, man: int, scale: int, err: int = 0):
        if scale < 0 or err < 0:
            raise InputError("FixReal needs scale >= 0 and err >= 0")
        self.man = man
        self.scale = scale
        self.err = err

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, scale: int = 0) -> "FixReal":
        return cls(0, scale, 0)

    @classmethod
    def from_int(cls, n: int, scale: int = 0) -> "FixReal":
        return cls(n << scale, scale, 0)

    @classmethod
    def from_fraction(cls, fr: Fraction, scale: int) -> "FixReal":
        fr = Fraction(fr)
        man = div_round(fr.numerator << scale, fr.denominator)
        exact = man * fr.denominator == (fr.numerator << scale)
        return cls(man, scale, 0 if exact else 1)

    # -- views --------------------------------------------------------------

    def approx_fraction(self) -> Fraction:
        return Fraction(self.man, 1 << self.scale)

    def err_fraction(self) -> Fraction:
        return Fraction(self.err, 1 << self.scale)

    def interval(self) -> tuple[Fraction, Fraction]:
        d = 1 << self.scale
        return Fraction(self.man - self.err, d), Fraction(self.man + self.err, d)

    def to_float(self) -> float:
        return self.man / (1 << self.scale) if self.scale < 1020 else float(self.approx_fraction())

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"FixReal({self.to_float():.12g} ~{self.err} ulp @2^-{self.scale})"

    # -- rescaling / arithmetic ---------------------------------------------

    def rescale(self, scale: int) -> "FixReal":
        if scale == self.scale:
            return self
        if scale > self.scale:
            sh = scale - self.scale
            return FixReal(self.man << sh, scale, self.err << sh)
        sh = self.scale - scale
        man = div_round(self.man, 1 << sh)
        if self.err == 0 and self.man % (1 << sh) == 0:
            return FixReal(man, scale, 0)
        err = ceil_div(self.err, 1 << sh) + 1
        return FixReal(man, scale, err)

    def __neg__(self) -> "FixReal":
        return FixReal(-self.man, self.scale, self.err)

    def _pair(self, other) -> tuple["FixReal", "FixReal"]:
        if isinstance(other, FixReal):
            s = max(self.scale, other.scale)
            return self.rescale(s), other.rescale(s)
        fr = Fraction(other)
        o = FixReal.from_fraction(fr, self.scale)
        return self, o

    def __add__(self, other) -> "FixReal":
        x, y = self._pair(other)
        return FixReal(x.man + y.man, x.scale, x.err + y.err)

    def __sub__(self, other) -> "FixReal":
        x, y = self._pair(other)
        return FixReal(x.man - y.man, x.scale, x.err + y.err)

    def mul_int(self, n: int) -> "FixReal":
        return FixReal(self.man * n, self.scale, self.err * abs(n))

    def half(self) -> "FixReal":
        return FixReal(self.man, self.scale + 1, self.err)

    # -- certified comparisons ----------------------------------------------

    def cmp(self, other) -> int | None:
        """-1 / +1 when the order is certain, None when the error
        intervals overlap."""
        if isinstance(other, FixReal):
            x, y = self._pair(other)
            lo = x.man - x.err - (y.man + y.err)
            hi = x.man + x.err - (y.man - y.err)
        else:
            fr = Fraction(other)
            d = 1 << self.scale
            lo = (self.man - self.err) * fr.denominator - fr.numerator * d
            hi = (self.man + self.err) * fr.denominator - fr.numerator * d
        if hi < 0:
            return -1
        if lo > 0:
            return 1
        if lo == hi == 0:
            return 0  # both sides exact and equal
        return None

    def gt(self, other) -> bool:
        return self.cmp(other) == 1

    def lt(self, other) -> bool:
        return self.cmp(other) == -1

    # -- grid rounding -------------------------------------------------------

    def floor_mul(self, mult: int) -> tuple[int, bool]:
        """(floor(value * mult), certified?).  Uncertain results return the
        floor of the central value."""
        t = self.man * mult
        e = self.err * mult
        lo = (t - e) >> self.scale
        hi = (t + e) >> self.scale
        return t >> self.scale, lo == hi

    def ceil_mul(self, mult: int) -> tuple[int, bool]:
        t = self.man * mult
        e = self.err * mult
        lo = ceil_div(t - e, 1 << self.scale)
        hi = ceil_div(t + e, 1 << self.scale)
        return ceil_div(t, 1 << self.scale), lo == hi

    # -- decimal output ------------------------------------------------------

    def to_decimal(self, digits: int) -> tuple[str, str]:
        """(value string truncated to `digits` decimals, decimal error bound).

        Truncation plus one extra ulp of decimal error keeps the printed
        interval sound.
        """
        tenp = 10 ** digits
        num = self.man * tenp
        mag = abs(num) >> self.scale  # truncate toward zero
        sign = "-" if num < 0 else ""
        ip, fp = divmod(mag, tenp)
        val = f"{sign}{ip}.{fp:0{digits}d}" if digits else f"{sign}{ip}"
        err_dec = Fraction(self.err, 1 << self.scale) + Fraction(1, tenp)
        return val, _fraction_to_sci(err_dec)


def _fraction_to_sci(fr: Fraction) -> str:
    """Upper bound on a nonnegative `fr` as a compact scientific string."""
    if fr <= 0:
        return "0"
    e10 = len(str(fr.numerator)) - len(str(fr.denominator))
    p = Fraction(10) ** e10
    while fr >= 10 * p:
        e10 += 1
        p *= 10
    while fr < p:
        e10 -= 1
        p /= 10
    mant = fr / p  # in [1, 10)
    m1000 = ceil_div(mant.numerator * 1000, mant.denominator)
    if m1000 >= 10000:
        m1000, e10 = 1000, e10 + 1
    return f"{m1000 / 1000:.3f}e{e10:+03d}"


# ---------------------------------------------------------------------------
# ln / sqrt at certified precision
# ---------------------------------------------------------------------------

_LN2_CACHE: dict[int, tuple[int, int]] = {}
_SQRT_CACHE: dict[tuple[int, int], int] = {}


def _atanh_series(Z: int, w: int) -> tuple[int, int]:
    """sum Z^{2k+1}/(2k+1) at scale w for 0 <= Z <= 2^w/3; (value, err ulp)."""
    acc = 0
    term = Z
    zz = div_round(Z * Z, 1 << w)
    k = 0
    while term:
        acc += div_round(term, 2 * k + 1)
        term = div_round(term * zz, 1 << w)
        k += 1
    # each iteration contributes <= 1 ulp of rounding; the dropped tail is
    # below 1 ulp once term reaches 0
    return acc, 2 * k + 2


def _ln2_scaled(w: int) -> tuple[int, int]:
    if w not in _LN2_CACHE:
        s, e = _atanh_series(div_round(1 << w, 3), w)
        _LN2_CACHE[w] = (2 * s, 2 * e + 2)
    return _LN2_CACHE[w]


def sqrt_fix(n: int, scale: int) -> FixReal:
    """floor(sqrt(n) * 2**scale) as a FixReal with 1 ulp error."""
    if n < 0:
        raise InputError("sqrt_fix needs n >= 0")
    key = (n, scale)
    if key not in _SQRT_CACHE:
        _SQRT_CACHE[key] = math.isqrt(n << (2 * scale))
    return FixReal(_SQRT_CACHE[key], scale, 1)


def ln_fix(x, prec_bits: int) -> FixReal:
    """Natural log of a positive rational or FixReal.

    The result is correct to within its recorded err_bound (a couple of
    ulps at 2**-prec_bits); input error on a FixReal argument is
    propagated through the derivative bound 1/x_lo.
    """
    if prec_bits < 4:
        raise InputError("prec_bits too small")
    in_err_ulps = 0
    if isinstance(x, FixReal):
        if x.man - x.err <= 0:
            raise PrecisionError("ln argument not certainly positive")
        p, q = x.man, 1 << x.scale
        # propagated error: err/x_lo, expressed later at working scale
        in_err_ulps = -1  # marker; computed below with w known
    else:
        fr = Fraction(x)
        if fr <= 0:
            raise InputError("ln needs a positive argument")
        p, q = fr.numerator, fr.denominator

    w = prec_bits + 32
    one = 1 << w

    # exponent e with 2^e <= p/q < 2^(e+1)
    e = p.bit_length() - q.bit_length()
    if e >= 0:
        if p < (q << e):
            e -= 1
    else:
        if (p << (-e)) < q:
            e -= 1
    # mantissa m = (p/q) * 2^-e in [1, 2), rounded to w bits
    if w - e >= 0:
        M = div_round(p << (w - e), q)
    else:
        M = div_round(p, q << (e - w))
    if M >= (one << 1):
        e += 1
        M = div_round(M, 2)

    err_w = 0
    if M == one:
        lnm = 0
    else:
        Z = div_round((M - one) << w, M + one)
        s, serr = _atanh_series(Z, w)
        lnm = 2 * s
        # 2*series error + z-quantisation (datanh/dz <= 9/8 for z <= 1/3)
        # + mantissa quantisation (dln/dm <= 1)
        err_w += 2 * serr + 3 + 1

    res = lnm
    if e:
        l2, l2err = _ln2_scaled(w)
        res += e * l2
        err_w += abs(e) * l2err

    if in_err_ulps == -1:
        x_lo = x.man - x.err
        err_w += ceil_div(x.err << w, x_lo) + 1

    sh = 1 << (w - prec_bits)
    return FixReal(div_round(res, sh), prec_bits, ceil_div(err_w, sh) + 1)


def ln2_fix(prec_bits: int) -> FixReal:
    w = prec_bits + 32
    l2, l2err = _ln2_scaled(w)
    sh = 1 << 32
    return FixReal(div_round(l2, sh), prec_bits, ceil_div(l2err, sh) + 1)


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    quotients: list[int]
    convergents: list[tuple[int, int]]


def cf_convergents(num: int, den: int) -> CFExpansion:
    """Continued fraction of num/den (den > 0) with all convergents.

    Convergent denominators are positive and each convergent is in lowest
    terms; the final convergent equals num/den reduced.
    """
    if den <= 0:
        raise InputError("cf_convergents needs den > 0")
    quots: list[int] = []
    convs: list[tuple[int, int]] = []
    h0, h1 = 0, 1  # h_{-2}, h_{-1}
    k0, k1 = 1, 0
    a, b = num, den
    while b:
        qq = a // b  # floor division keeps negative numerators correct
        a, b = b, a - qq * b
        h0, h1 = h1, qq * h1 + h0
        k0, k1 = k1, qq * k1 + k0
        quots.append(qq)
        convs.append((h1, k1))
    g = math.gcd(num, den)
    assert convs[-1] == (num // g, den // g)
    return CFExpansion(quots, convs)


# ---------------------------------------------------------------------------
# Fourier weights of an indicator vector
# ---------------------------------------------------------------------------


def dft_indicator(positions, q: int) -> np.ndarray:
    """Probability weights |<j|F|P>|^2 for the uniform superposition on a
    position set P inside Z_q, q a power of two.

    Output sums to 1 (checked to 1e-12); prob[j] = |sum_m e^(2 pi i j m/q)|^2
    / (|P| q).
    """
    if q < 1 or q & (q - 1):
        raise InputError("q must be a power of two")
    if q > 1 << 24:
        raise ResourceCapError(f"q = {q} exceeds the in-memory FFT cap 2^24")
    pos = np.asarray(list(positions), dtype=np.int64)
    if pos.size == 0:
        raise InputError("empty position set")
    if pos.min() < 0 or pos.max() >= q:
        raise InputError("positions must lie in [0, q)")
    vec = np.zeros(q, dtype=np.float64)
    vec[pos] = 1.0
    X = np.fft.fft(vec)
    probs = (X.real * X.real + X.imag * X.imag) / (pos.size * q)
    if abs(probs.sum() - 1.0) > 1e-12:
        raise PrecisionError("FFT normalisation drifted beyond 1e-12")
    return probs
