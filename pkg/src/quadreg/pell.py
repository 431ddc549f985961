"""Fundamental units and integer solutions of x^2 - d y^2 = 1.

The unit comes out of the principal cycle as an exact product of the
step generators, so the result is provably fundamental, never a float
reconstruction.  The smallest Pell solution is then a short power of it:
- working in Z[sqrt d] (any non-square d): norm +1 gives the solution
  directly, norm -1 gives it by squaring;
- for square-free d = 1 mod 4 the fundamental unit of the full ring of
  integers may have half-integer coordinates; the smallest power landing
  in Z[sqrt d] with norm +1 has exponent 1, 2, 3 or 6.

Unit sizes grow like exp(R); `QUADREG_MAX_DIGITS` (default 100000) caps
the decimal size this module will materialize.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .cycle import PrincipalCycle, walk_cycle
from .errors import InputError, ResourceCapError
from .field import FieldCtx, QuadElem, is_unit, make_field, make_order
from .numerics import is_square

_DIGIT_CAP_ENV = "QUADREG_MAX_DIGITS"
_DIGIT_CAP_DEFAULT = 100_000


@dataclass(frozen=True)
class PellSolution:
    d: int
    x: int
    y: int

    def __post_init__(self):
        if self.x * self.x - self.d * self.y * self.y != 1:
            raise InputError(f"({self.x}, {self.y}) does not solve the d={self.d} equation")


def digit_cap() -> int:
    raw = os.environ.get(_DIGIT_CAP_ENV)
    if raw is None:
        return _DIGIT_CAP_DEFAULT
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{_DIGIT_CAP_ENV} must be an integer, got {raw!r}")
    if cap <= 0:
        raise InputError(f"{_DIGIT_CAP_ENV} must be positive")
    return cap


def _tree_product(ctx: FieldCtx, factors: list[QuadElem]) -> QuadElem:
    if not factors:
        return QuadElem.one(ctx)
    while len(factors) > 1:
        nxt = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def fundamental_unit(ctx: FieldCtx, cycle: PrincipalCycle | None = None) -> QuadElem:
    """Exact fundamental unit (> 1) of the working order."""
    if cycle is None:
        cycle = walk_cycle(ctx, prec_bits=64)
    est_digits = cycle.regulator.to_float() / math.log(10)
    cap = digit_cap()
    if est_digits > cap:
        raise ResourceCapError(
            f"unit needs about {int(est_digits)} digits, cap is {cap} "
            f"(raise {_DIGIT_CAP_ENV} to override)")
    unit = _tree_product(ctx, [e.gamma.as_quad_elem() for e in cycle.entries])
    assert is_unit(unit) and unit > 1
    return unit


def fundamental_pell_solution(d: int) -> PellSolution:
    """Smallest (x, y) with x, y >= 1 and x^2 - d y^2 = 1."""
    if not isinstance(d, int) or d <= 1:
        raise InputError(f"d must be an integer > 1, got {d!r}")
    if is_square(d):
        raise InputError(f"d = {d} is a perfect square; the equation degenerates")
    try:
        ctx = make_field(d)
    except InputError:
        ctx = make_order(d)
    if ctx.D == d:
        # half-integer coordinates possible; take the smallest power that
        # lands in Z[sqrt d] with norm +1
        eps = fundamental_unit(ctx)
        for k in (1, 2, 3, 6):
            u = eps ** k
            r, s = u.sqrt_d_pair()
            if r.denominator == 1 and s.denominator == 1 and u.norm() == 1:
                return PellSolution(d, int(r), int(s))
        raise AssertionError("no power of the unit solves the equation")
    eps = fundamental_unit(ctx)
    r, s = eps.sqrt_d_pair()
    assert r.denominator == 1 and s.denominator == 1 and r > 0 and s > 0
    x, y = int(r), int(s)
    if eps.norm() == 1:
        return PellSolution(d, x, y)
    return PellSolution(d, 2 * x * x + 1, 2 * x * y)


def solutions(d: int, count: int) -> list[PellSolution]:
    """First `count` solutions, ascending: powers of the fundamental one."""
    if count < 1:
        raise InputError("count must be >= 1")
    first = fundamental_pell_solution(d)
    cap = digit_cap()
    if count * (len(str(first.x)) + 1) > cap:
        raise ResourceCapError(
            f"solution {count} needs about {count * len(str(first.x))} digits, "
            f"cap is {cap}")
    out = [first]
    x1, y1 = first.x, first.y
    x, y = x1, y1
    for _ in range(count - 1):
        x, y = x1 * x + d * y1 * y, x1 * y + y1 * x
        out.append(PellSolution(d, x, y))
    return out


def brute_force_pell(d: int, y_max: int) -> PellSolution | None:
    """Reference scan: smallest solution with y <= y_max, if any.

    Vectorized over y in chunks; float square roots only nominate
    candidates, every hit is verified with exact integer arithmetic.
    """
    if is_square(d) or d <= 1:
        raise InputError("d must be a non-square integer > 1")
    chunk = 1 << 16
    use_numpy = (1 + d * y_max * y_max) < (1 << 62)
    y = 1
    while y <= y_max:
        hi = min(y + chunk, y_max + 1)
        if use_numpy:
            ys = np.arange(y, hi, dtype=np.int64)
            t = 1 + d * ys * ys
            r = np.rint(np.sqrt(t.astype(np.float64))).astype(np.int64)
            hits = ys[r * r == t]
            for yv in hits.tolist():
                xv = math.isqrt(1 + d * yv * yv)
                if xv * xv == 1 + d * yv * yv:
                    return PellSolution(d, xv, yv)
        else:
            for yv in range(y, hi):
                t = 1 + d * yv * yv
                xv = math.isqrt(t)
                if xv * xv == t:
                    return PellSolution(d, xv, yv)
        y = hi
    return None
