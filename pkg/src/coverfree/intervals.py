"""Certified real arithmetic: intervals with exact rational endpoints.

Every value is an interval [lo, hi] of `fractions.Fraction` endpoints that is
guaranteed to contain the true real number.  Field operations (+, -, *, /,
integer powers) are computed exactly on the endpoints, so rational data stays
a zero-width point interval.  Transcendental functions (exp, log, sqrt) and
the constants pi, e are enclosed by mpmath's rigorous interval context with
outward rounding, then the binary endpoints are converted back to exact
Fractions.

Comparisons are three-valued: an inequality is either certified true,
certified false, or inconclusive (overlapping enclosures).  Checks that come
out inconclusive are meant to be retried at a higher working precision; see
`escalation_schedule` and `certify_with_escalation`.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, TypeVar, Union

from mpmath import ctx_iv

__all__ = [
    "DEFAULT_DIGITS",
    "PRECISION_ENV_VAR",
    "Interval",
    "Trichotomy",
    "certify_with_escalation",
    "compare",
    "default_digits",
    "e_const",
    "escalation_schedule",
    "iexp",
    "ilog",
    "ipow",
    "isqrt_iv",
    "pi_const",
    "pi_fn",
]

PRECISION_ENV_VAR = "COVERFREE_PRECISION"
DEFAULT_DIGITS = 60
MAX_DIGITS = 240

# Extra decimal digits carried internally so that enclosure widths stay well
# below the precision the caller asked for.
_GUARD_DIGITS = 10

_ZERO = Fraction(0)
_ONE = Fraction(1)

Rationalish = Union[int, Fraction]


def default_digits() -> int:
    """Starting precision in significant decimal digits (env-overridable)."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_DIGITS
    digits = int(raw)
    if digits < 1:
        raise ValueError(f"{PRECISION_ENV_VAR} must be positive, got {digits}")
    return digits


def escalation_schedule(start: Optional[int] = None) -> tuple[int, ...]:
    """Precision ladder used when a comparison comes out inconclusive.

    Doubles twice from the starting precision, capped so the final rung is at
    least the standard 240-digit ceiling.
    """
    d = default_digits() if start is None else start
    return (d, 2 * d, max(4 * d, MAX_DIGITS))


_CONTEXTS: dict[int, ctx_iv.MPIntervalContext] = {}


def _context(digits: int) -> ctx_iv.MPIntervalContext:
    ctx = _CONTEXTS.get(digits)
    if ctx is None:
        ctx = ctx_iv.MPIntervalContext()
        ctx.dps = digits + _GUARD_DIGITS
        _CONTEXTS[digits] = ctx
    return ctx


def _raw_to_fraction(raw) -> Fraction:
    """Exact value of a finite libmp float tuple (sign, man, exp, bc)."""
    sign, man, exp, _ = raw
    if man == 0:
        if exp == 0:
            return _ZERO
        raise ValueError("non-finite endpoint in interval enclosure")
    man = int(man)
    value = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -value if sign else value


def _fraction_to_iv(x: Fraction, ctx):
    if x.denominator == 1:
        return ctx.mpf(x.numerator)
    return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)


class Trichotomy(enum.Enum):
    LESS = "LESS"
    GREATER = "GREATER"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Interval:
    """Enclosure [lo, hi] with exact rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: Rationalish) -> "Interval":
        f = Fraction(x)
        return Interval(f, f)

    @staticmethod
    def bounds(lo: Rationalish, hi: Rationalish) -> "Interval":
        return Interval(Fraction(lo), Fraction(hi))

    @staticmethod
    def hull(*items: "Interval") -> "Interval":
        return Interval(min(i.lo for i in items), max(i.hi for i in items))

    # -- inspection ---------------------------------------------------------

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def error_bound(self) -> Fraction:
        """Certified absolute error of the midpoint representation."""
        return self.width / 2

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x: Rationalish) -> bool:
        f = Fraction(x)
        return self.lo <= f <= self.hi

    def __repr__(self) -> str:
        if self.is_point:
            return f"Interval({self.lo})"
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    # -- exact field arithmetic --------------------------------------------

    @staticmethod
    def _coerce(x: "IntervalLike") -> "Interval":
        return x if isinstance(x, Interval) else Interval.point(x)

    def __add__(self, other: "IntervalLike") -> "Interval":
        o = Interval._coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "IntervalLike") -> "Interval":
        return self + (-Interval._coerce(other))

    def __rsub__(self, other: "IntervalLike") -> "Interval":
        return Interval._coerce(other) + (-self)

    def __mul__(self, other: "IntervalLike") -> "Interval":
        o = Interval._coerce(other)
        products = (
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: "IntervalLike") -> "Interval":
        o = Interval._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("division by interval containing zero")
        inv = Interval(1 / o.hi, 1 / o.lo)
        return self * inv

    def __rtruediv__(self, other: "IntervalLike") -> "Interval":
        return Interval._coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact; use ipow")
        if k < 0:
            return Interval.point(1) / (self ** (-k))
        if k == 0:
            return Interval.point(1)
        if k % 2 == 1 or self.lo >= 0:
            return Interval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            return Interval(self.hi**k, self.lo**k)
        return Interval(_ZERO, max(self.lo**k, self.hi**k))


IntervalLike = Union[Interval, int, Fraction]


# -- three-valued comparisons ------------------------------------------------


def compare(a: IntervalLike, b: IntervalLike) -> Trichotomy:
    """Strict trichotomy; INCONCLUSIVE whenever the enclosures overlap."""
    ia, ib = Interval._coerce(a), Interval._coerce(b)
    if ia.hi < ib.lo:
        return Trichotomy.LESS
    if ia.lo > ib.hi:
        return Trichotomy.GREATER
    return Trichotomy.INCONCLUSIVE


def cert_lt(a: IntervalLike, b: IntervalLike) -> Optional[bool]:
    """True/False when `a < b` is decided by the enclosures, else None."""
    ia, ib = Interval._coerce(a), Interval._coerce(b)
    if ia.hi < ib.lo:
        return True
    if ia.lo >= ib.hi:
        return False
    return None


def cert_le(a: IntervalLike, b: IntervalLike) -> Optional[bool]:
    ia, ib = Interval._coerce(a), Interval._coerce(b)
    if ia.hi <= ib.lo:
        return True
    if ia.lo > ib.hi:
        return False
    return None


def cert_gt(a: IntervalLike, b: IntervalLike) -> Optional[bool]:
    return cert_lt(b, a)


def cert_ge(a: IntervalLike, b: IntervalLike) -> Optional[bool]:
    return cert_le(b, a)


T = TypeVar("T")


def certify_with_escalation(
    check: Callable[[int], Optional[T]],
    start_digits: Optional[int] = None,
) -> tuple[Optional[T], int]:
    """Run `check(digits)` along the escalation ladder until it decides.

    Returns (result, digits_used); result is None if every rung was
    inconclusive.
    """
    digits = default_digits() if start_digits is None else start_digits
    schedule = escalation_schedule(digits)
    for d in schedule:
        result = check(d)
        if result is not None:
            return result, d
    return None, schedule[-1]


# -- transcendental enclosures -----------------------------------------------


def _monotone_enclosure(x: Interval, fn_name: str, digits: int) -> Interval:
    """Enclose a monotone-increasing mpmath function applied to `x`."""
    ctx = _context(digits)
    fn = getattr(ctx, fn_name)
    lo_enc = fn(_fraction_to_iv(x.lo, ctx))
    hi_enc = lo_enc if x.is_point else fn(_fraction_to_iv(x.hi, ctx))
    return Interval(
        _raw_to_fraction(lo_enc._mpi_[0]), _raw_to_fraction(hi_enc._mpi_[1])
    )


def iexp(x: IntervalLike, digits: int = DEFAULT_DIGITS) -> Interval:
    ix = Interval._coerce(x)
    if ix.is_point and ix.lo == 0:
        return Interval.point(1)
    return _monotone_enclosure(ix, "exp", digits)


def ilog(x: IntervalLike, digits: int = DEFAULT_DIGITS) -> Interval:
    ix = Interval._coerce(x)
    if ix.lo <= 0:
        raise ValueError(f"log requires a certified-positive argument, got {ix}")
    if ix.is_point and ix.lo == 1:
        return Interval.point(0)
    return _monotone_enclosure(ix, "log", digits)


def isqrt_iv(x: IntervalLike, digits: int = DEFAULT_DIGITS) -> Interval:
    ix = Interval._coerce(x)
    if ix.lo < 0:
        raise ValueError(f"sqrt requires a nonnegative argument, got {ix}")
    if ix.is_point:
        num, den = ix.lo.numerator, ix.lo.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Interval.point(Fraction(rn, rd))
    return _monotone_enclosure(ix, "sqrt", digits)


def ipow(x: IntervalLike, y: IntervalLike, digits: int = DEFAULT_DIGITS) -> Interval:
    """x**y for positive x, via exp(y * log x)."""
    iy = Interval._coerce(y)
    if iy.is_point and iy.lo.denominator == 1:
        return Interval._coerce(x) ** int(iy.lo)
    return iexp(iy * ilog(x, digits), digits)


def pi_const(digits: int = DEFAULT_DIGITS) -> Interval:
    ctx = _context(digits)
    enc = ctx.pi
    return Interval(_raw_to_fraction(enc._mpi_[0]), _raw_to_fraction(enc._mpi_[1]))


def e_const(digits: int = DEFAULT_DIGITS) -> Interval:
    ctx = _context(digits)
    enc = ctx.e
    return Interval(_raw_to_fraction(enc._mpi_[0]), _raw_to_fraction(enc._mpi_[1]))


_E_INV_LO = Fraction(36, 100)  # crude rational bracket of 1/e, 0.36 < 1/e < 0.37
_E_INV_HI = Fraction(37, 100)


def pi_fn(x: IntervalLike, digits: int = DEFAULT_DIGITS) -> Interval:
    """The self-power x**x for x >= 0, with the continuity convention 0**0 = 1.

    Computed in the log domain as exp(x log x).  On [0, a] the self-power
    decreases from 1 down to its minimum at 1/e and increases afterwards, so
    enclosures of intervals touching 0 are taken as the hull over the
    critical points {0+, 1/e, hi}.
    """
    ix = Interval._coerce(x)
    if ix.lo < 0:
        raise ValueError(f"self-power defined for x >= 0, got {ix}")
    if ix.hi == 0:
        return Interval.point(1)
    if ix.lo > 0:
        return iexp(ix * ilog(ix, digits), digits)
    pieces = [Interval.point(1)]
    if ix.hi > _E_INV_LO:
        mid = Interval(_E_INV_LO, min(ix.hi, _E_INV_HI))
        pieces.append(iexp(mid * ilog(mid, digits), digits))
    top = Interval.point(ix.hi)
    pieces.append(iexp(top * ilog(top, digits), digits))
    return Interval.hull(*pieces)


def log_pi_fn(x: IntervalLike, digits: int = DEFAULT_DIGITS) -> Interval:
    """log(x**x) = x log x for certified-positive x (log-domain workhorse)."""
    ix = Interval._coerce(x)
    return ix * ilog(ix, digits)
