"""Directed-rounding interval arithmetic over MPFR.

A :class:`RigorousReal` is a closed interval ``[lo, hi]`` whose endpoints are
MPFR floats.  Every operation rounds the lower endpoint toward -inf and the
upper endpoint toward +inf, so the exact real result always lies inside.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational
from typing import Union

import gmpy2

PRECISION_ENV = "COVERING_LAB_PRECISION"
_FALLBACK_PRECISION = 256
MIN_PRECISION = 64


def default_precision() -> int:
    """Working precision in bits, taken from the environment if set."""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return _FALLBACK_PRECISION
    bits = int(raw)
    if bits < MIN_PRECISION:
        raise ValueError(f"{PRECISION_ENV}={bits} is below the minimum of {MIN_PRECISION} bits")
    return bits


def _resolve(prec: int | None) -> int:
    return default_precision() if prec is None else int(prec)


@lru_cache(maxsize=None)
def _down(prec: int):
    return gmpy2.context(precision=prec, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(prec: int):
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp)


Number = Union["RigorousReal", int, Fraction, str]


def _as_rational(value) -> Fraction:
    if isinstance(value, str):
        text = value.strip().replace("_", "")
        return Fraction(text)
    if isinstance(value, (Integral, Rational)):
        return Fraction(value)
    if isinstance(value, type(gmpy2.mpq())):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, type(gmpy2.mpfr())):
        if not gmpy2.is_finite(value):
            raise ValueError("non-finite endpoint")
        return Fraction(*value.as_integer_ratio())
    if isinstance(value, float):
        # a float is an exact dyadic rational; accept it as such
        return Fraction(value)
    raise TypeError(f"cannot build an exact enclosure from {type(value).__name__}")


class RigorousReal:
    """Closed interval with outward-rounded MPFR endpoints."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi=None, prec: int | None = None):
        prec = _resolve(prec)
        if hi is None:
            hi = lo
        self.lo = gmpy2.mpfr(lo, prec, _down(prec))
        self.hi = gmpy2.mpfr(hi, prec, _up(prec))
        self.prec = prec
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi):
            raise ValueError("NaN endpoint")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # construction -----------------------------------------------------

    @classmethod
    def exact(cls, value, prec: int | None = None) -> "RigorousReal":
        """Tightest enclosure of an exact rational (int, Fraction, or decimal / p/q string)."""
        if isinstance(value, RigorousReal):
            return value if prec is None or value.prec == prec else value._reprec(prec)
        prec = _resolve(prec)
        q = _as_rational(value)
        mq = gmpy2.mpq(q.numerator, q.denominator)
        return cls._raw(gmpy2.mpfr(mq, prec, _down(prec)), gmpy2.mpfr(mq, prec, _up(prec)), prec)

    @classmethod
    def hull(cls, a: "RigorousReal", b: "RigorousReal") -> "RigorousReal":
        prec = max(a.prec, b.prec)
        return cls._raw(min(a.lo, b.lo), max(a.hi, b.hi), prec)

    @classmethod
    def _raw(cls, lo, hi, prec: int) -> "RigorousReal":
        obj = cls.__new__(cls)
        obj.lo, obj.hi, obj.prec = lo, hi, prec
        return obj

    def _reprec(self, prec: int) -> "RigorousReal":
        return RigorousReal._raw(
            gmpy2.mpfr(self.lo, prec, _down(prec)), gmpy2.mpfr(self.hi, prec, _up(prec)), prec
        )

    def _coerce(self, other) -> "RigorousReal":
        if isinstance(other, RigorousReal):
            return other
        return RigorousReal.exact(other, self.prec)

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        return RigorousReal._raw(_down(p).add(self.lo, o.lo), _up(p).add(self.hi, o.hi), p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        return RigorousReal._raw(_down(p).sub(self.lo, o.hi), _up(p).sub(self.hi, o.lo), p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        # bare unary minus would round to the global 53-bit context
        ctx = _down(self.prec)
        return RigorousReal._raw(ctx.minus(self.hi), ctx.minus(self.lo), self.prec)

    def __mul__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        d, u = _down(p), _up(p)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return RigorousReal._raw(
            min(d.mul(a, b) for a, b in pairs), max(u.mul(a, b) for a, b in pairs), p
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        p = max(self.prec, o.prec)
        d, u = _down(p), _up(p)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return RigorousReal._raw(
            min(d.div(a, b) for a, b in pairs), max(u.div(a, b) for a, b in pairs), p
        )

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent):
        if isinstance(exponent, Integral):
            n = int(exponent)
            if n < 0:
                return RigorousReal.exact(1, self.prec) / (self ** (-n))
            if n % 2 == 0 and self.lo < 0 < self.hi:
                hi = max(_up(self.prec).pow(self.hi, n), _up(self.prec).pow(_up(self.prec).minus(self.lo), n))
                return RigorousReal._raw(gmpy2.mpfr(0), hi, self.prec)
            if self.lo >= 0:
                return RigorousReal._raw(
                    _down(self.prec).pow(self.lo, n), _up(self.prec).pow(self.hi, n), self.prec
                )
            if self.hi <= 0:
                mag = (-self) ** n
                return -mag if n % 2 else mag
            result = RigorousReal.exact(1, self.prec)
            for _ in range(n):
                result = result * self
            return result
        return (self._coerce(exponent) * self.log()).exp()

    # elementary functions ---------------------------------------------

    def log(self) -> "RigorousReal":
        if self.lo <= 0:
            raise ValueError(f"log of an interval reaching {self.lo}")
        return RigorousReal._raw(_down(self.prec).log(self.lo), _up(self.prec).log(self.hi), self.prec)

    def exp(self) -> "RigorousReal":
        return RigorousReal._raw(_down(self.prec).exp(self.lo), _up(self.prec).exp(self.hi), self.prec)

    def log1p(self) -> "RigorousReal":
        if self.lo <= -1:
            raise ValueError("log1p argument must exceed -1")
        return RigorousReal._raw(
            _down(self.prec).log1p(self.lo), _up(self.prec).log1p(self.hi), self.prec
        )

    def sqrt(self) -> "RigorousReal":
        if self.lo < 0:
            raise ValueError("sqrt of a negative interval")
        return RigorousReal._raw(_down(self.prec).sqrt(self.lo), _up(self.prec).sqrt(self.hi), self.prec)

    # queries ----------------------------------------------------------

    @property
    def width(self):
        return _up(self.prec).sub(self.hi, self.lo)

    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __float__(self) -> float:
        return self.mid()

    def contains(self, value) -> bool:
        v = RigorousReal.exact(value, self.prec) if not isinstance(value, RigorousReal) else value
        return self.lo <= v.lo and v.hi <= self.hi

    def definitely_lt(self, other) -> bool:
        return self.hi < self._coerce(other).lo

    def definitely_le(self, other) -> bool:
        return self.hi <= self._coerce(other).lo

    def definitely_gt(self, other) -> bool:
        return self.lo > self._coerce(other).hi

    def definitely_ge(self, other) -> bool:
        return self.lo >= self._coerce(other).hi

    def is_finite(self) -> bool:
        return bool(gmpy2.is_finite(self.lo) and gmpy2.is_finite(self.hi))

    # serialisation ----------------------------------------------------

    def endpoints(self, digits: int = 20) -> tuple[str, str]:
        """Decimal strings, lower rounded down and upper rounded up."""
        return decimal_string(self.lo, digits, up=False), decimal_string(self.hi, digits, up=True)

    def to_json(self, digits: int = 20) -> dict:
        lo, hi = self.endpoints(digits)
        return {"lower": lo, "lower_rounding": "down", "upper": hi, "upper_rounding": "up",
                "precision_bits": self.prec}

    def __repr__(self) -> str:
        lo, hi = self.endpoints(12)
        return f"RigorousReal([{lo}, {hi}], prec={self.prec})"


def decimal_string(x, digits: int, up: bool) -> str:
    """Scientific notation with ``digits`` significant digits, rounded toward +inf if ``up``."""
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    q = Fraction(*x.as_integer_ratio())
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    mag = abs(q)
    exp10 = len(str(mag.numerator)) - len(str(mag.denominator))
    if Fraction(10) ** exp10 > mag:
        exp10 -= 1
    scaled = mag * Fraction(10) ** (digits - 1 - exp10)
    # rounding the magnitude away from zero moves a negative number down
    away = up != (q < 0)
    n = -(-scaled.numerator // scaled.denominator) if away else scaled.numerator // scaled.denominator
    if n >= 10**digits:
        exp10 += 1
        n = -(-n // 10) if away else n // 10
    text = str(n)
    mantissa = text[0] + ("." + text[1:] if len(text) > 1 else "")
    return f"{sign}{mantissa}e{exp10:+d}"


def euler_gamma(prec: int | None = None) -> RigorousReal:
    prec = _resolve(prec)
    return RigorousReal._raw(_down(prec).const_euler(), _up(prec).const_euler(), prec)


def rr(value, prec: int | None = None) -> RigorousReal:
    """Shorthand for :meth:`RigorousReal.exact`."""
    return RigorousReal.exact(value, prec)


def rmin(*values: RigorousReal) -> RigorousReal:
    prec = max(v.prec for v in values)
    return RigorousReal._raw(min(v.lo for v in values), min(v.hi for v in values), prec)


def rmax(*values: RigorousReal) -> RigorousReal:
    prec = max(v.prec for v in values)
    return RigorousReal._raw(max(v.lo for v in values), max(v.hi for v in values), prec)
