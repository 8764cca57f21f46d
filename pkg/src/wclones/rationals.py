"""Exact rationals and the extended value ``INF`` used by weighted relations."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from .errors import InputError

_RATIONAL_RE = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class _Infinity:
    """Positive infinity adjoined to Q; absorbs addition and every scaling."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, _Infinity):
            return self
        if other < 0:
            raise ValueError("negative multiple of infinity is undefined")
        # 0 * inf = inf by convention
        return self

    __rmul__ = __mul__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("wclones-inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()


def is_inf(value) -> bool:
    return value is INF


def to_rational(value) -> Fraction:
    """Parse an int, Fraction or canonical ``"p/q"`` text; floats are rejected."""
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise InputError(f"not an exact rational literal: {value!r}")
        text = value.replace(" ", "")
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise InputError(f"zero denominator: {value!r}") from None
    raise InputError(f"not an exact rational (floats are rejected): {value!r}")


def to_ext_rational(value):
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    if value is INF:
        return INF
    return to_rational(value)


def format_rational(value) -> str:
    if value is INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
