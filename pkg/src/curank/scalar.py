"""Exact arithmetic on the extended half-line [0, inf].

Finite values are canonical ``Fraction`` objects; infinity is a tag.  The
conventions ``0 * inf = 0`` and ``0/0 = inf/inf = 0`` are the ones every
functional and ratio computation in the package relies on.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union

ExtLike = Union["ExtScalar", int, Fraction, str]


def _parse(text: str) -> Fraction | None:
    s = text.strip().lower()
    if s in ("inf", "infinity", "∞", "+inf"):
        return None
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an extended scalar: {text!r}") from exc


@total_ordering
class ExtScalar:
    """A nonnegative rational or +inf."""

    __slots__ = ("_q",)

    def __init__(self, value: ExtLike = 0) -> None:
        if isinstance(value, ExtScalar):
            q = value._q
        elif isinstance(value, str):
            q = _parse(value)
        elif isinstance(value, bool):
            raise TypeError("bool is not an extended scalar")
        elif isinstance(value, (int, Fraction)):
            q = Fraction(value)
        else:
            raise TypeError(f"cannot build ExtScalar from {type(value).__name__}")
        if q is not None and q < 0:
            raise ValueError(f"negative value {q}")
        object.__setattr__(self, "_q", q)

    def __setattr__(self, name, value):
        raise AttributeError("ExtScalar is immutable")

    @classmethod
    def infinity(cls) -> "ExtScalar":
        return cls("inf")

    # -- inspection -------------------------------------------------------
    @property
    def is_infinite(self) -> bool:
        return self._q is None

    @property
    def is_finite(self) -> bool:
        return self._q is not None

    @property
    def is_zero(self) -> bool:
        return self._q == 0

    @property
    def fraction(self) -> Fraction:
        if self._q is None:
            raise ValueError("infinity has no rational value")
        return self._q

    def is_integer(self) -> bool:
        return self._q is None or self._q.denominator == 1

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: ExtLike) -> "ExtScalar":
        return ext_add(self, ext(other))

    __radd__ = __add__

    def __mul__(self, other: ExtLike) -> "ExtScalar":
        return ext_mul(self, ext(other))

    __rmul__ = __mul__

    def reciprocal(self) -> "ExtScalar":
        """1/x with 1/0 = inf and 1/inf = 0."""
        if self._q is None:
            return ZERO
        if self._q == 0:
            return INF
        return ExtScalar(1 / self._q)

    # -- order and hashing --------------------------------------------------
    def _key(self):
        return (1, 0) if self._q is None else (0, self._q)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, str)) and not isinstance(other, bool):
            try:
                other = ExtScalar(other)
            except (ValueError, TypeError):
                return NotImplemented
        if not isinstance(other, ExtScalar):
            return NotImplemented
        return self._q == other._q

    def __lt__(self, other) -> bool:
        if not isinstance(other, ExtScalar):
            other = ext(other)
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(float("inf")) if self._q is None else hash(self._q)

    def __str__(self) -> str:
        return "inf" if self._q is None else str(self._q)

    def __repr__(self) -> str:
        return f"ExtScalar('{self}')"


def ext(value: ExtLike) -> ExtScalar:
    return value if isinstance(value, ExtScalar) else ExtScalar(value)


def parse_ext(text: str) -> ExtScalar:
    return ExtScalar(text)


INF = ExtScalar.infinity()
ZERO = ExtScalar(0)
ONE = ExtScalar(1)


def ext_add(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    if a.is_infinite or b.is_infinite:
        return INF
    return ExtScalar(a.fraction + b.fraction)


def ext_mul(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    if a.is_zero or b.is_zero:
        return ZERO
    if a.is_infinite or b.is_infinite:
        return INF
    return ExtScalar(a.fraction * b.fraction)


def ext_div_ratio(a: ExtScalar, b: ExtScalar) -> ExtScalar:
    """The least r with ``a <= r*b``; 0/0 and inf/inf are read as 0."""
    if a.is_zero:
        return ZERO
    if b.is_infinite:
        return ZERO
    if a.is_infinite or b.is_zero:
        return INF
    return ExtScalar(a.fraction / b.fraction)


def ext_sum(values) -> ExtScalar:
    total = ZERO
    for v in values:
        total = ext_add(total, ext(v))
    return total
