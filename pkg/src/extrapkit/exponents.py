"""Exact arithmetic on extended Lebesgue exponents.

Every exponent handled by the planners (p, q, range endpoints, iteration
bookkeeping exponents, ...) is a *nonnegative rational or +infinity*, and
every identity the planners certify is an exact rational equality.  Floats
never enter this layer.

Conventions, used everywhere without further comment:

    1/inf = 0,   1/0 = inf,   1' = inf,   inf' = 1,

where ' denotes the Hoelder conjugate, 1/p + 1/p' = 1.

Most planner algebra is affine in *reciprocals* of exponents, and reciprocal
differences may legitimately be negative (off-diagonal shifts).  Those signed
intermediate quantities are plain :class:`fractions.Fraction` values; only the
exponents themselves are confined to [0, inf].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

__all__ = [
    "Exponent",
    "INF",
    "Reciprocal",
    "as_exponent",
    "conjugate",
    "harmonic_sum",
    "exp_str",
]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")

ExponentLike = Union["Exponent", int, Fraction, str]


class Exponent:
    """A nonnegative rational or +infinity, with exact arithmetic.

    Instances are immutable, hashable and totally ordered (infinity is the
    maximum).  Arithmetic is exact; operations whose result would be negative
    or indeterminate (inf*0, 0/0, inf-inf) raise :class:`DomainError` instead
    of silently leaving the domain.
    """

    __slots__ = ("_num",)

    def __init__(self, value: ExponentLike | None = None, *, _inf: bool = False):
        if _inf:
            self._num = None
            return
        if isinstance(value, Exponent):
            self._num = value._num
            return
        if isinstance(value, str):
            self._num = _parse_str(value)
            return
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise DomainError(f"cannot build an exponent from {value!r}")
        v = Fraction(value)
        if v < 0:
            raise DomainError(f"exponent must be nonnegative, got {v}")
        self._num = v

    # -- basic views ------------------------------------------------------

    @property
    def is_inf(self) -> bool:
        return self._num is None

    @property
    def frac(self) -> Fraction:
        """The exact rational value; raises on infinity."""
        if self._num is None:
            raise DomainError("infinite exponent has no rational value")
        return self._num

    def __float__(self) -> float:
        return float("inf") if self._num is None else float(self._num)

    def __bool__(self) -> bool:
        return self._num is None or self._num != 0

    # -- parsing / formatting ---------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Exponent":
        """Parse "inf", "2" or "3/2".  Floating literals are rejected."""
        return cls(text)

    def __str__(self) -> str:
        return "inf" if self._num is None else str(self._num)

    def __repr__(self) -> str:
        return f"Exponent({str(self)!r})"

    # -- ordering ----------------------------------------------------------

    def _key(self, other) -> tuple:
        if isinstance(other, Exponent):
            o = other._num
        elif isinstance(other, (int, Fraction)):
            o = Fraction(other)
        else:
            return NotImplemented, None
        return self._num, o

    def __eq__(self, other):
        s, o = self._key(other)
        if s is NotImplemented:
            return NotImplemented
        return s == o

    def __lt__(self, other):
        s, o = self._key(other)
        if s is NotImplemented:
            return NotImplemented
        if s is None:
            return False
        if o is None:
            return True
        return s < o

    def __le__(self, other):
        eq = self.__eq__(other)
        lt = self.__lt__(other)
        if eq is NotImplemented or lt is NotImplemented:
            return NotImplemented
        return eq or lt

    def __gt__(self, other):
        le = self.__le__(other)
        return NotImplemented if le is NotImplemented else not le

    def __ge__(self, other):
        lt = self.__lt__(other)
        return NotImplemented if lt is NotImplemented else not lt

    def __hash__(self):
        return hash(("Exponent", self._num))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: ExponentLike) -> "Exponent":
        o = as_exponent(other)
        if self.is_inf or o.is_inf:
            return INF
        return Exponent(self._num + o._num)

    __radd__ = __add__

    def __sub__(self, other: ExponentLike) -> "Exponent":
        o = as_exponent(other)
        if self.is_inf:
            if o.is_inf:
                raise DomainError("inf - inf is indeterminate")
            return INF
        if o.is_inf:
            raise DomainError("finite - inf is negative")
        return Exponent(self._num - o._num)

    def __mul__(self, other: ExponentLike) -> "Exponent":
        o = as_exponent(other)
        if self.is_inf or o.is_inf:
            if self == 0 or o == 0:
                raise DomainError("inf * 0 is indeterminate")
            return INF
        return Exponent(self._num * o._num)

    __rmul__ = __mul__

    def __truediv__(self, other: ExponentLike) -> "Exponent":
        o = as_exponent(other)
        if self.is_inf and o.is_inf:
            raise DomainError("inf / inf is indeterminate")
        if self.is_inf:
            return INF
        if o.is_inf:
            return Exponent(0)
        if o._num == 0:
            if self._num == 0:
                raise DomainError("0 / 0 is indeterminate")
            return INF  # 1/0 = inf convention
        return Exponent(self._num / o._num)

    # -- the reciprocal pair -------------------------------------------------

    def reciprocal(self) -> "Exponent":
        """1/p with the 0 <-> inf convention; involutive and total."""
        if self._num is None:
            return Exponent(0)
        if self._num == 0:
            return INF
        return Exponent(1 / self._num)

    def conjugate(self) -> "Exponent":
        return conjugate(self)


INF = Exponent(_inf=True)


def _parse_str(text: str) -> Fraction | None:
    t = text.strip().lower()
    if t in ("inf", "infinity", "+inf", "oo"):
        return None
    if not _RATIONAL_RE.match(t):
        raise DomainError(
            f"exponent literal {text!r} is not a rational 'num/den' or 'inf'"
        )
    v = Fraction(t)
    if v < 0:
        raise DomainError(f"exponent must be nonnegative, got {v}")
    return v


def as_exponent(x: ExponentLike) -> Exponent:
    """Coerce int / Fraction / string to an :class:`Exponent`."""
    return x if isinstance(x, Exponent) else Exponent(x)


@dataclass(frozen=True)
class Reciprocal:
    """1/p as an exact rational.

    All feasibility systems in the planners are affine in this form, so it is
    the working representation there.  The embedded value may be any rational
    (signed differences are legal); conversion back to an exponent requires a
    nonnegative value and is lossless.
    """

    inv: Fraction

    @classmethod
    def of(cls, p: ExponentLike) -> "Reciprocal":
        p = as_exponent(p)
        if p.is_inf:
            return cls(Fraction(0))
        if p.frac == 0:
            raise DomainError("1/0 = inf is not representable as a Reciprocal")
        return cls(Fraction(1, 1) / p.frac)

    def to_exponent(self) -> Exponent:
        if self.inv < 0:
            raise DomainError(f"reciprocal {self.inv} is negative")
        if self.inv == 0:
            return INF
        return Exponent(1 / self.inv)


def rec(p: ExponentLike) -> Fraction:
    """1/p as a plain Fraction (p > 0 required; 1/inf = 0)."""
    return Reciprocal.of(p).inv


def from_rec(t: Fraction) -> Exponent:
    """Inverse of :func:`rec`: the exponent with reciprocal t >= 0."""
    return Reciprocal(Fraction(t)).to_exponent()


def conjugate(p: ExponentLike) -> Exponent:
    """Hoelder conjugate p' with 1/p + 1/p' = 1, for p >= 1.

    1' = inf and inf' = 1; the map is an exact involution on [1, inf].
    """
    p = as_exponent(p)
    if p < 1:
        raise DomainError(f"conjugate requires p >= 1, got {p}")
    return from_rec(1 - rec(p))


def harmonic_sum(qs: Iterable[ExponentLike]) -> Exponent:
    """The exponent p with 1/p = sum of 1/q_j, exactly.

    Infinite entries contribute 0; zero entries are rejected (their
    reciprocal is infinite and the sum would be meaningless).
    """
    total = Fraction(0)
    for q in qs:
        q = as_exponent(q)
        if q == 0:
            raise DomainError("harmonic_sum requires every entry > 0")
        total += rec(q)
    return from_rec(total)


def exp_str(x) -> str:
    """Serialize an exponent-like value as 'num/den' or 'inf'.

    Accepts Exponent, Fraction (possibly signed) and int; this is the one
    string form used in all JSON/CSV output.
    """
    if isinstance(x, Exponent):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    raise DomainError(f"cannot serialize {x!r} as an exponent string")
