"""Exact coefficient fields: rationals (default) and prime fields F_p.

Every coefficient in the kernel is an exact field element; floating point
is never used.  Rational coefficients are plain ``fractions.Fraction``
values, prime-field coefficients are :class:`FpElement` values.  Both
support the arithmetic operators the series kernel relies on
(``+ - * / ==`` and truthiness for zero tests).
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    """Raised for malformed scalars or incompatible field arithmetic."""


class FpElement:
    """An element of F_p. Immutable, hashable, interoperable with ints."""

    __slots__ = ("val", "p")

    def __init__(self, val: int, p: int):
        self.val = val % p
        self.p = p

    def _lift(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldError(f"mixed prime fields F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, int):
            return FpElement(other, self.p)
        raise FieldError(f"cannot coerce {other!r} into F_{self.p}")

    def __add__(self, other):
        o = self._lift(other)
        return FpElement(self.val + o.val, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return FpElement(self.val - o.val, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return FpElement(o.val - self.val, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return FpElement(self.val * o.val, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.val == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElement(self.val * pow(o.val, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o.__truediv__(self)

    def __neg__(self):
        return FpElement(-self.val, self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.val, self.p))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"{self.val}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Rationals:
    """The field Q, with Fraction elements."""

    name = "rational"
    characteristic = 0

    def __call__(self, num, den=1):
        return Fraction(num, den)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {text!r}") from exc

    def format(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field F_p for a prime p."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"
        self.characteristic = p

    def __call__(self, num, den=1):
        x = FpElement(num, self.p)
        if den != 1:
            x = x / FpElement(den, self.p)
        return x

    @property
    def zero(self):
        return FpElement(0, self.p)

    @property
    def one(self):
        return FpElement(1, self.p)

    def parse(self, text: str) -> FpElement:
        frac = Fraction(text)
        if frac.denominator % self.p == 0:
            raise FieldError(f"{text} has no image in F_{self.p}")
        return self(frac.numerator, frac.denominator)

    def format(self, x) -> str:
        return str(x.val)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


QQ = Rationals()


def field_by_name(name: str):
    """Resolve a ``--field`` style name: ``rational`` or ``fp:<prime>``."""
    if name == "rational":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise FieldError(f"unknown field {name!r}")
