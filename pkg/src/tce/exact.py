"""Exact arithmetic in the module Q + Q*lam for a fixed irrational lam.

Values are pairs of rational coefficients (a, b) standing for a + b*lam,
with lam carried as a reference to its continued fraction.  Because lam is
irrational, equality is coefficient equality, zero detection is structural,
and the sign of a nonzero element is exactly computable by comparing -a/b
against the quotient stream of lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("coefficients must be int or Fraction, got %r" % type(x).__name__)


@dataclass(frozen=True)
class ZLambda:
    """a + b*lam with exact rational coefficients."""

    a: Fraction
    b: Fraction
    cf: object  # the ContinuedFraction defining lam

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))

    # -- ring-module operations ------------------------------------------

    def _check_same_lambda(self, other: "ZLambda"):
        if self.cf is not other.cf and self.cf != other.cf:
            raise ValueError("cannot combine values over different lambdas")

    def __add__(self, other):
        if isinstance(other, ZLambda):
            self._check_same_lambda(other)
            return ZLambda(self.a + other.a, self.b + other.b, self.cf)
        if isinstance(other, (int, Fraction)):
            return ZLambda(self.a + other, self.b, self.cf)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return ZLambda(-self.a, -self.b, self.cf)

    def __sub__(self, other):
        if isinstance(other, ZLambda):
            self._check_same_lambda(other)
            return ZLambda(self.a - other.a, self.b - other.b, self.cf)
        if isinstance(other, (int, Fraction)):
            return ZLambda(self.a - other, self.b, self.cf)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return ZLambda(self.a * scalar, self.b * scalar, self.cf)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return ZLambda(self.a / scalar, self.b / scalar, self.cf)
        return NotImplemented

    # -- exact predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign of a + b*lam.

        For b != 0 the sign reduces to comparing lam with the rational -a/b,
        which the continued fraction decides exactly; raises DepthExhausted
        if lam's available quotients cannot separate the two.
        """
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        r = -self.a / self.b
        c = self.cf.compare_rational(r.numerator, r.denominator)
        return c if self.b > 0 else -c

    def abs(self) -> "ZLambda":
        return self if self.sign() >= 0 else -self

    # -- numeric value -------------------------------------------------------

    def to_float(self, precision_bits: int = 256):
        """mpf approximation with |result - exact| <= 2^(1-precision_bits)*(|a|+|b|)."""
        if precision_bits < 32:
            raise ValueError("precision_bits must be >= 32")
        with mp.workprec(precision_bits + 16):
            out = mp.mpf(self.a.numerator) / self.a.denominator
            if self.b != 0:
                lam = self.cf.value(precision_bits + 16)
                out += mp.mpf(self.b.numerator) / self.b.denominator * lam
            return out

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, doc: dict, cf) -> "ZLambda":
        return cls(Fraction(doc["a"]), Fraction(doc["b"]), cf)

    def __repr__(self):
        return "ZLambda(%s + %s*lam)" % (self.a, self.b)


def zero(cf) -> ZLambda:
    return ZLambda(Fraction(0), Fraction(0), cf)


def one(cf) -> ZLambda:
    return ZLambda(Fraction(1), Fraction(0), cf)


def lam(cf) -> ZLambda:
    return ZLambda(Fraction(0), Fraction(1), cf)
