"""Exact continued-fraction arithmetic for irrationals in (0, 1).

A number lam = [0; lam_1, lam_2, ...] is represented by its partial
quotients: a finite prefix plus an optional periodic tail.  With a tail the
quotient stream is total (the value is a quadratic irrational); without one
the object is a bounded-depth engine that raises ``DepthExhausted`` past the
prefix, never silently truncating.

Everything downstream (convergents, semiconvergents, the signed errors
Q*lam - P, the index well-ordering) is exact integer arithmetic on top of
the quotient stream.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from mpmath import mp

from .errors import DepthExhausted, InvalidIndex
from .exact import ZLambda


class SemiIndex(NamedTuple):
    """Index (m, n) of a one-sided convergent."""

    m: int
    n: int


class ContinuedFraction:
    """lam = [0; lam_1, lam_2, ...] in (0,1), given by its partial quotients.

    Parameters
    ----------
    prefix : iterable of int
        The leading partial quotients lam_1, lam_2, ... (all >= 1).
    tail : iterable of int, optional
        Quotients repeated forever after the prefix.  Present tail means the
        value is a quadratic irrational and every depth is reachable.
    """

    __slots__ = ("prefix", "tail", "_conv", "_wsum", "__weakref__")

    def __init__(self, prefix: Iterable[int] = (), tail: Optional[Iterable[int]] = None):
        self.prefix = tuple(int(a) for a in prefix)
        self.tail = tuple(int(a) for a in tail) if tail is not None else None
        for a in self.prefix + (self.tail or ()):
            if a < 1:
                raise ValueError("partial quotients must be >= 1, got %r" % (a,))
        if self.tail is not None and len(self.tail) == 0:
            raise ValueError("periodic tail must be non-empty when present")
        if not self.prefix and self.tail is None:
            raise ValueError("need at least one partial quotient")
        # convergent memo: _conv[i] = (p, q) for index m = i - 1
        self._conv = [(1, 0), (0, 1)]
        self._wsum = [0]  # _wsum[m] = lam_1 + ... + lam_m

    # -- quotient stream ---------------------------------------------------

    @property
    def depth(self) -> Optional[int]:
        """Number of available quotients, or None when the stream is total."""
        return None if self.tail is not None else len(self.prefix)

    def quotient(self, k: int) -> int:
        """Return lam_k for k >= 1."""
        if k < 1:
            raise ValueError("quotient index must be >= 1")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        if self.tail is None:
            raise DepthExhausted(
                "quotient %d requested but only %d available" % (k, len(self.prefix))
            )
        return self.tail[(k - len(self.prefix) - 1) % len(self.tail)]

    def quotients(self, count: int) -> tuple:
        return tuple(self.quotient(k) for k in range(1, count + 1))

    def shift(self, m: int) -> "ContinuedFraction":
        """Drop the first m quotients (the m-fold Gauss-map image)."""
        if m < 0:
            raise ValueError("shift must be nonnegative")
        if m == 0:
            return self
        if m < len(self.prefix):
            return ContinuedFraction(self.prefix[m:], self.tail)
        if self.tail is None:
            raise DepthExhausted("cannot shift a %d-quotient prefix by %d" % (len(self.prefix), m))
        r = (m - len(self.prefix)) % len(self.tail)
        return ContinuedFraction((), self.tail[r:] + self.tail[:r])

    # -- convergents and semiconvergents -----------------------------------

    def convergent(self, m: int) -> tuple:
        """Return (p_m, q_m); m = -1 gives the recurrence seed (1, 0)."""
        if m < -1:
            raise ValueError("convergent index must be >= -1")
        while len(self._conv) < m + 2:
            k = len(self._conv) - 1  # next convergent index
            a = self.quotient(k)
            p1, q1 = self._conv[-1]
            p2, q2 = self._conv[-2]
            self._conv.append((a * p1 + p2, a * q1 + q2))
        return self._conv[m + 1]

    def max_n(self, m: int) -> int:
        """Largest n with (m, n) in the index set, i.e. lam_{m+1}."""
        return self.quotient(m + 1)

    def in_index_set(self, m: int, n: int, strict: bool = False) -> bool:
        if m < 0 or n < 0:
            return False
        top = self.max_n(m)
        return n < top if strict else n <= top

    def semiconvergent(self, m: int, n: int, validate: bool = True) -> tuple:
        """Return (P_{m,n}, Q_{m,n}) = numerator/denominator of [0; lam_1..lam_m, n].

        The seed column n = 0 is admitted down to m = -1, where it returns
        the recurrence seed (1, 0).
        """
        if m < -1 or n < 0 or (m == -1 and n > 0):
            raise InvalidIndex("semiconvergent index must have m >= 0, n >= 0")
        if n == 0:
            return self.convergent(m)
        if validate and n > self.max_n(m):
            raise InvalidIndex("n=%d exceeds lam_%d=%d" % (n, m + 1, self.max_n(m)))
        p1, q1 = self.convergent(m)
        p2, q2 = self.convergent(m - 1)
        return (n * p1 + p2, n * q1 + q2)

    # -- the index well-ordering -------------------------------------------

    def w_index(self, m: int, n: int) -> int:
        """Position of (m, n) in the natural well-ordering of semiconvergent indices."""
        if m < 0 or n < 0:
            raise InvalidIndex("w_index needs m, n >= 0")
        while len(self._wsum) <= m:
            k = len(self._wsum)
            self._wsum.append(self._wsum[-1] + self.quotient(k))
        return self._wsum[m] + n

    def w_inverse(self, w: int) -> SemiIndex:
        """The unique (m, n) with n < lam_{m+1} sitting at position w."""
        if w < 0:
            raise ValueError("w must be nonnegative")
        m = 0
        acc = 0
        while True:
            step = self.quotient(m + 1)
            if w < acc + step:
                return SemiIndex(m, w - acc)
            acc += step
            m += 1

    # -- exact comparison against rationals ---------------------------------

    def compare_rational(self, num: int, den: int) -> int:
        """Exact sign of lam - num/den for den > 0.

        Lexicographic comparison of the rational's continued fraction against
        the quotient stream, with orientation alternating by depth.  Never
        ties because lam is irrational.
        """
        if den <= 0:
            raise ValueError("denominator must be positive")
        if num <= 0:
            return 1
        if num >= den:
            return -1
        cs = []
        x, y = num, den
        while x:
            c, rem = divmod(y, x)
            cs.append(c)
            y, x = x, rem
        for i, c in enumerate(cs, start=1):
            a = self.quotient(i)
            if a != c:
                if i % 2 == 1:
                    return -1 if a > c else 1
                return 1 if a > c else -1
        # the rational's expansion is a strict prefix of lam's
        return -1 if len(cs) % 2 else 1

    # -- numeric value -------------------------------------------------------

    def value(self, precision_bits: int = 256):
        """High-precision mpf approximation, accurate to ~2^-precision_bits.

        Uses the convergent p_m/q_m with q_m*q_{m+1} beyond the error target;
        |lam - p_m/q_m| < 1/(q_m*q_{m+1}).
        """
        target = 1 << (precision_bits + 4)
        m = 0
        while True:
            p, q = self.convergent(m)
            _, q2 = self.convergent(m + 1)
            if q * q2 > target:
                break
            m += 1
        with mp.workprec(precision_bits + 16):
            return mp.mpf(p) / q

    # -- constructors and serialization --------------------------------------

    @classmethod
    def parse(cls, spec) -> "ContinuedFraction":
        """Accept a ContinuedFraction, a shorthand string, or a JSON-style dict."""
        if isinstance(spec, cls):
            return spec
        if isinstance(spec, str):
            key = spec.strip().lower()
            if key == "phi":
                return cls((), (1,))
            if key == "sqrt2m1":
                return cls((), (2,))
            raise ValueError("unknown continued fraction shorthand %r" % (spec,))
        if isinstance(spec, dict):
            return cls(tuple(spec.get("prefix", ())), spec.get("tail"))
        raise TypeError("cannot build a continued fraction from %r" % (spec,))

    @classmethod
    def from_real(cls, x, count: int, precision_bits: int = 512) -> "ContinuedFraction":
        """Extract the first `count` quotients of a real in (0, 1).

        The caller is responsible for supplying x at enough precision that
        the extracted quotients are trustworthy.
        """
        with mp.workprec(precision_bits):
            x = mp.mpf(x)
            if not (0 < x < 1):
                raise ValueError("from_real expects a value in (0, 1)")
            qs = []
            for _ in range(count):
                inv = 1 / x
                a = int(mp.floor(inv))
                x = inv - a
                if a < 1 or x <= 0:
                    raise ValueError("quotient extraction lost precision; raise precision_bits")
                qs.append(a)
        return cls(tuple(qs))

    def to_json(self) -> dict:
        doc = {"prefix": list(self.prefix)}
        if self.tail is not None:
            doc["tail"] = list(self.tail)
        return doc

    def __eq__(self, other):
        if not isinstance(other, ContinuedFraction):
            return NotImplemented
        return self.prefix == other.prefix and self.tail == other.tail

    def __hash__(self):
        return hash((self.prefix, self.tail))

    def __repr__(self):
        if self.tail is not None:
            return "ContinuedFraction(%r, tail=%r)" % (list(self.prefix), list(self.tail))
        return "ContinuedFraction(%r)" % (list(self.prefix),)


def gauss_shift(cf: ContinuedFraction, m: int) -> ContinuedFraction:
    """Drop the first m partial quotients (iterated Gauss-map image)."""
    return cf.shift(m)


def phi() -> ContinuedFraction:
    """[0; 1, 1, 1, ...] = (sqrt(5) - 1)/2."""
    return ContinuedFraction((), (1,))


def sqrt2m1() -> ContinuedFraction:
    """[0; 2, 2, 2, ...] = sqrt(2) - 1."""
    return ContinuedFraction((), (2,))


# -- semiconvergent errors ----------------------------------------------------


def error_term(cf: ContinuedFraction, m: int, n: int = 0) -> ZLambda:
    """The signed approximation error Q_{m,n}*lam - P_{m,n}, exactly.

    The seed index (-1, 0) is admitted and evaluates to -1.
    """
    if m == -1:
        if n != 0:
            raise InvalidIndex("only (-1, 0) is admitted at depth -1")
        return ZLambda(Fraction(-1), Fraction(0), cf)
    P, Q = cf.semiconvergent(m, n)
    return ZLambda(Fraction(-P), Fraction(Q), cf)


def error_shift_combination(cf: ContinuedFraction, m: int, n: int) -> ZLambda:
    """n*(q_m lam - p_m) + q_{m-1} lam - p_{m-1}.

    Coincides with error_term(cf, m, n) whenever n >= 1; at n = 0 it is the
    previous-depth error, which is what the region constructions use.
    """
    p1, q1 = cf.convergent(m)
    p2, q2 = cf.convergent(m - 1)
    return ZLambda(Fraction(-(n * p1 + p2)), Fraction(n * q1 + q2), cf)


def error_sign(m: int, n: int = 0) -> int:
    """Sign of the error at (m, n) by the parity rule: positive iff
    (m even, n = 0) or (m odd, n > 0)."""
    if (m % 2 == 0 and n == 0) or (m % 2 == 1 and n > 0):
        return 1
    return -1


def error_scaling_check(
    cf: ContinuedFraction, m: int, j: int, n: int, precision_bits: int = 256, tol_bits: int = 16
) -> bool:
    """Numerically confirm the error-ratio identity under the m-fold shift.

    Checks error(j, n) of the shifted fraction against
    -error(m+j, n)/error(m-1, 0) of the original, at working precision.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    shifted = cf.shift(m)
    with mp.workprec(precision_bits + 32):
        lhs = error_term(shifted, j, n).to_float(precision_bits + 32)
        num = error_term(cf, m + j, n).to_float(precision_bits + 32)
        den = error_term(cf, m - 1, 0).to_float(precision_bits + 32)
        rhs = -num / den
        return abs(lhs - rhs) <= mp.mpf(2) ** (tol_bits - precision_bits)


def gauss_shift_value_check(cf: ContinuedFraction, m: int, precision_bits: int = 256,
                            tol_bits: int = 16) -> bool:
    """Confirm that the shifted fraction's value equals -error(m,0)/error(m-1,0)."""
    with mp.workprec(precision_bits + 32):
        lhs = cf.shift(m).value(precision_bits + 32)
        num = error_term(cf, m, 0).to_float(precision_bits + 32)
        den = error_term(cf, m - 1, 0).to_float(precision_bits + 32)
        return abs(lhs + num / den) <= mp.mpf(2) ** (tol_bits - precision_bits)
