"""The translated cone exchange map on the closed upper half-plane.

The plane is cut into d+2 cones at the origin by angles alpha_0..alpha_{d+1}
summing to pi.  The map is a composition: first the middle cones C_1..C_d are
permuted by rotations about 0 (the outer cones stay put), then each of the
three macro-regions is translated horizontally - by +lam on the left cone,
by -eta on the middle, by -1 on the right (the right translation length is
normalized to 1).

Angles are high-precision floats; lam and eta = p - q*lam stay exact and all
exact statements route through the real line, where the angles play no role.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from mpmath import mp

from .cf import ContinuedFraction
from .errors import AmbiguousBoundary
from .exact import ZLambda

INTERNAL_GUARD_BITS = 32  # extra working bits beyond the requested precision


class Point(NamedTuple):
    """A point of the closed upper half-plane with high-precision coordinates."""

    re: object
    im: object

    def __abs__(self):
        return mp.hypot(self.re, self.im)


def make_point(re, im, precision_bits: int = 256) -> Point:
    with mp.workprec(precision_bits + INTERNAL_GUARD_BITS):
        return Point(mp.mpf(re), mp.mpf(im))


ZERO_POINT = Point(mp.mpf(0), mp.mpf(0))


# -- angle parsing -------------------------------------------------------------

_TERM = _re.compile(r"^([+-]?)(\d+(?:\.\d+)?)?(pi)?(?:/(\d+(?:\.\d+)?))?$")


def parse_angle(text, precision_bits: int = 256):
    """Parse an angle given as a decimal and/or rational multiple of pi.

    Accepts forms like "0.5", "pi/7", "17pi/28-0.5", "pi/2+0.1".
    """
    with mp.workprec(precision_bits + INTERNAL_GUARD_BITS):
        if isinstance(text, (int, float)) or type(text) is mp.mpf:
            return mp.mpf(text)
        s = str(text).replace(" ", "")
        if not s:
            raise ValueError("empty angle")
        # split into signed terms
        terms = _re.findall(r"[+-]?[^+-]+", s)
        total = mp.mpf(0)
        for term in terms:
            match = _TERM.match(term)
            if not match or (match.group(2) is None and match.group(3) is None):
                raise ValueError("cannot parse angle term %r in %r" % (term, text))
            sign = -1 if match.group(1) == "-" else 1
            coeff = mp.mpf(match.group(2)) if match.group(2) else mp.mpf(1)
            value = coeff * (mp.pi if match.group(3) else 1)
            if match.group(4):
                value /= mp.mpf(match.group(4))
            total += sign * value
        return total


# -- parameters -----------------------------------------------------------------


class TceParams:
    """Parameter tuple (alpha, tau, lam, eta, 1) of a translated cone exchange.

    alpha : d+2 cone angles in (0, pi) summing to pi (strings accepted,
        parsed at `precision_bits`).
    tau : permutation of {1..d}, given as the tuple (tau(1), ..., tau(d)).
    lam : irrational translation length in (0, 1) as a ContinuedFraction
        (shorthands "phi" and "sqrt2m1" accepted).
    eta : middle translation, the pair (p, q) of positive integers standing
        for eta = p - q*lam; must satisfy -lam < eta < 1 (checked exactly).
    """

    def __init__(self, alpha: Sequence, tau: Sequence[int], lam, eta,
                 precision_bits: int = 256):
        if precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        self.precision_bits = precision_bits
        self.lam = ContinuedFraction.parse(lam)
        if isinstance(eta, dict):
            eta = (eta["p"], eta["q"])
        self.p, self.q = int(eta[0]), int(eta[1])
        if self.p < 1 or self.q < 1:
            raise ValueError("eta = p - q*lam needs positive integers p, q")

        self.tau = tuple(int(t) for t in tau)
        self.d = len(self.tau)
        if sorted(self.tau) != list(range(1, self.d + 1)):
            raise ValueError("tau must be a permutation of 1..%d" % self.d)
        if len(alpha) != self.d + 2:
            raise ValueError("need %d angles for %d exchanged cones" % (self.d + 2, self.d))

        wp = precision_bits + INTERNAL_GUARD_BITS
        with mp.workprec(wp):
            self.alpha = tuple(parse_angle(a, precision_bits) for a in alpha)
            for a in self.alpha:
                if not (0 < a < mp.pi):
                    raise ValueError("cone angles must lie in (0, pi)")
            total = mp.fsum(self.alpha)
            if abs(total - mp.pi) > mp.mpf(2) ** (4 - precision_bits):
                raise ValueError("cone angles must sum to pi (off by %s)" % mp.nstr(total - mp.pi, 5))
            # cumulative boundaries B_0 = 0 < B_1 = alpha_0 < ... < B_{d+2} = pi
            bounds = [mp.mpf(0)]
            for a in self.alpha:
                bounds.append(bounds[-1] + a)
            self.bounds = tuple(bounds)
            # rotation angle of each exchanged cone: reposition in tau-order
            self.theta = tuple(
                mp.fsum(self.alpha[k] for k in range(1, self.d + 1) if self.tau[k - 1] < self.tau[j - 1])
                - mp.fsum(self.alpha[k] for k in range(1, j))
                for j in range(1, self.d + 1)
            )
            self._rot = tuple((mp.cos(t), mp.sin(t)) for t in self.theta)
            # slopes of the two boundary-line families, as re-intercept multipliers:
            # a point is in the middle cone iff c1*im <= re <= c0*im
            self.cot0 = mp.cot(self.alpha[0])
            self.cot1 = -mp.cot(self.alpha[-1])
            self.sin0 = mp.sin(self.alpha[0])
            self.sin1 = mp.sin(self.alpha[-1])
            self.sin_sum = mp.sin(self.alpha[0] + self.alpha[-1])
            self.lam_f = self.lam.value(wp)
            self.eta_f = self.p - self.q * self.lam_f

        # exact parameter checks: -lam < eta < 1
        if ZLambda(Fraction(self.p), Fraction(1 - self.q), self.lam).sign() <= 0:
            raise ValueError("eta <= -lam: parameters out of range")
        if ZLambda(Fraction(self.p - 1), Fraction(-self.q), self.lam).sign() >= 0:
            raise ValueError("eta >= 1: parameters out of range")

    # -- derived exact values ---------------------------------------------

    @property
    def eta(self) -> ZLambda:
        return ZLambda(Fraction(self.p), Fraction(-self.q), self.lam)

    def guard(self):
        return mp.mpf(2) ** (8 - self.precision_bits)

    def is_golden(self) -> bool:
        """Whether this is the golden-ratio fixture lam = [0; 1,1,...], eta = 1 - lam."""
        if (self.p, self.q) != (1, 1):
            return False
        qs = self.lam.prefix + (self.lam.tail or ())
        return self.lam.tail is not None and all(a == 1 for a in qs)

    def to_json(self) -> dict:
        # enough decimal digits that reparsing at the same precision keeps
        # the angle sum within its validation tolerance
        digits = int(self.precision_bits * 0.302) + 12
        return {
            "alpha": [mp.nstr(a, digits) for a in self.alpha],
            "tau": list(self.tau),
            "lambda": self.lam.to_json(),
            "eta": {"p": self.p, "q": self.q},
            "precision_bits": self.precision_bits,
        }

    @classmethod
    def from_json(cls, doc: dict, precision_bits: Optional[int] = None) -> "TceParams":
        return cls(
            doc["alpha"],
            doc["tau"],
            doc["lambda"],
            doc["eta"],
            precision_bits=precision_bits or doc.get("precision_bits", 256),
        )

    def __repr__(self):
        return "TceParams(d=%d, lam=%r, eta=%d-%d*lam)" % (self.d, self.lam, self.p, self.q)


# -- the cone partition ---------------------------------------------------------


def cone_index(params: TceParams, z: Point, strict: bool = False) -> int:
    """Index of the cone containing z: 0 and d+1 are the outer cones.

    Follows the half-open conventions: the first sector is [0, alpha_0),
    the first exchanged cone is closed on both sides, later sectors are
    half-open on the left.  The origin belongs to cone 1.  In strict mode a
    point within guard tolerance of an interior boundary raises
    AmbiguousBoundary instead of being resolved by the conventions.
    """
    re, im = z.re, z.im
    if im == 0 and re == 0:
        return 1
    guard = params.guard()
    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        if im < 0:
            if im < -guard:
                raise ValueError("point below the real line")
            im = mp.mpf(0)
        if im == 0:
            return 0 if re > 0 else params.d + 1
        arg = mp.atan2(im, re)
        bounds = params.bounds
        if strict:
            for b in bounds[1:-1]:
                if abs(arg - b) < guard:
                    raise AmbiguousBoundary("Arg within guard tolerance of a cone boundary")
        if arg < bounds[1]:
            return 0
        if arg <= bounds[2]:
            return 1
        for j in range(2, params.d + 2):
            if arg <= bounds[j + 1]:
                return j
        return params.d + 1


def rotate(z: Point, cos_t, sin_t) -> Point:
    return Point(z.re * cos_t - z.im * sin_t, z.re * sin_t + z.im * cos_t)


def exchange(params: TceParams, z: Point, strict: bool = False) -> Point:
    """The cone exchange: identity on the outer cones, rotation on the middle ones."""
    j = cone_index(params, z, strict)
    if j == 0 or j == params.d + 1:
        return z
    if z.re == 0 and z.im == 0:
        return z
    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        c, s = params._rot[j - 1]
        return rotate(z, c, s)


def exchange_preimage(params: TceParams, w: Point, strict: bool = False) -> tuple:
    """The point z with exchange(z) = w, together with its cone index.

    Defined off the images of the cone boundaries; raises AmbiguousBoundary
    if no or several rotation branches land back in their own cone.
    """
    hits = []
    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        for j in range(1, params.d + 1):
            c, s = params._rot[j - 1]
            z = rotate(w, c, -s)
            if z.im < 0:
                continue  # this rotation branch exits the half-plane
            try:
                if cone_index(params, z, strict=True) == j:
                    hits.append((z, j))
            except AmbiguousBoundary:
                hits = None
                break
    if hits is None or len(hits) != 1:
        raise AmbiguousBoundary("exchange preimage is ambiguous at this point")
    return hits[0]


def translate(params: TceParams, z: Point, strict: bool = False) -> Point:
    """The piecewise horizontal translation: +lam left, -eta middle, -1 right."""
    j = cone_index(params, z, strict)
    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        if j == 0:
            return Point(z.re - 1, z.im)
        if j == params.d + 1:
            return Point(z.re + params.lam_f, z.im)
        return Point(z.re - params.eta_f, z.im)


def step(params: TceParams, z: Point, strict: bool = False) -> Point:
    """One application of the full map: exchange, then translate."""
    return translate(params, exchange(params, z, strict), strict)


def orbit(params: TceParams, z: Point, steps: int, strict: bool = False):
    """The forward orbit z, F(z), ..., F^steps(z)."""
    out = [z]
    for _ in range(steps):
        z = step(params, z, strict)
        out.append(z)
    return out


def itinerary(params: TceParams, z: Point, steps: int, strict: bool = False):
    """Word over {-1, 0, +1}: the macro-region (left/middle/right) of each iterate."""
    symbols = []
    for k in range(steps):
        j = cone_index(params, z, strict)
        if j == 0:
            symbols.append(1)
        elif j == params.d + 1:
            symbols.append(-1)
        else:
            symbols.append(0)
        if k + 1 < steps:
            z = step(params, z, strict)
    return symbols


# -- scaling conjugacy ------------------------------------------------------------


class ScaledMap:
    """The map with parameters (alpha, tau, lam/a, eta/a, 1/a) for a > 0.

    General a > 0 leaves the exact p - q*lam form of eta, so this is a
    numeric-only parameter record; it exists to check the scaling conjugacy
    (1/a) F(a z) = F_scaled(z) pointwise.
    """

    def __init__(self, params: TceParams, a):
        if isinstance(a, Fraction):
            a = mp.mpf(a.numerator) / a.denominator
        with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
            self.factor = mp.mpf(a)
            if self.factor <= 0:
                raise ValueError("scaling factor must be positive")
            self.params = params
            self.lam_f = params.lam_f / self.factor
            self.eta_f = params.eta_f / self.factor
            self.rho_f = 1 / self.factor

    def step(self, z: Point, strict: bool = False) -> Point:
        params = self.params
        w = exchange(params, z, strict)
        j = cone_index(params, w, strict)
        with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
            if j == 0:
                return Point(w.re - self.rho_f, w.im)
            if j == params.d + 1:
                return Point(w.re + self.lam_f, w.im)
            return Point(w.re - self.eta_f, w.im)


def scale_conjugate(params: TceParams, a) -> ScaledMap:
    """Parameters rescaled by a > 0 about the origin (cones are unchanged)."""
    return ScaledMap(params, a)
