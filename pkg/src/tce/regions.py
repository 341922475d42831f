"""Convex regions cut from translated cones, in exact coordinates.

Every cone constraint in play bounds one of two linear functionals of
z = re + i*im:

    s0(z) = re - cot(alpha_0) * im        (right-edge family)
    s1(z) = re + cot(alpha_{d+1}) * im    (left-edge family)

Membership in a translated cone reduces to interval tests:

    z in C_0 - x       <=>  s0(z) > -x
    z in C_c - x       <=>  s0(z) <= -x  and  s1(z) >= -x
    z in C_{d+1} - x   <=>  s1(z) < -x

so every atom here is a product of two intervals in (s0, s1) coordinates
with exact endpoints in Z + Z*lam.  Floats enter only when a concrete point
is tested or a vertex is produced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp

from .cf import ContinuedFraction, SemiIndex, error_shift_combination, error_term
from .cones import INTERNAL_GUARD_BITS, Point, TceParams
from .errors import AmbiguousBoundary, InvalidIndex
from .exact import ZLambda


@dataclass
class Interval:
    """An interval with exact endpoints; None means unbounded on that side."""

    lo: Optional[ZLambda]
    lo_closed: bool
    hi: Optional[ZLambda]
    hi_closed: bool

    def endpoints_float(self, precision_bits: int):
        lo = None if self.lo is None else self.lo.to_float(precision_bits)
        hi = None if self.hi is None else self.hi.to_float(precision_bits)
        return lo, hi

    def contains(self, s, lo_f, hi_f, guard) -> bool:
        """Membership of the float s, with a guard band around each endpoint."""
        if lo_f is not None:
            if abs(s - lo_f) < guard:
                raise AmbiguousBoundary("value within guard tolerance of a region edge")
            if s < lo_f:
                return False
        if hi_f is not None:
            if abs(s - hi_f) < guard:
                raise AmbiguousBoundary("value within guard tolerance of a region edge")
            if s > hi_f:
                return False
        return True


@dataclass
class Region:
    """A convex region described by interval constraints on (s0, s1).

    kind is one of "S" (a parallelogram atom of the return partition),
    "U" (a tail union of atoms), "X"/"Y" (the two extra golden atoms).
    `cone_anchors` records, in the order the defining cone intersection is
    written, the exact vertex abscissa of each translated cone.
    """

    kind: str
    index: Optional[SemiIndex]
    s0: Interval
    s1: Interval
    params: TceParams
    cf: ContinuedFraction
    cone_anchors: tuple = ()
    return_shift: Optional[ZLambda] = None

    _floats: Optional[tuple] = None

    # -- float frame -----------------------------------------------------

    def _frame(self):
        if self._floats is None:
            wp = self.params.precision_bits + INTERNAL_GUARD_BITS
            with mp.workprec(wp):
                self._floats = (
                    self.s0.endpoints_float(wp),
                    self.s1.endpoints_float(wp),
                )
        return self._floats

    def s_values(self, z: Point):
        params = self.params
        with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
            s0 = z.re - params.cot0 * z.im
            s1 = z.re - params.cot1 * z.im
        return s0, s1

    # -- queries ------------------------------------------------------------

    def contains(self, z: Point, guard=None) -> bool:
        if guard is None:
            guard = self.params.guard()
        (lo0, hi0), (lo1, hi1) = self._frame()
        s0, s1 = self.s_values(z)
        with mp.workprec(self.params.precision_bits + INTERNAL_GUARD_BITS):
            return self.s0.contains(s0, lo0, hi0, guard) and self.s1.contains(s1, lo1, hi1, guard)

    @property
    def is_bounded(self) -> bool:
        return None not in (self.s0.lo, self.s0.hi, self.s1.lo, self.s1.hi)

    def _corner(self, s0_f, s1_f) -> Point:
        params = self.params
        with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
            im = (s0_f - s1_f) / (params.cot1 - params.cot0)
            re = s0_f + params.cot0 * im
            return Point(re, im)

    def vertices(self) -> tuple:
        """The four corners, counterclockwise, for bounded regions."""
        if not self.is_bounded:
            raise ValueError("region is unbounded; use polygon(box=...) instead")
        (lo0, hi0), (lo1, hi1) = self._frame()
        corners = [
            self._corner(lo0, lo1),
            self._corner(hi0, lo1),
            self._corner(hi0, hi1),
            self._corner(lo0, hi1),
        ]
        area2 = mp.mpf(0)
        for i in range(4):
            a, b = corners[i], corners[(i + 1) % 4]
            area2 += a.re * b.im - b.re * a.im
        if area2 < 0:
            corners.reverse()
        return tuple(corners)

    def side_lengths(self) -> tuple:
        """Measured side lengths (s0-family edge, s1-family edge)."""
        v = self.vertices()
        d = lambda a, b: mp.hypot(a.re - b.re, a.im - b.im)
        return (d(v[1], v[2]), d(v[0], v[1]))

    def sample(self, rng: random.Random, margin: float = 0.05, span: float = 1.0) -> Point:
        """A point drawn uniformly from the region's interior.

        Bounded directions use barycentric mixing `margin` away from the
        edges; unbounded directions extend `span` beyond the finite endpoint.
        """
        (lo0, hi0), (lo1, hi1) = self._frame()

        def draw(lo, hi):
            u = rng.random()
            if lo is None and hi is None:
                raise ValueError("cannot sample a doubly unbounded direction")
            if lo is None:
                lo = hi - span
            if hi is None:
                hi = lo + span
            return lo + (margin + u * (1 - 2 * margin)) * (hi - lo)

        with mp.workprec(self.params.precision_bits + INTERNAL_GUARD_BITS):
            return self._corner(draw(lo0, hi0), draw(lo1, hi1))

    def polygon(self, box=None) -> tuple:
        """Vertex list; unbounded regions are clipped to `box` = (re0, re1, im0, im1)."""
        if self.is_bounded and box is None:
            return self.vertices()
        if box is None:
            box = (-3.0, 3.0, 0.0, 3.0)
        params = self.params
        with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
            re0, re1, im0, im1 = (mp.mpf(v) for v in box)
            poly = [Point(re0, im0), Point(re1, im0), Point(re1, im1), Point(re0, im1)]
            (lo0, hi0), (lo1, hi1) = self._frame()
            cuts = []
            if lo0 is not None:
                cuts.append(lambda z: (z.re - params.cot0 * z.im) - lo0)
            if hi0 is not None:
                cuts.append(lambda z: hi0 - (z.re - params.cot0 * z.im))
            if lo1 is not None:
                cuts.append(lambda z: (z.re - params.cot1 * z.im) - lo1)
            if hi1 is not None:
                cuts.append(lambda z: hi1 - (z.re - params.cot1 * z.im))
            for cut in cuts:
                poly = clip_polygon(poly, cut)
                if not poly:
                    return ()
            return tuple(poly)

    def to_json(self, box=None) -> dict:
        verts = self.polygon(box)
        doc = {
            "kind": self.kind,
            "vertices": [[float(v.re), float(v.im)] for v in verts],
        }
        if self.index is not None:
            doc["index"] = [self.index.m, self.index.n]
        return doc

    def __repr__(self):
        tag = self.kind if self.index is None else "%s[%d,%d]" % (self.kind, *self.index)
        return "Region(%s)" % tag


def clip_polygon(poly, signed):
    """Sutherland-Hodgman clip of a convex polygon by {signed(z) >= 0}."""
    out = []
    k = len(poly)
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        fa, fb = signed(a), signed(b)
        if fa >= 0:
            out.append(a)
        if (fa > 0 > fb) or (fa < 0 < fb):
            t = fa / (fa - fb)
            out.append(Point(a.re + t * (b.re - a.re), a.im + t * (b.im - a.im)))
    return out


# -- region constructors ----------------------------------------------------------


def smn_region(params: TceParams, idx, cf: Optional[ContinuedFraction] = None) -> Region:
    """The parallelogram atom at index (m, n) of the first-return partition.

    Built over `cf` (default: the map's own lam) so that scaled copies over
    Gauss-shifted fractions share the same angle frame.
    """
    cf = cf or params.lam
    m, n = idx
    if not cf.in_index_set(m, n, strict=True):
        raise InvalidIndex("(%d, %d) is not an admissible atom index" % (m, n))
    d0 = error_term(cf, m, 0)
    dn = error_shift_combination(cf, m, n)   # n*err(m,0) + err(m-1,0)
    dn1 = dn + d0                            # equals error_term(cf, m, n+1)
    if m % 2 == 0:
        s0 = Interval(-d0, False, ZLambda(Fraction(0), Fraction(0), cf), True)
        s1 = Interval(-dn1, True, -dn, False)
        anchors = (-d0, ZLambda(Fraction(0), Fraction(0), cf), -dn1, -dn)
    else:
        s0 = Interval(-dn, False, -dn1, True)
        s1 = Interval(ZLambda(Fraction(0), Fraction(0), cf), True, -d0, False)
        anchors = (-dn, ZLambda(Fraction(0), Fraction(0), cf), -dn1, -d0)
    return Region(
        kind="S",
        index=SemiIndex(m, n),
        s0=s0,
        s1=s1,
        params=params,
        cf=cf,
        cone_anchors=anchors,
        return_shift=dn1,
    )


def u_region(params: TceParams, anchor, cf: Optional[ContinuedFraction] = None) -> Region:
    """The convex tail union of atoms from `anchor` onward in the well-ordering."""
    cf = cf or params.lam
    k, l = anchor
    if not cf.in_index_set(k, l, strict=True):
        raise InvalidIndex("(%d, %d) is not an admissible anchor" % (k, l))
    d0 = error_term(cf, k, 0)
    dl = error_shift_combination(cf, k, l)
    zero = ZLambda(Fraction(0), Fraction(0), cf)
    if k % 2 == 0:
        s0 = Interval(-d0, False, zero, True)
        s1 = Interval(zero, True, -dl, False)
        anchors = (-d0, zero, -dl)
    else:
        s0 = Interval(-dl, False, zero, True)
        s1 = Interval(zero, True, -d0, False)
        anchors = (-dl, zero, -d0)
    return Region(
        kind="U",
        index=SemiIndex(k, l),
        s0=s0,
        s1=s1,
        params=params,
        cf=cf,
        cone_anchors=anchors,
    )


def golden_y(params: TceParams) -> Region:
    """Middle-cone points that re-enter the middle cone in a single step."""
    cf = params.lam
    eta = params.eta
    zero = ZLambda(Fraction(0), Fraction(0), cf)
    return Region(
        kind="Y",
        index=None,
        s0=Interval(None, False, zero, True),
        s1=Interval(eta, True, None, False),
        params=params,
        cf=cf,
        return_shift=-eta,
    )


def golden_x(params: TceParams) -> Region:
    """Middle-cone points that step out right-translated once and come back."""
    cf = params.lam
    eta = params.eta
    lam_minus_eta = ZLambda(Fraction(-params.p), Fraction(params.q + 1), cf)
    zero = ZLambda(Fraction(0), Fraction(0), cf)
    return Region(
        kind="X",
        index=None,
        s0=Interval(None, False, -lam_minus_eta, True),
        s1=Interval(zero, True, eta, False),
        params=params,
        cf=cf,
        return_shift=lam_minus_eta,
    )


def middle_cone(params: TceParams) -> Region:
    """The middle cone itself, as a Region."""
    cf = params.lam
    zero = ZLambda(Fraction(0), Fraction(0), cf)
    return Region(
        kind="C",
        index=None,
        s0=Interval(None, False, zero, True),
        s1=Interval(zero, True, None, False),
        params=params,
        cf=cf,
    )
