"""First returns to the middle cone.

The exact baseline orbit of the origin drives everything: the orbit of 0
stays on the real line, where the map is a two-interval exchange away from
the origin, so the t-th iterate is B*lam - A for nonnegative integers A, B
that the exact sign of the previous iterate determines.  A first return of
an off-axis middle-cone point z reduces (via the splitting property of the
orbit) to marching that exact orbit against two cotangent thresholds set by
the height of the exchanged point - no 2D iteration and no float drift in
the horizontal coordinate.
"""

from __future__ import annotations

import random
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp

from .cf import ContinuedFraction, SemiIndex, error_shift_combination, error_term
from .cones import (
    INTERNAL_GUARD_BITS,
    Point,
    TceParams,
    cone_index,
    exchange,
    step,
)
from .errors import AmbiguousBoundary, BelowThreshold, BudgetExceeded, NotInDomain
from .exact import ZLambda
from .regions import Region, golden_x, golden_y, middle_cone, smn_region


@dataclass(frozen=True)
class BaselineState:
    """The t-th iterate of the origin: value = -eta + b*lam - a exactly."""

    t: int
    a: int
    b: int
    value: ZLambda


class BaselineOrbit:
    """Lazily extended exact orbit of 0 on the real line.

    Internally tracks (A_t, B_t) with value_t = B_t*lam - A_t, where
    A_t = a_t + p and B_t = b_t + q; both stay positive for t >= 1 so the
    value is never zero and its sign is exactly computable.
    """

    def __init__(self, params: TceParams):
        self.params = params
        self.A = [0, params.p]
        self.B = [0, params.q]
        wp = params.precision_bits + INTERNAL_GUARD_BITS
        with mp.workprec(wp):
            self._lam_f = params.lam.value(wp)
            self._vals = [mp.mpf(0), params.q * self._lam_f - params.p]

    def extend(self, t_max: int):
        cf = self.params.lam
        with mp.workprec(self.params.precision_bits + INTERNAL_GUARD_BITS):
            while len(self.A) <= t_max:
                A, B = self.A[-1], self.B[-1]
                s = cf.compare_rational(A, B)  # sign of B*lam - A
                if s < 0:
                    B += 1
                else:
                    A += 1
                self.A.append(A)
                self.B.append(B)
                self._vals.append(B * self._lam_f - A)

    def coeffs(self, t: int) -> tuple:
        self.extend(t)
        return self.A[t], self.B[t]

    def value(self, t: int) -> ZLambda:
        A, B = self.coeffs(t)
        return ZLambda(Fraction(-A), Fraction(B), self.params.lam)

    def value_float(self, t: int):
        self.extend(t)
        return self._vals[t]

    def state(self, t: int) -> BaselineState:
        if t < 1:
            raise ValueError("baseline states are defined for t >= 1")
        A, B = self.coeffs(t)
        return BaselineState(t, A - self.params.p, B - self.params.q, self.value(t))


_baseline_cache = weakref.WeakKeyDictionary()


def get_baseline(params: TceParams) -> BaselineOrbit:
    orbit = _baseline_cache.get(params)
    if orbit is None:
        orbit = BaselineOrbit(params)
        _baseline_cache[params] = orbit
    return orbit


def baseline_orbit(params: TceParams, t_max: int):
    """BaselineState list for t = 1..t_max."""
    orbit = get_baseline(params)
    orbit.extend(t_max)
    return [orbit.state(t) for t in range(1, t_max + 1)]


# -- index threshold and closed-form return times -------------------------------


def threshold_index(params: TceParams) -> SemiIndex:
    """The largest index whose semiconvergent still has P < p or Q < q.

    Qualifying indices form an initial segment of the well-ordering because
    P and Q are nondecreasing along it, so this is the predecessor of the
    first index with P >= p and Q >= q.
    """
    cf = params.lam
    prev = None
    w = 0
    while True:
        idx = cf.w_inverse(w)
        P, Q = cf.semiconvergent(*idx)
        if P >= params.p and Q >= params.q:
            if prev is None:
                raise RuntimeError("index (0,0) should always qualify")
            return prev
        prev = idx
        w += 1


def closed_return_time(params: TceParams, idx, enforce_threshold: bool = True) -> int:
    """(Q_{m,n} - q) + (P_{m,n} - p) + 1.

    Above the admissible threshold this is the exact first-return time
    attached to the index; at the threshold itself the formula value is
    returned as-is (it may be zero), and below it BelowThreshold is raised
    unless enforcement is disabled.
    """
    m, n = idx
    P, Q = params.lam.semiconvergent(m, n)
    if enforce_threshold:
        t0 = threshold_index(params)
        if params.lam.w_index(m, n) < params.lam.w_index(*t0):
            raise BelowThreshold("(%d, %d) sits below the threshold index %r" % (m, n, t0))
    return (Q - params.q) + (P - params.p) + 1


def return_time_recurrence_check(params: TceParams, m: int, n: int) -> bool:
    """h_{m,n+1} = (n+1) h_{m,0} + h_{m-1,0} + (n+1)(p + q - 1), exactly."""
    h = lambda i, j: closed_return_time(params, (i, j), enforce_threshold=False)
    lhs = h(m, n + 1)
    rhs = (n + 1) * h(m, 0) + h(m - 1, 0) + (n + 1) * (params.p + params.q - 1)
    return lhs == rhs


# -- the first-return oracle ------------------------------------------------------


@dataclass
class FirstReturn:
    h: int
    landed: Point
    exchanged: Point
    landed_coeffs: tuple  # (A, B) with landed re = Re(exchanged) + B*lam - A


def first_return(params: TceParams, z: Point, max_steps: int = 10**7,
                 strict: bool = False) -> FirstReturn:
    """Brute-force first return of z in the middle cone, via the baseline orbit.

    Computes the exchanged point once, then marches the exact orbit of 0
    against the two cotangent thresholds determined by the exchanged height.
    """
    d = params.d
    j = cone_index(params, z, strict)
    if not 1 <= j <= d:
        raise NotInDomain("first returns are taken from the middle cone")
    zp = exchange(params, z, strict)
    if zp.im == 0:
        raise NotInDomain("the origin's orbit stays on the real line and never returns")
    orbit = get_baseline(params)
    guard = params.guard()
    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        lo = params.cot1 * zp.im  # = -Im * cot(alpha_{d+1})
        hi = params.cot0 * zp.im  # = +Im * cot(alpha_0)
        x0 = zp.re
        t = 1
        chunk = 256
        while t <= max_steps:
            orbit.extend(min(t + chunk, max_steps))
            upto = min(len(orbit.A) - 1, max_steps)
            while t <= upto:
                x = x0 + orbit._vals[t]
                if abs(x - lo) < guard or abs(x - hi) < guard:
                    raise AmbiguousBoundary("orbit grazes the middle-cone boundary at step %d" % t)
                if lo < x < hi:
                    return FirstReturn(
                        h=t,
                        landed=Point(x, zp.im),
                        exchanged=zp,
                        landed_coeffs=(orbit.A[t], orbit.B[t]),
                    )
                t += 1
            chunk = min(chunk * 2, 1 << 16)
    raise BudgetExceeded("no return within %d steps" % max_steps)


def first_return_2d(params: TceParams, z: Point, max_steps: int = 10**6,
                    strict: bool = False) -> tuple:
    """Independent cross-check: iterate the full 2D map until the middle cone recurs."""
    d = params.d
    if not 1 <= cone_index(params, z, strict) <= d:
        raise NotInDomain("first returns are taken from the middle cone")
    w = z
    for t in range(1, max_steps + 1):
        w = step(params, w, strict)
        if 1 <= cone_index(params, w, strict) <= d:
            return t, w
    raise BudgetExceeded("no return within %d steps" % max_steps)


# -- locating points in the return partition ------------------------------------


def atom_sequence(params: TceParams, cf: Optional[ContinuedFraction] = None,
                  start_w: int = 0):
    """Atoms in well-ordering order, lazily."""
    cf = cf or params.lam
    w = start_w
    while True:
        idx = cf.w_inverse(w)
        yield smn_region(params, idx, cf)
        w += 1


def locate_exchanged(params: TceParams, zp: Point, golden: Optional[bool] = None,
                     max_atoms: int = 400) -> Region:
    """The atom of the return partition containing an (already exchanged) point.

    In golden mode the partition is {Y, X, S_2, S_3, ...}; in general it is
    the family of parallelogram atoms from the threshold index onward, and a
    point outside their union raises NotInDomain.
    """
    if golden is None:
        golden = params.is_golden()
    if not middle_cone(params).contains(zp):
        raise NotInDomain("point is not in the middle cone")

    with mp.workprec(params.precision_bits + INTERNAL_GUARD_BITS):
        s0 = zp.re - params.cot0 * zp.im
        s1 = zp.re - params.cot1 * zp.im
        extent = max(abs(s0), abs(s1))

    candidates = []
    if golden:
        candidates.append(golden_y(params))
        candidates.append(golden_x(params))
        start_w = params.lam.w_index(2, 0)
    else:
        t0 = threshold_index(params)
        start_w = params.lam.w_index(*t0)

    consec_small = 0
    gen = atom_sequence(params, start_w=start_w)
    for k in range(max_atoms):
        region = candidates[k] if k < len(candidates) else next(gen)
        if region.contains(zp):
            return region
        if region.kind == "S":
            size = abs(region.return_shift.to_float(params.precision_bits))
            if size * 4 < extent:
                consec_small += 1
                if consec_small >= 3:
                    raise NotInDomain("point lies outside the union of return atoms")
            else:
                consec_small = 0
    raise NotInDomain("no atom found within the search budget")


def locate(params: TceParams, z: Point, golden: Optional[bool] = None) -> Region:
    """Atom of the return partition that the exchanged image of z falls in."""
    return locate_exchanged(params, exchange(params, z), golden)


# -- closed-form return map --------------------------------------------------------


@dataclass
class ClosedReturn:
    h: int
    landed: Point
    atom: Region


def closed_return_map(params: TceParams, z: Point, atom: Optional[Region] = None,
                      enforce_threshold: bool = True) -> ClosedReturn:
    """The first-return image of z by the closed form: exchange plus an exact shift."""
    zp = exchange(params, z)
    if atom is None:
        atom = locate_exchanged(params, zp)
    if atom.return_shift is None:
        raise NotInDomain("atom %r carries no closed-form return data" % (atom,))
    if atom.kind == "S":
        m, n = atom.index
        h = closed_return_time(params, (m, n + 1), enforce_threshold=enforce_threshold)
    elif atom.kind == "Y":
        h = 1
    elif atom.kind == "X":
        h = 2
    else:
        raise NotInDomain("no closed-form return on region kind %r" % (atom.kind,))
    wp = params.precision_bits + INTERNAL_GUARD_BITS
    with mp.workprec(wp):
        shift = atom.return_shift.to_float(wp)
        return ClosedReturn(h=h, landed=Point(zp.re + shift, zp.im), atom=atom)


# -- exact orbit inequalities -------------------------------------------------------


def lower_bound_check(params: TceParams, m: int, t: int) -> bool:
    """|F^t(0)| >= |error(m, 0)|, decided exactly."""
    v = get_baseline(params).value(t)
    bound = error_term(params.lam, m, 0)
    return (v.abs() - bound.abs()).sign() >= 0


def two_sided_bound_check(params: TceParams, idx, t: int) -> bool:
    """The parity-dependent two-sided orbit bound at index (m, n), exactly."""
    m, n = idx
    v = get_baseline(params).value(t)
    d0 = error_term(params.lam, m, 0)
    dn = error_shift_combination(params.lam, m, n)
    if m % 2 == 0:
        return (v - d0).sign() >= 0 or (v - dn).sign() <= 0
    return (v - d0).sign() <= 0 or (v - dn).sign() >= 0


# -- interior sampling of atoms and their exchange preimages -------------------------


def orbit_csv(params: TceParams, z: Point, steps: int, precision_digits: int = 40) -> str:
    """Forward orbit of a single point as CSV with header t,re,im."""
    rows = ["t,re,im"]
    w = z
    for t in range(steps + 1):
        rows.append("%d,%s,%s" % (t, mp.nstr(w.re, precision_digits),
                                  mp.nstr(w.im, precision_digits)))
        if t < steps:
            w = step(params, w)
    return "\n".join(rows) + "\n"


def returns_csv(params: TceParams, points, precision_digits: int = 40) -> str:
    """First-return batch as CSV with header re,im,h,re_out,im_out."""
    rows = ["re,im,h,re_out,im_out"]
    for z in points:
        ret = first_return(params, z)
        rows.append("%s,%s,%d,%s,%s" % (
            mp.nstr(z.re, precision_digits), mp.nstr(z.im, precision_digits),
            ret.h,
            mp.nstr(ret.landed.re, precision_digits),
            mp.nstr(ret.landed.im, precision_digits),
        ))
    return "\n".join(rows) + "\n"


def sample_atom_preimage(params: TceParams, region: Region, rng: random.Random,
                         margin: float = 0.05, retries: int = 64) -> tuple:
    """Draw z in the middle cone with exchange(z) interior to `region`.

    Returns (z, exchanged).  Points whose preimage branch is ambiguous are
    redrawn, deterministically in the rng sequence.
    """
    from .cones import exchange_preimage

    for _ in range(retries):
        zp = region.sample(rng, margin)
        try:
            z, _ = exchange_preimage(params, zp)
            return z, zp
        except AmbiguousBoundary:
            continue
    raise AmbiguousBoundary("could not draw an unambiguous preimage in %d tries" % retries)
