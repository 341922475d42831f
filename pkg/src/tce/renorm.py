"""Renormalization of the first-return map around the origin.

One renormalization step drops two partial quotients off lam, rescales
space by 1 - lam_1*lam (the magnitude of the depth-1 approximation error),
and replaces eta by the error of the next semiconvergent past the incoming
threshold index, taken over the shifted fraction.  On the domain region the
rescaled first-return map of the old parameters coincides with the
first-return map of the new ones; for the golden ratio the step is an exact
fixed point and the return map is exactly self-similar.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp

from .cf import SemiIndex, error_term
from .cones import INTERNAL_GUARD_BITS, Point, TceParams, exchange
from .cones import step as apply_map
from .errors import AmbiguousBoundary, NoPeriodicPoint, NotInDomain
from .exact import ZLambda
from .regions import Region, smn_region, u_region
from .returns import (
    closed_return_map,
    closed_return_time,
    first_return,
    get_baseline,
    sample_atom_preimage,
    threshold_index,
)


@dataclass
class RenormStep:
    kappa_in: TceParams
    kappa_out: TceParams
    scale: ZLambda          # 1 - lam_1*lam over the incoming fraction
    domain: Region          # the tail union over kappa_out anchored at (m0, 0)
    m0: SemiIndex           # threshold index of kappa_in
    threshold_out: SemiIndex

    def scale_float(self, extra_bits: int = INTERNAL_GUARD_BITS):
        return self.scale.to_float(self.kappa_in.precision_bits + extra_bits)

    def to_json(self) -> dict:
        return {
            "lambda_out": self.kappa_out.lam.to_json(),
            "eta_out": {"p": self.kappa_out.p, "q": self.kappa_out.q},
            "scale": self.scale.to_json(),
            "m0": list(self.m0),
            "threshold_out": list(self.threshold_out),
        }


def renormalize(params: TceParams) -> RenormStep:
    """One renormalization step: two Gauss shifts plus the induced eta and scale.

    The outgoing eta is the (negated) error of the semiconvergent at the
    successor of (m0, 0) in the shifted fraction's well-ordering.  That
    choice keeps p', q' >= 1 and -lam' < eta' < 1 in all cases (the
    semiconvergent at (m0, 0) itself degenerates to p' = 0 when m0 = 0), it
    reproduces eta' = eta at the golden fixed point, and it makes the
    outgoing threshold index exactly (m0, 0).
    """
    m0 = threshold_index(params)
    lam_out = params.lam.shift(2)
    succ = lam_out.w_inverse(lam_out.w_index(m0.m, 0) + 1)
    p_out, q_out = lam_out.semiconvergent(*succ)
    kappa_out = TceParams(
        alpha=params.alpha,
        tau=params.tau,
        lam=lam_out,
        eta=(p_out, q_out),
        precision_bits=params.precision_bits,
    )
    scale = ZLambda(Fraction(1), Fraction(-params.lam.quotient(1)), params.lam)
    if scale.sign() <= 0 or (scale - 1).sign() >= 0:
        raise RuntimeError("rescaling factor escaped (0, 1); lam is out of range")
    t_out = threshold_index(kappa_out)
    if t_out != (m0.m, 0):
        raise RuntimeError(
            "outgoing threshold %r does not match the expected (%d, 0)" % (t_out, m0.m)
        )
    domain = u_region(kappa_out, SemiIndex(m0.m, 0))
    return RenormStep(
        kappa_in=params,
        kappa_out=kappa_out,
        scale=scale,
        domain=domain,
        m0=m0,
        threshold_out=SemiIndex(*t_out),
    )


def renorm_tower(params: TceParams, depth: int, partial: bool = False):
    """Iterate renormalization `depth` times.

    With partial=True a depth-exhausted fraction stops the tower early and
    the completed steps are returned instead of raising.
    """
    steps = []
    current = params
    for _ in range(depth):
        try:
            step = renormalize(current)
        except Exception:
            if partial:
                return steps
            raise
        steps.append(step)
        current = step.kappa_out
    return steps


def verify_conjugacy(step: RenormStep, samples: int = 100, seed: int = 0,
                     atom_span: int = 4, tol_bits: int = 16,
                     margin: float = 0.05) -> dict:
    """Sample the renormalization domain and check the conjugacy both ways.

    For each sample z interior to an atom of the domain, compares
      - the closed-form and iterated first-return images of z under the
        renormalized parameters, and
      - 1/scale times the closed-form and iterated first-return images of
        scale*z under the original parameters,
    all four of which must agree within 2^(tol_bits - precision).
    """
    kp = step.kappa_in
    kq = step.kappa_out
    prec = kp.precision_bits
    wp = prec + INTERNAL_GUARD_BITS
    rng = random.Random(seed)
    lam_out = kq.lam
    w0 = lam_out.w_index(step.m0.m, 0)
    atoms = [smn_region(kq, lam_out.w_inverse(w0 + k)) for k in range(atom_span)]

    max_dev = mp.mpf(0)
    checked = 0
    h_mismatches = 0
    with mp.workprec(wp):
        tol = mp.mpf(2) ** (tol_bits - prec)
        s_f = step.scale_float()
        for i in range(samples):
            atom = atoms[i % len(atoms)]
            m, n = atom.index
            try:
                z, zp = sample_atom_preimage(kq, atom, rng, margin)
            except AmbiguousBoundary:
                continue
            # renormalized side
            lhs_closed = closed_return_map(kq, z, atom=atom).landed
            lhs_ret = first_return(kq, z)
            # original side, rescaled
            y = Point(s_f * z.re, s_f * z.im)
            big_atom = smn_region(kp, SemiIndex(m + 2, n))
            rhs_closed_pt = closed_return_map(kp, y, atom=big_atom).landed
            rhs_ret = first_return(kp, y)
            rhs_closed = Point(rhs_closed_pt.re / s_f, rhs_closed_pt.im / s_f)
            rhs_iter = Point(rhs_ret.landed.re / s_f, rhs_ret.landed.im / s_f)

            if lhs_ret.h != closed_return_time(kq, (m, n + 1)):
                h_mismatches += 1
            if rhs_ret.h != closed_return_time(kp, (m + 2, n + 1)):
                h_mismatches += 1

            pts = (lhs_closed, lhs_ret.landed, rhs_closed, rhs_iter)
            ref = pts[0]
            for pt in pts[1:]:
                dev = mp.hypot(pt.re - ref.re, pt.im - ref.im)
                if dev > max_dev:
                    max_dev = dev
            checked += 1

        ok = checked == samples and h_mismatches == 0 and max_dev < tol
        return {
            "samples": samples,
            "checked": checked,
            "h_mismatches": h_mismatches,
            "max_dev": float(max_dev),
            "tol": float(tol),
            "seed": seed,
            "pass": bool(ok),
        }


# -- golden-ratio periodic cascade ---------------------------------------------


def locate_golden_atom(params: TceParams, zp: Point, max_m: int = 200) -> int:
    """The m with zp interior to the m-th golden parallelogram atom."""
    for m in range(max_m):
        if smn_region(params, SemiIndex(m, 0)).contains(zp):
            return m
    raise NotInDomain("exchanged point is not in any golden atom up to m=%d" % max_m)


def detect_period(params: TceParams, z: Point, cap: int = 10**4, tol_bits: int = 16) -> int:
    """Smallest k <= cap with the k-fold first-return image back at z, within tolerance."""
    prec = params.precision_bits
    with mp.workprec(prec + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (tol_bits - prec)
        w = z
        for k in range(1, cap + 1):
            w = first_return(params, w).landed
            if mp.hypot(w.re - z.re, w.im - z.im) < tol:
                return k
    raise NoPeriodicPoint("no return-map period up to %d detected" % cap)


def periodic_cascade(params: TceParams, z: Point, count: int, period_cap: int = 10**4,
                     orbit_cap: int = 4000) -> list:
    """The golden cascade of periodic points sliding down the atom stack.

    Requires golden parameters and a point z whose exchanged image sits in
    some atom S_m and which is periodic under the return map (detected
    numerically; NoPeriodicPoint otherwise).  Emits, for n = 0..count-1, the
    rescaled periodic points z_n with their atom index and closed-form
    return time, plus a demonstration metric: the maximal horizontal
    excursion of a return-length orbit prefix beyond the baseline interval
    [-1, lam], which shrinks as the cascade descends.
    """
    if not params.is_golden():
        raise NotInDomain("the periodic cascade demo is specific to the golden fixture")
    zp = exchange(params, z)
    m = locate_golden_atom(params, zp)
    period = detect_period(params, z, cap=period_cap)

    prec = params.precision_bits
    out = []
    baseline = get_baseline(params)
    with mp.workprec(prec + INTERNAL_GUARD_BITS):
        lam_f = params.lam.value(prec + INTERNAL_GUARD_BITS)
        for n in range(count):
            factor = lam_f ** (2 * n - m)
            zn = Point(z.re * factor, z.im * factor)
            atom_m = 2 * n + (m % 2)
            h = closed_return_time(params, (atom_m, 1), enforce_threshold=False)
            steps = min(h, orbit_cap)
            excursion = mp.mpf(0)
            split_dev = mp.mpf(0)
            radius = mp.hypot(zn.re, zn.im)
            w = zn
            for j in range(1, steps + 1):
                w = apply_map(params, w)
                excursion = max(excursion, w.re - lam_f, -1 - w.re, mp.mpf(0))
                dist = mp.hypot(w.re - baseline.value_float(j), w.im)
                split_dev = max(split_dev, abs(dist - radius))
            out.append({
                "n": n,
                "point": zn,
                "atom": atom_m,
                "return_time": h,
                "period": period,
                "height": float(zn.im),
                "max_excursion": float(excursion),
                "split_radius_dev": float(split_dev),
            })
    return out
