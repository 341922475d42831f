"""Seeded, deterministic invariant suites over all modules.

Each check returns a small report dict; `run_all` strings them together into
a machine-readable document whose bytes depend only on (config, seed,
precision, scale).  The CLI `verify` subcommand serializes this and exits
nonzero on any failure.
"""

from __future__ import annotations

import random
from fractions import Fraction

from mpmath import mp

from .cf import ContinuedFraction, SemiIndex, error_shift_combination, error_sign, error_term
from .cones import (
    INTERNAL_GUARD_BITS,
    Point,
    TceParams,
    cone_index,
    exchange,
    itinerary,
    make_point,
    orbit,
    scale_conjugate,
    step,
)
from .errors import AmbiguousBoundary, NotInDomain
from .exact import ZLambda
from .regions import golden_x, golden_y, middle_cone, smn_region, u_region
from .renorm import renorm_tower, renormalize, verify_conjugacy
from .returns import (
    baseline_orbit,
    closed_return_map,
    closed_return_time,
    first_return,
    first_return_2d,
    get_baseline,
    locate,
    locate_exchanged,
    lower_bound_check,
    return_time_recurrence_check,
    sample_atom_preimage,
    threshold_index,
    two_sided_bound_check,
)

D2_ALPHA = ("1", "0.5", "pi-2.5", "1")
ASYMM_ALPHA = ("0.5", "pi/7", "pi/4", "17pi/28-0.5")


def standard_fixtures(precision_bits: int = 256):
    return {
        "golden": TceParams(D2_ALPHA, (2, 1), "phi", (1, 1), precision_bits),
        "sqrt2": TceParams(ASYMM_ALPHA, (2, 1), "sqrt2m1", (1, 1), precision_bits),
        "onetwo": TceParams(D2_ALPHA, (2, 1), {"tail": [1, 2]}, (2, 3), precision_bits),
    }


def parameter_grid(precision_bits: int = 256):
    """The lam x eta grid used by the exactness and oracle suites."""
    lams = [("phi", "phi"), ("sqrt2m1", "sqrt2m1"), ("onetwo", {"tail": [1, 2]})]
    etas = [(1, 1), (1, 2), (2, 3)]
    grid = []
    for lname, lspec in lams:
        for pq in etas:
            grid.append((
                "%s_p%dq%d" % (lname, *pq),
                TceParams(D2_ALPHA, (2, 1), lspec, pq, precision_bits),
            ))
    return grid


def _report(name, ok, **detail):
    doc = {"name": name, "pass": bool(ok)}
    doc.update(detail)
    return doc


# -- continued fractions -------------------------------------------------------


def check_cf_recurrences(rng, scale, precision):
    cfs = [ContinuedFraction((), (1,)), ContinuedFraction((), (2,)),
           ContinuedFraction((), (1, 2)),
           ContinuedFraction(tuple(rng.randint(1, 6) for _ in range(40)))]
    bad = 0
    for cf in cfs:
        for m in range(1, 20):
            lhs = error_term(cf, m, 0)
            rhs = cf.quotient(m) * error_term(cf, m - 1, 0) + error_term(cf, m - 2, 0)
            if (lhs - rhs).a != 0 or (lhs - rhs).b != 0:
                bad += 1
        for w in range(1, 25):
            m, n = cf.w_inverse(w)
            if n == 0:
                continue
            lhs = error_term(cf, m, n)
            rhs = n * error_term(cf, m, 0) + error_term(cf, m - 1, 0)
            if not (lhs - rhs).is_zero:
                bad += 1
    return _report("cf_error_recurrences", bad == 0, violations=bad)


def check_w_bijection(rng, scale, precision):
    cfs = [ContinuedFraction((), (1,)), ContinuedFraction((), (3, 1, 2)),
           ContinuedFraction(tuple(rng.randint(1, 5) for _ in range(60)))]
    bad = 0
    for cf in cfs:
        seen = set()
        for w in range(60):
            m, n = cf.w_inverse(w)
            if not cf.in_index_set(m, n, strict=True):
                bad += 1
            if cf.w_index(m, n) != w:
                bad += 1
            seen.add((m, n))
        if len(seen) != 60:
            bad += 1
        # interchange property of the well-ordering under shifts
        for m in range(1, 5):
            shifted = cf.shift(m)
            head = sum(cf.quotient(k) for k in range(1, m + 1))
            for w in range(8):
                j, n = shifted.w_inverse(w)
                if cf.w_index(m + j, n) != head + shifted.w_index(j, n):
                    bad += 1
    return _report("w_index_bijection", bad == 0, violations=bad)


def check_best_approx(rng, scale, precision, max_m=5):
    """One-sided optimality of semiconvergents by exhaustive enumeration."""
    cfs = [ContinuedFraction((), (1,)), ContinuedFraction((), (2,)),
           ContinuedFraction((), (1, 2))]
    bad = 0
    tested = 0
    for cf in cfs:
        lam_f = cf.value(128)
        for m in range(0, max_m + 1):
            for n in range(0, cf.quotient(m + 1)):
                P, Q = cf.semiconvergent(m, n)
                if Q == 0 or (P, Q) == (0, 1):
                    continue
                side = 1 if error_sign(m, n) < 0 else -1  # P/Q > lam iff error < 0
                Pn, Qn = cf.semiconvergent(m, n + 1)
                err = error_term(cf, m, n)
                err_abs = err.abs()
                for s in range(1, Qn):
                    r0 = int(mp.floor(lam_f * s))
                    for r in (r0 - 1, r0, r0 + 1, r0 + 2):
                        if (r, s) == (P, Q) or r < 0:
                            continue
                        diff = ZLambda(Fraction(-r), Fraction(s), cf)
                        sgn = diff.sign()  # sign of s*lam - r
                        if side == 1 and sgn >= 0:
                            continue  # r/s not strictly above lam
                        if side == -1 and sgn <= 0:
                            continue
                        tested += 1
                        if (diff.abs() - err_abs).sign() <= 0:
                            bad += 1
    return _report("semiconvergent_one_sided_optimality", bad == 0,
                   violations=bad, comparisons=tested)


def check_error_signs(rng, scale, precision):
    cfs = [ContinuedFraction((), (1,)), ContinuedFraction((), (2,)),
           ContinuedFraction((), (1, 2)), ContinuedFraction((), (4, 1, 3))]
    bad = 0
    for cf in cfs:
        for w in range(41):
            m, n = cf.w_inverse(w)
            if error_term(cf, m, n).sign() != error_sign(m, n):
                bad += 1
    return _report("error_sign_parity_rule", bad == 0, violations=bad)


def check_sign_vs_float(rng, scale, precision):
    cf = ContinuedFraction((), (2,))
    count = max(50, int(200 * scale))
    with mp.workprec(512):
        lam512 = cf.value(512)
        bad = 0
        for _ in range(count):
            a = rng.randint(-10**6, 10**6)
            b = rng.randint(-10**6, 10**6)
            v = ZLambda(Fraction(a), Fraction(b), cf)
            approx = a + b * lam512
            want = 0 if (a == 0 and b == 0) else (1 if approx > 0 else -1)
            if v.sign() != want:
                bad += 1
            if not v.is_zero and v.sign() * (-v).sign() != -1:
                bad += 1
    return _report("exact_sign_vs_512bit_float", bad == 0, violations=bad, count=count)


def check_to_float_monotone(rng, scale, precision):
    cf = ContinuedFraction((), (1,))
    bad = 0
    for _ in range(20):
        v = ZLambda(Fraction(rng.randint(-50, 50)), Fraction(rng.randint(-50, 50)), cf)
        if v.is_zero:
            continue
        signs = set()
        bits = 64
        for _ in range(4):
            x = v.to_float(bits)
            signs.add(1 if x > 0 else (-1 if x < 0 else 0))
            bits *= 2
        if len(signs) != 1 or 0 in signs:
            bad += 1
    return _report("to_float_sign_stability", bad == 0, violations=bad)


# -- cones --------------------------------------------------------------------


def check_cone_conventions(rng, scale, precision):
    params = standard_fixtures(precision)["golden"]
    checks = [
        cone_index(params, make_point(0, 0, precision)) == 1,
        cone_index(params, make_point(1, 0, precision)) == 0,
        cone_index(params, make_point(-1, 0, precision)) == params.d + 1,
    ]
    # boundary rays: Arg = alpha_0 belongs to cone 1, Arg = bounds[2] to cone 1
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        for b, expect in ((params.bounds[1], 1), (params.bounds[2], 1),
                          (params.bounds[3], 2)):
            z = Point(mp.cos(b), mp.sin(b))
            checks.append(cone_index(params, z) == expect)
        strict_raises = False
        try:
            cone_index(params, Point(mp.cos(params.bounds[1]), mp.sin(params.bounds[1])),
                       strict=True)
        except AmbiguousBoundary:
            strict_raises = True
        checks.append(strict_raises)
    return _report("cone_index_conventions", all(checks),
                   failed=[i for i, c in enumerate(checks) if not c])


def check_exchange_geometry(rng, scale, precision):
    fixtures = standard_fixtures(precision)
    bad = 0
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (16 - precision)
        for params in fixtures.values():
            # image cones abut in tau-order and tile the middle cone
            starts = sorted(
                (params.bounds[1] + mp.fsum(params.alpha[k] for k in range(1, params.d + 1)
                                            if params.tau[k - 1] < params.tau[j - 1]), j)
                for j in range(1, params.d + 1)
            )
            cursor = params.bounds[1]
            for start, j in starts:
                if abs(start - cursor) > tol:
                    bad += 1
                cursor = start + params.alpha[j]
            if abs(cursor - params.bounds[params.d + 1]) > tol:
                bad += 1
            for _ in range(max(10, int(40 * scale))):
                x, y = rng.uniform(-1, 1), rng.uniform(0, 1)
                z = make_point(x, y, precision)
                w = exchange(params, z)
                if abs(mp.hypot(w.re, w.im) - mp.hypot(z.re, z.im)) > tol:
                    bad += 1
                a = mp.mpf(rng.choice((0.5, 2, 3)))
                za = Point(a * z.re, a * z.im)
                wa = exchange(params, za)
                if mp.hypot(wa.re - a * w.re, wa.im - a * w.im) > a * tol:
                    bad += 1
                if cone_index(params, za) != cone_index(params, z):
                    bad += 1
    return _report("exchange_isometry_and_tiling", bad == 0, violations=bad)


def check_real_line(rng, scale, precision):
    params = standard_fixtures(precision)["sqrt2"]
    bad = 0
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        z = make_point(mp.mpf("0.3"), 0, precision)
        for _ in range(200):
            if z.im != 0:
                bad += 1
            w = step(params, z)
            # on the real line the map is the bare translation
            j = cone_index(params, z)
            expect = z.re - 1 if j == 0 else (z.re + params.lam_f if j == params.d + 1
                                              else z.re - params.eta_f)
            if w.re != expect:
                bad += 1
            z = w
    return _report("real_line_invariance", bad == 0, violations=bad)


def check_scaling_conjugacy(rng, scale, precision):
    fixtures = standard_fixtures(precision)
    bad = 0
    count = max(20, int(60 * scale))
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (-200)
        for params in (fixtures["golden"], fixtures["sqrt2"]):
            for a in (Fraction(1, 2), 2, 3):
                scaled = scale_conjugate(params, a)
                a_f = mp.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mp.mpf(a)
                done = 0
                while done < count // 3:
                    z = make_point(rng.uniform(-1, 1), rng.uniform(0, 1), precision)
                    try:
                        big = step(params, Point(a_f * z.re, a_f * z.im), strict=True)
                        small = scaled.step(z, strict=True)
                    except AmbiguousBoundary:
                        continue
                    done += 1
                    if mp.hypot(big.re / a_f - small.re, big.im / a_f - small.im) > tol:
                        bad += 1
    return _report("scaling_conjugacy", bad == 0, violations=bad)


def check_orbit_splitting(rng, scale, precision):
    """Iterates of a middle-cone point split as exchanged point + origin orbit."""
    fixtures = standard_fixtures(precision)
    bad = 0
    samples = max(6, int(20 * scale))
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (16 - precision)
        for params in fixtures.values():
            baseline = get_baseline(params)
            mc = middle_cone(params)
            done = 0
            while done < samples:
                z = make_point(rng.uniform(-0.6, 0.6), rng.uniform(0.01, 0.8), precision)
                try:
                    if not mc.contains(z):
                        continue
                    ret = first_return(params, z)
                except (AmbiguousBoundary, NotInDomain):
                    continue
                done += 1
                w = z
                for j in range(1, ret.h + 1):
                    w = step(params, w)
                    want_re = ret.exchanged.re + baseline.value_float(j)
                    if mp.hypot(w.re - want_re, w.im - ret.exchanged.im) > tol:
                        bad += 1
                        break
    return _report("orbit_splitting", bad == 0, violations=bad)


# -- baseline and return maps ------------------------------------------------------


def check_baseline_invariants(rng, scale, precision):
    bad = 0
    for name, params in parameter_grid(precision)[:6]:
        states = baseline_orbit(params, max(200, int(800 * scale)))
        for s in states:
            if s.a + s.b + 1 != s.t:
                bad += 1
            if s.value.sign() == 0:
                bad += 1
        if states[0].a != 0 or states[0].b != 0:
            bad += 1
    return _report("baseline_counter_invariants", bad == 0, violations=bad)


def check_orbit_hits_errors(rng, scale, precision, w_cap=None):
    """The origin's orbit value at the closed-form return time is the
    semiconvergent error, coefficient-exactly."""
    bad = 0
    tested = 0
    w_cap = w_cap or max(8, int(12 * scale))
    for name, params in parameter_grid(precision):
        cf = params.lam
        baseline = get_baseline(params)
        t0 = threshold_index(params)
        w0 = cf.w_index(*t0)
        for w in range(w0 + 1, w_cap + 1):
            m, n = cf.w_inverse(w)
            h = closed_return_time(params, (m, n))
            A, B = baseline.coeffs(h)
            P, Q = cf.semiconvergent(m, n)
            tested += 1
            if (A, B) != (P, Q):
                bad += 1
    return _report("origin_orbit_hits_errors", bad == 0, violations=bad, indices=tested)


def check_return_time_recurrence(rng, scale, precision):
    bad = 0
    for name, params in parameter_grid(precision)[:5]:
        for w in range(0, 14):
            m, n = params.lam.w_inverse(w)
            if not return_time_recurrence_check(params, m, n):
                bad += 1
    return _report("return_time_recurrence", bad == 0, violations=bad)


def check_oracle_equivalence(rng, scale, precision, w_cap=6, per_atom=None):
    per_atom = per_atom or max(2, int(6 * scale))
    bad = 0
    tested = 0
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (16 - precision)
        for name, params in parameter_grid(precision):
            cf = params.lam
            t0 = threshold_index(params)
            w0 = cf.w_index(*t0)
            for w in range(w0 + 1, w_cap + 1):
                idx = cf.w_inverse(w)
                region = smn_region(params, idx)
                h_closed = closed_return_time(params, (idx.m, idx.n + 1))
                for k in range(per_atom):
                    try:
                        z, zp = sample_atom_preimage(params, region, rng)
                        ret = first_return(params, z)
                    except AmbiguousBoundary:
                        continue
                    tested += 1
                    closed = closed_return_map(params, z, atom=region)
                    if ret.h != h_closed or closed.h != h_closed:
                        bad += 1
                    if mp.hypot(ret.landed.re - closed.landed.re,
                                ret.landed.im - closed.landed.im) > tol:
                        bad += 1
    return _report("closed_vs_iterated_returns", bad == 0, violations=bad, samples=tested)


def check_side_lengths(rng, scale, precision):
    bad = 0
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (16 - precision)
        for name, params in list(standard_fixtures(precision).items()):
            cf = params.lam
            for w in range(0, 8):
                m, n = cf.w_inverse(w)
                region = smn_region(params, (m, n))
                width = abs(error_term(cf, m, 0).to_float(precision + INTERNAL_GUARD_BITS))
                expect0 = width * params.sin1 / params.sin_sum
                expect1 = width * params.sin0 / params.sin_sum
                got0, got1 = region.side_lengths()
                if abs(got0 - expect0) > tol or abs(got1 - expect1) > tol:
                    bad += 1
                if params.alpha[0] == params.alpha[-1] and abs(got0 - got1) > tol:
                    bad += 1
    return _report("atom_side_lengths", bad == 0, violations=bad)


def check_smn_scaling(rng, scale, precision):
    bad = 0
    with mp.workprec(precision + INTERNAL_GUARD_BITS):
        tol = mp.mpf(2) ** (-200)
        for name, params in (("sqrt2", standard_fixtures(precision)["sqrt2"]),
                             ("onetwo", standard_fixtures(precision)["onetwo"])):
            cf = params.lam
            for m in (2, 4):
                shifted = cf.shift(m)
                factor = abs(error_term(cf, m - 1, 0).to_float(precision + INTERNAL_GUARD_BITS))
                for w in range(0, 9):
                    j, n = shifted.w_inverse(w)
                    big = smn_region(params, (m + j, n), cf)
                    small = smn_region(params, (j, n), shifted)
                    for bv, sv in zip(big.vertices(), small.vertices()):
                        if mp.hypot(bv.re / factor - sv.re, bv.im / factor - sv.im) > tol:
                            bad += 1
    return _report("atom_scaling_under_shift", bad == 0, violations=bad)


def check_golden_partition(rng, scale, precision, count=None):
    params = standard_fixtures(precision)["golden"]
    count = count or max(300, int(1000 * scale))
    lam_f = float(params.lam_f)
    mc = middle_cone(params)
    ambiguous = 0
    outside = 0
    n_in = 0
    while n_in < count:
        z = make_point(rng.uniform(-1, lam_f), rng.uniform(1e-9, 1), precision)
        try:
            if not mc.contains(z):
                continue
        except AmbiguousBoundary:
            continue
        n_in += 1
        try:
            locate(params, z)
        except AmbiguousBoundary:
            ambiguous += 1
        except NotInDomain:
            outside += 1
    ok = outside == 0 and ambiguous <= max(1, 0.005 * count)
    return _report("golden_partition_coverage", ok, samples=count,
                   ambiguous=ambiguous, outside=outside)


def check_u_region(rng, scale, precision):
    bad = 0
    for name, params in parameter_grid(precision)[:4]:
        cf = params.lam
        t0 = threshold_index(params)
        w0 = cf.w_index(*t0)
        for anchor_w in (w0, w0 + 2):
            region = u_region(params, cf.w_inverse(anchor_w))
            # atoms at or past the anchor sit inside U
            for w in range(anchor_w, anchor_w + 5):
                atom = smn_region(params, cf.w_inverse(w))
                for _ in range(4):
                    try:
                        if not region.contains(atom.sample(rng)):
                            bad += 1
                    except AmbiguousBoundary:
                        continue
            # interior U samples belong to atoms at or past the anchor
            hits = 0
            tries = 0
            while hits < 6 and tries < 60:
                tries += 1
                try:
                    zp = region.sample(rng, margin=0.02)
                    atom = locate_exchanged(params, zp, golden=False)
                except AmbiguousBoundary:
                    continue
                except NotInDomain:
                    bad += 1
                    continue
                hits += 1
                if cf.w_index(*atom.index) < anchor_w:
                    bad += 1
    return _report("u_region_atom_tail", bad == 0, violations=bad)


def check_renorm(rng, scale, precision):
    reports = []
    ok = True
    for name, params in (("golden", standard_fixtures(precision)["golden"]),
                         ("sqrt2", standard_fixtures(precision)["sqrt2"]),
                         ("onetwo", standard_fixtures(precision)["onetwo"])):
        step_ = renormalize(params)
        rep = verify_conjugacy(step_, samples=max(8, int(24 * scale)),
                               seed=rng.randint(0, 2**31))
        ok = ok and rep["pass"]
        reports.append({"fixture": name, **rep})
    # golden tower is a fixed point
    tower = renorm_tower(standard_fixtures(precision)["golden"], 4)
    fixed = all(s.kappa_out.lam == s.kappa_in.lam and
                (s.kappa_out.p, s.kappa_out.q) == (s.kappa_in.p, s.kappa_in.q)
                for s in tower)
    ok = ok and fixed
    return _report("renormalization_conjugacy", ok, steps=reports, golden_tower_fixed=fixed)


def check_itinerary_vs_baseline(rng, scale, precision):
    params = standard_fixtures(precision)["golden"]
    n = 40
    symbols = itinerary(params, make_point(0, 0, precision), n)
    baseline = get_baseline(params)
    expect = [0] + [baseline.value(t).sign() for t in range(1, n)]
    return _report("itinerary_matches_baseline_signs", symbols == expect)


ALL_CHECKS = [
    check_cf_recurrences,
    check_w_bijection,
    check_best_approx,
    check_error_signs,
    check_sign_vs_float,
    check_to_float_monotone,
    check_cone_conventions,
    check_exchange_geometry,
    check_real_line,
    check_scaling_conjugacy,
    check_orbit_splitting,
    check_baseline_invariants,
    check_orbit_hits_errors,
    check_return_time_recurrence,
    check_oracle_equivalence,
    check_side_lengths,
    check_smn_scaling,
    check_golden_partition,
    check_u_region,
    check_renorm,
    check_itinerary_vs_baseline,
]


def run_all(seed: int = 0, scale: float = 1.0, precision: int = 256,
            names=None) -> dict:
    checks = []
    ok = True
    for fn in ALL_CHECKS:
        if names and fn.__name__ not in names:
            continue
        rng = random.Random((seed, fn.__name__).__repr__())
        rep = fn(rng, scale, precision)
        ok = ok and rep["pass"]
        checks.append(rep)
    return {
        "seed": seed,
        "scale": scale,
        "precision_bits": precision,
        "pass": bool(ok),
        "checks": checks,
    }
