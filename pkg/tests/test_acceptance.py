"""Acceptance criteria, one test per criterion, at their stated tolerances.

Run with `pytest -v tests/test_acceptance.py` to get one pass/fail line per
criterion; each test also prints an ACCEPTANCE summary line.
"""

import json
import random
from fractions import Fraction

import pytest
from mpmath import mp

from tce import (
    AmbiguousBoundary,
    Point,
    SemiIndex,
    TceParams,
    ZLambda,
    closed_return_time,
    error_sign,
    error_term,
    first_return,
    get_baseline,
    golden_x,
    golden_y,
    make_point,
    middle_cone,
    renormalize,
    sample_atom_preimage,
    scale_conjugate,
    smn_region,
    step,
    threshold_index,
    verify_conjugacy,
)
from tce.cli import main as cli_main

from conftest import D2_ALPHA, fib_list, phi_oracle

TOL200 = mp.mpf(2) ** -200


def report(n, text):
    print("ACCEPTANCE %2d PASS: %s" % (n, text))


class TestAcceptance:
    def test_01_golden_return_times(self, golden, rng):
        fib = fib_list(26)
        for m in range(21):
            assert closed_return_time(golden, (m, 0)) == fib[m + 2] - 1
        for m in range(13):
            region = smn_region(golden, SemiIndex(m, 0))
            for _ in range(20):
                z, _ = sample_atom_preimage(golden, region, rng)
                assert first_return(golden, z).h == fib[m + 3] - 1
        report(1, "golden closed return times m<=20 and 20x13 iterated returns")

    def test_02_golden_error_coefficients(self, golden):
        fib = fib_list(45)
        cf = golden.lam
        with mp.workprec(320):
            ph = phi_oracle()
            for m in range(41):
                err = error_term(cf, m, 0)
                assert (err.a, err.b) == (Fraction(-fib[m]), Fraction(fib[m + 1]))
                # the closed form -(-lam)^(m+1), expanded through the
                # Fibonacci identity, against an independent high-precision power
                assert abs(err.to_float(256) - (-(-ph) ** (m + 1))) < TOL200
        report(2, "golden error coefficients (-Fib_m, Fib_{m+1}) for m <= 40")

    def test_03_orbit_hits_errors_exactly(self, param_grid):
        checked = 0
        for name, params in param_grid:
            cf = params.lam
            baseline = get_baseline(params)
            w0 = cf.w_index(*threshold_index(params))
            for w in range(w0 + 1, 19):
                m, n = cf.w_inverse(w)
                h = closed_return_time(params, (m, n))
                A, B = baseline.coeffs(h)
                P, Q = cf.semiconvergent(m, n)
                assert (A, B) == (P, Q), (name, m, n)
                checked += 1
        report(3, "origin orbit equals the index error at %d return times" % checked)

    def test_04_oracle_equivalence(self, param_grid, rng):
        samples = 0
        with mp.workprec(288):
            for name, params in param_grid:
                cf = params.lam
                w0 = cf.w_index(*threshold_index(params))
                for w in range(w0 + 1, 11):
                    idx = cf.w_inverse(w)
                    region = smn_region(params, idx)
                    h_closed = closed_return_time(params, (idx.m, idx.n + 1))
                    shift = error_term(cf, idx.m, idx.n + 1).to_float(288)
                    drawn = 0
                    while drawn < 50:
                        try:
                            z, zp = sample_atom_preimage(params, region, rng)
                            ret = first_return(params, z)
                        except AmbiguousBoundary:
                            continue
                        drawn += 1
                        samples += 1
                        assert ret.h == h_closed, (name, idx)
                        closed_pt = Point(zp.re + shift, zp.im)
                        dev = mp.hypot(ret.landed.re - closed_pt.re,
                                       ret.landed.im - closed_pt.im)
                        assert dev < TOL200, (name, idx, dev)
        report(4, "closed = iterated first returns on %d interior samples" % samples)

    def test_05_atom_scaling(self, sqrt2, onetwo):
        pairs = 0
        with mp.workprec(288):
            for params in (sqrt2, onetwo):
                cf = params.lam
                for m in (2, 4):
                    shifted = cf.shift(m)
                    factor = abs(error_term(cf, m - 1, 0).to_float(288))
                    for w in range(9):
                        j, n = shifted.w_inverse(w)
                        big = smn_region(params, SemiIndex(m + j, n), cf).vertices()
                        small = smn_region(params, SemiIndex(j, n), shifted).vertices()
                        for bv, sv in zip(big, small):
                            assert mp.hypot(bv.re / factor - sv.re,
                                            bv.im / factor - sv.im) < TOL200
                            pairs += 1
        report(5, "rescaled atoms match shifted-fraction atoms on %d vertices" % pairs)

    def test_06_renormalization_conjugacy(self, param_grid, golden, rng):
        for name, params in param_grid:
            rep = verify_conjugacy(renormalize(params), samples=100, seed=202)
            assert rep["pass"] and rep["checked"] == 100, (name, rep)
            assert rep["max_dev"] < float(TOL200), (name, rep)
        # golden exact self-similarity, via the iterated map alone
        with mp.workprec(320):
            ph2 = phi_oracle() ** 2
            for m in (0, 1, 2, 3):
                region = smn_region(golden, SemiIndex(m, 0))
                for _ in range(10):
                    z, _ = sample_atom_preimage(golden, region, rng)
                    lhs = first_return(golden, z).landed
                    big = first_return(golden, Point(ph2 * z.re, ph2 * z.im)).landed
                    assert mp.hypot(lhs.re - big.re / ph2, lhs.im - big.im / ph2) < TOL200
        report(6, "renormalization conjugacy on 9 parameter sets + golden self-similarity")

    def test_07_best_approximation_brute_force(self, param_grid):
        comparisons = 0
        lams = {params.lam for name, params in param_grid}
        for cf in lams:
            lam_f = cf.value(128)
            for m in range(0, 9):
                for n in range(0, cf.quotient(m + 1)):
                    P, Q = cf.semiconvergent(m, n)
                    if (P, Q) == (0, 1):
                        continue
                    below = error_sign(m, n) > 0
                    err_abs = error_term(cf, m, n).abs()
                    _, Qnext = cf.semiconvergent(m, n + 1)
                    for s in range(1, Qnext):
                        r0 = int(mp.floor(lam_f * s))
                        for r in (r0 - 1, r0, r0 + 1, r0 + 2):
                            if r < 0 or (r, s) == (P, Q):
                                continue
                            diff = ZLambda(Fraction(-r), Fraction(s), cf)
                            sgn = diff.sign()
                            if (below and sgn <= 0) or (not below and sgn >= 0):
                                continue
                            comparisons += 1
                            assert (diff.abs() - err_abs).sign() > 0, (m, n, r, s)
        report(7, "one-sided optimality over %d exhaustive comparisons" % comparisons)

    def test_08_golden_partition_coverage(self, golden):
        rng = random.Random(424242)
        count = 10**4
        wp = golden.precision_bits + 32
        with mp.workprec(wp):
            guard = golden.guard()
            lam_f = float(golden.lam_f)
            families = [("Y", None), ("X", None)]
            regions = [golden_y(golden), golden_x(golden)]
            for m in range(2, 61):
                families.append(("S", m))
                regions.append(smn_region(golden, SemiIndex(m, 0)))
            frames = []
            for reg in regions:
                (lo0, hi0), (lo1, hi1) = reg._frame()
                frames.append((lo0, hi0, lo1, hi1))

            n_in = ambiguous = 0
            multi = none_found = 0
            while n_in < count:
                x, y = rng.uniform(-1, lam_f), rng.uniform(0, 1)
                if y == 0:
                    continue
                z = make_point(x, y, golden.precision_bits)
                s0 = z.re - golden.cot0 * z.im
                s1 = z.re - golden.cot1 * z.im
                if not (s0 < -guard and s1 > guard):
                    continue  # stay clearly inside the middle cone
                n_in += 1
                hits = 0
                near_edge = False
                for lo0, hi0, lo1, hi1 in frames:
                    inside = True
                    for s, lo, hi in ((s0, lo0, hi0), (s1, lo1, hi1)):
                        if lo is not None:
                            if abs(s - lo) < guard:
                                near_edge = True
                            if s < lo:
                                inside = False
                        if hi is not None:
                            if abs(s - hi) < guard:
                                near_edge = True
                            if s > hi:
                                inside = False
                    if inside:
                        hits += 1
                if near_edge:
                    ambiguous += 1
                elif hits == 0:
                    none_found += 1
                elif hits > 1:
                    multi += 1
        assert multi == 0, "%d points matched several atoms" % multi
        assert none_found == 0, "%d points missed every atom" % none_found
        assert ambiguous < 0.005 * count
        report(8, "10^4 samples: unique atom membership, %d ambiguous" % ambiguous)

    def test_09_scaling_conjugacy(self, golden, rng):
        with mp.workprec(288):
            done = 0
            while done < 200:
                z = make_point(rng.uniform(-1, 1), rng.uniform(0, 1))
                for a in (mp.mpf("0.5"), mp.mpf(2), mp.mpf(3)):
                    scaled = scale_conjugate(golden, a)
                    try:
                        big = step(golden, Point(a * z.re, a * z.im), strict=True)
                        small = scaled.step(z, strict=True)
                    except AmbiguousBoundary:
                        break
                    assert mp.hypot(big.re / a - small.re, big.im / a - small.im) < TOL200
                else:
                    done += 1
        report(9, "parameter rescaling conjugacy on 200 points x 3 factors")

    def test_10_verify_determinism(self, tmp_path):
        blobs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            code = cli_main(["--seed", "7", "--out", str(out), "verify", "--scale", "0.25"])
            assert code == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]
        doc = json.loads(blobs[0])
        assert doc["pass"]
        report(10, "verify reports are byte-identical across reruns")
