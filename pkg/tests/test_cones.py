"""Cone partition, exchange, translation, scaling conjugacy, itineraries."""

import pytest
from mpmath import mp

from tce import (
    AmbiguousBoundary,
    TceParams,
    baseline_orbit,
    cone_index,
    exchange,
    exchange_preimage,
    first_return,
    itinerary,
    make_point,
    middle_cone,
    orbit,
    parse_angle,
    scale_conjugate,
    step,
    translate,
)
from tce.cones import Point, rotate

from conftest import D2_ALPHA


class TestAngleParsing:
    @pytest.mark.parametrize("text,expr", [
        ("0.5", "mpf('0.5')"),
        ("pi/7", "mp.pi/7"),
        ("17pi/28-0.5", "17*mp.pi/28 - mpf('0.5')"),
        ("pi-2.5", "mp.pi - mpf('2.5')"),
        ("pi/2+0.1", "mp.pi/2 + mpf('0.1')"),
        ("7pi/40-0.2", "7*mp.pi/40 - mpf('0.2')"),
    ])
    def test_against_direct_evaluation(self, text, expr):
        with mp.workprec(300):
            got = parse_angle(text, 256)
            want = eval(expr, {"mp": mp, "mpf": mp.mpf})
            assert abs(got - want) < mp.mpf(2) ** -250

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_angle("pi/x", 256)


class TestParamsValidation:
    def test_angle_sum_enforced(self):
        with pytest.raises(ValueError):
            TceParams(("1", "1", "1", "1"), (2, 1), "phi", (1, 1))

    def test_tau_must_be_bijection(self):
        with pytest.raises(ValueError):
            TceParams(D2_ALPHA, (1, 1), "phi", (1, 1))

    def test_eta_range_exact(self):
        # 1 - 3*phi < -phi: rejected
        with pytest.raises(ValueError):
            TceParams(D2_ALPHA, (2, 1), "phi", (1, 3))
        with pytest.raises(ValueError):
            TceParams(D2_ALPHA, (2, 1), "phi", (0, 1))
        # 2 - 2*phi is fine
        TceParams(D2_ALPHA, (2, 1), "phi", (2, 2))

    def test_angles_in_range(self):
        with pytest.raises(ValueError):
            TceParams(("0", "1", "pi-2", "1"), (2, 1), "phi", (1, 1))


class TestConeIndex:
    def test_special_points(self, golden):
        assert cone_index(golden, make_point(0, 0)) == 1
        assert cone_index(golden, make_point(1, 0)) == 0
        assert cone_index(golden, make_point(-1, 0)) == golden.d + 1

    def test_boundary_conventions(self, golden):
        with mp.workprec(288):
            b = golden.bounds
            # Arg = alpha_0 enters cone 1 (closed left end)
            assert cone_index(golden, Point(mp.cos(b[1]), mp.sin(b[1]))) == 1
            # Arg at the end of cone 1 still belongs to it (closed right end)
            assert cone_index(golden, Point(mp.cos(b[2]), mp.sin(b[2]))) == 1
            # later boundaries belong to the cone on their left
            assert cone_index(golden, Point(mp.cos(b[3]), mp.sin(b[3]))) == 2
            # interior rays
            mid = (b[1] + b[2]) / 2
            assert cone_index(golden, Point(mp.cos(mid), mp.sin(mid))) == 1

    def test_strict_mode_raises_on_boundaries(self, golden):
        with mp.workprec(288):
            z = Point(mp.cos(golden.bounds[2]), mp.sin(golden.bounds[2]))
        with pytest.raises(AmbiguousBoundary):
            cone_index(golden, z, strict=True)

    def test_scale_invariance_of_cones(self, golden, rng):
        with mp.workprec(288):
            for _ in range(50):
                z = make_point(rng.uniform(-1, 1), rng.uniform(0, 1))
                for a in (mp.mpf("0.5"), mp.mpf(3)):
                    za = Point(a * z.re, a * z.im)
                    assert cone_index(golden, za) == cone_index(golden, z)


class TestExchange:
    def test_identity_on_reals_is_exact(self, golden):
        for x in ("0.25", "-0.75", "0"):
            z = make_point(x, 0)
            assert exchange(golden, z) is z

    def test_identity_permutation(self):
        params = TceParams(D2_ALPHA, (1, 2), "phi", (1, 1))
        assert all(abs(t) < mp.mpf(2) ** -200 for t in params.theta)
        z = make_point("0.1", "0.4")
        w = exchange(params, z)
        assert abs(w.re - z.re) < mp.mpf(2) ** -240 and abs(w.im - z.im) < mp.mpf(2) ** -240

    def test_transposition_rotates_first_cone_by_last_middle_angle(self, golden):
        # tau = (2 1): the first exchanged cone lands past the second, so its
        # rotation angle is the second cone's aperture
        with mp.workprec(288):
            assert abs(golden.theta[0] - golden.alpha[2]) < mp.mpf(2) ** -250
            b = golden.bounds
            mid = (b[1] + b[2]) / 2
            z = Point(mp.cos(mid), mp.sin(mid))
            w = exchange(golden, z)
            want = Point(mp.cos(mid + golden.alpha[2]), mp.sin(mid + golden.alpha[2]))
            assert mp.hypot(w.re - want.re, w.im - want.im) < mp.mpf(2) ** -240

    def test_isometry_and_homogeneity(self, sqrt2, rng):
        with mp.workprec(288):
            tol = mp.mpf(2) ** -240
            for _ in range(60):
                z = make_point(rng.uniform(-1, 1), rng.uniform(0, 1))
                w = exchange(sqrt2, z)
                assert abs(mp.hypot(w.re, w.im) - mp.hypot(z.re, z.im)) < tol
                a = mp.mpf(rng.choice((0.5, 2.0, 3.0)))
                wa = exchange(sqrt2, Point(a * z.re, a * z.im))
                assert mp.hypot(wa.re - a * w.re, wa.im - a * w.im) < a * tol

    def test_image_cones_tile_middle(self, sqrt2):
        """Rotated cones abut in permutation order and fill the middle cone."""
        with mp.workprec(288):
            tol = mp.mpf(2) ** -240
            spans = []
            for j in range(1, sqrt2.d + 1):
                start = sqrt2.bounds[j] + sqrt2.theta[j - 1]
                spans.append((start, start + sqrt2.alpha[j]))
            spans.sort()
            assert abs(spans[0][0] - sqrt2.bounds[1]) < tol
            for (a0, a1), (b0, _) in zip(spans, spans[1:]):
                assert abs(a1 - b0) < tol
            assert abs(spans[-1][1] - sqrt2.bounds[sqrt2.d + 1]) < tol

    def test_preimage_roundtrip(self, golden, rng):
        mc = middle_cone(golden)
        with mp.workprec(288):
            tol = mp.mpf(2) ** -240
            found = 0
            while found < 30:
                z = make_point(rng.uniform(-0.6, 0.6), rng.uniform(0.01, 0.9))
                try:
                    if not mc.contains(z):
                        continue
                    w = exchange(golden, z)
                    back, j = exchange_preimage(golden, w)
                except AmbiguousBoundary:
                    continue
                found += 1
                assert j == cone_index(golden, z)
                assert mp.hypot(back.re - z.re, back.im - z.im) < tol


class TestTranslation:
    def test_macro_translations(self, golden):
        with mp.workprec(288):
            tol = mp.mpf(2) ** -240
            w = translate(golden, make_point(0, 0))
            assert abs(w.re + golden.eta_f) < tol and w.im == 0
            w = translate(golden, make_point(-1, 0))
            assert abs(w.re - (-1 + golden.lam_f)) < tol
            half_lam = Point(golden.lam_f / 2, mp.mpf(0))
            w = translate(golden, half_lam)
            assert abs(w.re - (golden.lam_f / 2 - 1)) < tol

    def test_map_equals_translation_on_reals(self, sqrt2, rng):
        for _ in range(40):
            z = make_point(rng.uniform(-1, 1), 0)
            a = step(sqrt2, z)
            b = translate(sqrt2, z)
            assert a == b and a.im == 0

    def test_imaginary_part_preserved_exactly_by_translation(self, golden, rng):
        z = make_point("0.3", "0.77")
        w = translate(golden, z)
        assert w.im is z.im


class TestFullMap:
    def test_golden_interval_exchange_on_baseline(self, golden, rng):
        with mp.workprec(288):
            tol = mp.mpf(2) ** -240
            lam = golden.lam_f
            for _ in range(30):
                z = make_point(rng.uniform(1e-6, float(lam) - 1e-6), 0)
                w = step(golden, z)
                assert abs(w.re - (z.re - 1)) < tol
                z = make_point(rng.uniform(-1, -1e-6), 0)
                w = step(golden, z)
                assert abs(w.re - (z.re + lam)) < tol
            w = step(golden, make_point(0, 0))
            assert abs(w.re + golden.eta_f) < tol

    def test_real_line_invariant_exactly(self, sqrt2):
        z = make_point("0.3", 0)
        for _ in range(300):
            z = step(sqrt2, z)
            assert z.im == 0

    def test_upper_half_plane_preserved(self, sqrt2, rng):
        for _ in range(20):
            z = make_point(rng.uniform(-1, 1), rng.uniform(0.01, 1))
            for _ in range(50):
                z = step(sqrt2, z)
                assert z.im > 0

    def test_isometry_on_cone_pieces(self, sqrt2, rng):
        """Two points in the same cone move rigidly."""
        with mp.workprec(288):
            tol = mp.mpf(2) ** -236
            done = 0
            while done < 30:
                z1 = make_point(rng.uniform(-1, 1), rng.uniform(0.01, 1))
                z2 = Point(z1.re + mp.mpf(rng.uniform(-0.01, 0.01)),
                           z1.im + mp.mpf(rng.uniform(-0.01, 0.01)))
                if z2.im <= 0 or cone_index(sqrt2, z1) != cone_index(sqrt2, z2):
                    continue
                w1, w2 = exchange(sqrt2, z1), exchange(sqrt2, z2)
                if cone_index(sqrt2, w1) != cone_index(sqrt2, w2):
                    continue
                done += 1
                f1, f2 = step(sqrt2, z1), step(sqrt2, z2)
                d0 = mp.hypot(z1.re - z2.re, z1.im - z2.im)
                d1 = mp.hypot(f1.re - f2.re, f1.im - f2.im)
                assert abs(d1 - d0) < tol

    def test_imaginary_part_formula(self, sqrt2, rng):
        """Im F(z) = |z| sin(Arg z + theta_j) on the exchanged cones."""
        with mp.workprec(288):
            tol = mp.mpf(2) ** -236
            done = 0
            while done < 20:
                z = make_point(rng.uniform(-0.5, 0.5), rng.uniform(0.01, 0.8))
                j = cone_index(sqrt2, z)
                if not 1 <= j <= sqrt2.d:
                    continue
                done += 1
                w = step(sqrt2, z)
                r = mp.hypot(z.re, z.im)
                want = r * mp.sin(mp.atan2(z.im, z.re) + sqrt2.theta[j - 1])
                assert abs(w.im - want) < tol
                assert w.im == exchange(sqrt2, z).im


class TestOrbitSplitting:
    def test_split_identity_up_to_return(self, golden, sqrt2, onetwo, rng):
        """F^j(z) = E(z) + F^j(0) for 1 <= j <= h(z): two hundred points
        across three parameter sets, iterating the full two-dimensional map."""
        from tce import get_baseline
        with mp.workprec(288):
            tol = mp.mpf(2) ** -236
            for params in (golden, sqrt2, onetwo):
                mc = middle_cone(params)
                orb = get_baseline(params)
                done = 0
                while done < 67:
                    z = make_point(rng.uniform(-0.5, 0.5), rng.uniform(0.02, 0.8))
                    try:
                        if not mc.contains(z):
                            continue
                        ret = first_return(params, z, max_steps=600)
                    except Exception:
                        continue
                    done += 1
                    w = z
                    for j in range(1, ret.h + 1):
                        w = step(params, w)
                        assert mp.hypot(w.re - (ret.exchanged.re + orb.value_float(j)),
                                        w.im - ret.exchanged.im) < tol


class TestItinerary:
    def test_origin_matches_baseline_signs(self, golden):
        symbols = itinerary(golden, make_point(0, 0), 30)
        states = baseline_orbit(golden, 29)
        assert symbols[0] == 0
        for s in states:
            assert symbols[s.t] == s.value.sign()

    def test_deep_right_cone(self, golden):
        assert itinerary(golden, make_point(50, "0.1"), 1) == [1]

    def test_middle_point_shadows_origin(self, golden, rng):
        mc = middle_cone(golden)
        done = 0
        while done < 10:
            z = make_point(rng.uniform(-0.4, 0.4), rng.uniform(0.05, 0.6))
            try:
                if not mc.contains(z):
                    continue
                ret = first_return(golden, z)
            except Exception:
                continue
            done += 1
            n = max(ret.h - 2, 1)
            assert itinerary(golden, z, n) == itinerary(golden, make_point(0, 0), n)


class TestScalingConjugacy:
    def test_identity_factor(self, golden):
        scaled = scale_conjugate(golden, 1)
        z = make_point("0.2", "0.3")
        w1, w2 = scaled.step(z), step(golden, z)
        assert mp.hypot(w1.re - w2.re, w1.im - w2.im) < mp.mpf(2) ** -240

    def test_conjugacy_random(self, golden, sqrt2, rng):
        with mp.workprec(288):
            tol = mp.mpf(2) ** -200
            for params in (golden, sqrt2):
                for a in (mp.mpf("0.5"), mp.mpf(2), mp.mpf(3)):
                    scaled = scale_conjugate(params, a)
                    done = 0
                    while done < 25:
                        z = make_point(rng.uniform(-1, 1), rng.uniform(0, 1))
                        try:
                            big = step(params, Point(a * z.re, a * z.im), strict=True)
                            small = scaled.step(z, strict=True)
                        except AmbiguousBoundary:
                            continue
                        done += 1
                        assert mp.hypot(big.re / a - small.re, big.im / a - small.im) < tol

    def test_rejects_nonpositive(self, golden):
        with pytest.raises(ValueError):
            scale_conjugate(golden, 0)


class TestParamsSerialization:
    def test_json_roundtrip_revalidates(self, golden, sqrt2):
        for params in (golden, sqrt2):
            doc = params.to_json()
            back = TceParams.from_json(doc)
            assert back.lam == params.lam
            assert (back.p, back.q) == (params.p, params.q)
            assert back.tau == params.tau
            with mp.workprec(288):
                for a, b in zip(back.alpha, params.alpha):
                    assert abs(a - b) < mp.mpf(2) ** -240


class TestOrbitHelper:
    def test_orbit_length_and_consistency(self, golden):
        z = make_point("0.1", "0.2")
        path = orbit(golden, z, 5)
        assert len(path) == 6
        assert path[0] == z
        w = z
        for expected in path[1:]:
            w = step(golden, w)
            assert w == expected
