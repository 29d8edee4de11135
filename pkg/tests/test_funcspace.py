import math

import numpy as np
import pytest

from bidisk import rng
from bidisk.funcspace import (Blaschke, CertificationError, Compose, Pow,
                              Prod, Scale, Sum, Z1, Z2, ZERO, bidegree,
                              certify, dilate, dilation, eval_point, evaluate,
                              product_triplet, random_selfmap,
                              random_tensor_map, scaled_triplet,
                              selfmap_from_grid, sup_bound, sup_norm_estimate)


class TestEvaluate:
    def test_coordinate_product(self):
        assert eval_point(Prod((Z1, Z2)), (0.5, -0.5)) == -0.25

    def test_zero_constant(self):
        assert eval_point(ZERO, (0.3, 0.9j)) == 0

    def test_half_sum(self):
        f = Scale(0.5, Sum((Z1, Z2)))
        assert eval_point(f, (0.6, 0.2)) == pytest.approx(0.4, abs=1e-15)

    def test_operator_sugar_builds_the_same_values(self):
        f = (Z1 + Z2) / 2
        g = Z1 * Z2 - 0.5 * Z1 ** 2
        assert eval_point(f, (0.6, 0.2)) == pytest.approx(0.4, abs=1e-15)
        assert eval_point(g, (0.4, 0.5)) == pytest.approx(0.2 - 0.08, abs=1e-15)

    def test_eval_respects_algebra(self, stream):
        f = Blaschke(0.3, 1) * (Z1 + Z2) / 2
        g = Z2 ** 2 + Blaschke(-0.2j, 2)
        for _ in range(200):
            z1, z2 = rng.draw_point(stream)
            fg = eval_point(Prod((f, g)), (z1, z2))
            fv, gv = eval_point(f, (z1, z2)), eval_point(g, (z1, z2))
            assert fg == pytest.approx(fv * gv, rel=1e-13, abs=1e-13)
            fpg = eval_point(Sum((f, g)), (z1, z2))
            assert fpg == pytest.approx(fv + gv, rel=1e-13, abs=1e-13)

    def test_array_and_scalar_agree(self, stream):
        f = Compose(Z1 * Z2, dilation(0.7)) + Blaschke(0.1j, 2)
        pts = [rng.draw_point(stream) for _ in range(16)]
        z1 = np.array([p[0] for p in pts])
        z2 = np.array([p[1] for p in pts])
        vals = evaluate(f, z1, z2)
        for k, p in enumerate(pts):
            assert vals[k] == pytest.approx(eval_point(f, p), abs=1e-15)


class TestBidegree:
    def test_polynomial(self):
        f = Z1 ** 2 * Z2 + Z2 ** 3
        assert bidegree(f) == (2, 3)

    def test_blaschke_is_infinite(self):
        assert bidegree(Blaschke(0.3, 1)) == (math.inf, 0)

    def test_compose_bounds(self):
        inner = dilation(0.5)
        assert bidegree(Compose(Z1 * Z2, inner)) == (1, 1)


class TestCertification:
    def test_identity_map(self):
        assert certify(Z1, Z2).certified

    def test_rotation_pair(self):
        psi = certify((Z1 + Z2) / 2, (Z1 - Z2) / 2)
        assert psi.certified

    def test_blaschke_and_product(self):
        assert certify(Blaschke(0.3, 1), Prod((Z1, Z2))).certified

    def test_rejects_oversized_scalar(self):
        with pytest.raises(CertificationError) as err:
            certify(Scale(math.sqrt(2), Z1), Z2)
        assert "psi1" in str(err.value)
        assert err.value.offending is not None

    def test_rejects_plain_sum(self):
        # z1 + z2 has closure bound 2
        with pytest.raises(CertificationError):
            certify(Sum((Z1, Z2)), Z2)

    def test_sup_bound_examples(self):
        assert sup_bound((Z1 + Z2) / 2) == pytest.approx(1.0)
        assert sup_bound(Prod((Blaschke(0.5, 1), Z2))) == 1.0
        assert sup_bound(Pow(Z1, 3)) == 1.0

    def test_certified_maps_stay_strictly_inside(self, stream):
        for _ in range(5):
            psi = random_selfmap(stream)
            for _ in range(2000):
                z = rng.draw_point(stream)
                w1, w2 = psi.apply(z)
                assert abs(w1) < 1 and abs(w2) < 1
            assert sup_norm_estimate(psi.psi1, 32) <= 1 + 1e-12
            assert sup_norm_estimate(psi.psi2, 32) <= 1 + 1e-12

    def test_origin_fixing_generator(self, stream):
        for _ in range(10):
            psi = random_selfmap(stream, origin_fixing=True)
            w1, w2 = psi.apply((0j, 0j))
            assert abs(w1) <= 1e-14 and abs(w2) <= 1e-14

    def test_tensor_generator_splits_variables(self, stream):
        psi = random_tensor_map(stream)
        assert bidegree(psi.psi1)[1] == 0
        assert bidegree(psi.psi2)[0] == 0

    def test_grid_admission(self):
        # sup of |z1 + z2| / 2 is 1, attained on the torus: admissible
        psi = selfmap_from_grid(Sum((Scale(0.5, Z1), Scale(0.5, Z2))), Z2, grid=64)
        assert not psi.certified
        assert psi.norm_certificate.max_modulus <= 1 + 1e-12

    def test_grid_admission_rejects(self):
        with pytest.raises(CertificationError):
            selfmap_from_grid(Scale(1.5, Z1), Z2, grid=16)


class TestSupNormEstimate:
    def test_coordinate(self):
        assert sup_norm_estimate(Z1, 16) == pytest.approx(1.0, abs=1e-12)

    def test_mean_of_coordinates(self):
        # max of |e^{ia} + e^{ib}| / 2 is attained on the grid diagonal
        assert sup_norm_estimate(Scale(0.5, Sum((Z1, Z2))), 64) == pytest.approx(1.0, abs=1e-12)

    def test_scaled_coordinate(self):
        assert sup_norm_estimate(Scale(0.5, Z1), 16) == pytest.approx(0.5, abs=1e-12)

    def test_grid_minimum(self):
        with pytest.raises(ValueError):
            sup_norm_estimate(Z1, 4)


class TestDilate:
    def test_scales_coordinates(self):
        f = dilate(Z1, 0.9)
        eps = 1e-3
        assert eval_point(f, (1 - eps, 0)) == pytest.approx(0.9 * (1 - eps), abs=1e-15)

    def test_product_example(self):
        f = dilate(Prod((Z1, Z2)), 0.5)
        assert eval_point(f, (0.8, 0.8)) == pytest.approx(0.16, abs=1e-15)

    def test_converges_pointwise(self, stream):
        f = Prod((Z1, Z2))
        for r in (0.9, 0.99, 0.999):
            fr = dilate(f, r)
            for _ in range(50):
                z1, z2 = rng.draw_point(stream)
                z1, z2 = 0.5 * z1, 0.5 * z2
                diff = abs(eval_point(fr, (z1, z2)) - eval_point(f, (z1, z2)))
                assert diff <= 2.0 * (1.0 - r)

    def test_bounded_on_closed_bidisk(self):
        f = dilate(Blaschke(0.4, 1) + Z2, 0.8)
        assert np.isfinite(sup_norm_estimate(f, 32))

    def test_radius_validated(self):
        with pytest.raises(ValueError):
            dilate(Z1, 1.0)


class TestTriplets:
    def test_product_triplet_of_identity(self, stream):
        t = product_triplet(certify(Z1, Z2))
        for _ in range(20):
            z = rng.draw_point(stream)
            assert eval_point(t.phi3, z) == pytest.approx(z[0] * z[1], abs=1e-15)

    def test_product_triplet_with_zero(self):
        t = product_triplet(certify(Blaschke(0.2, 1), ZERO))
        assert eval_point(t.phi2, (0.5, 0.5)) == 0
        assert eval_point(t.phi3, (0.5, 0.5)) == 0

    def test_rotation_pair_product(self, stream):
        t = product_triplet(certify((Z1 + Z2) / 2, (Z1 - Z2) / 2))
        for _ in range(50):
            z1, z2 = rng.draw_point(stream)
            expect = (z1 ** 2 - z2 ** 2) / 4
            assert eval_point(t.phi3, (z1, z2)) == pytest.approx(expect, abs=1e-14)

    def test_scaled_triplet_values(self):
        t = scaled_triplet(certify(Z1, Z2))
        assert eval_point(t.phi1, (1 / math.sqrt(2), 0)) == pytest.approx(0.5, abs=1e-15)
        assert eval_point(t.phi3, (0.5, 0.5)) == pytest.approx(0.125, abs=1e-15)
