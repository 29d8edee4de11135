import pytest

from bidisk import psd, rng
from bidisk.classes import (Certificate, ClosureReport, NO_VIOLATION,
                            OriginConditionError, SearchConfig, VIOLATION,
                            compose_triplet, composition_closure_check,
                            membership_check, schwarz_diag_check,
                            violation_search)
from bidisk.funcspace import (Blaschke, Prod, Triplet, Z1, Z2, ZERO, certify,
                              dilation, eval_point, product_triplet,
                              random_selfmap, random_tensor_map,
                              scaled_triplet)
from bidisk.grammar import parse_triplet
from bidisk.kernel import pick_matrix
from bidisk.mobius import BidiskPoint

IDENTITY_TRIPLET = product_triplet(certify(Z1, Z2))
VIOLATOR = parse_triplet("(sqrt2*z1, 0, 0)")


class TestMembership:
    def test_identity_triplet_in_S(self, stream):
        pts = rng.draw_point_set(stream, 8)
        cert = membership_check(IDENTITY_TRIPLET, "S", pts)
        assert cert.verdict == NO_VIOLATION
        assert cert.matrix_size == 8

    def test_scaled_triplet_in_S(self, stream):
        psi = random_selfmap(stream)
        pts = rng.draw_point_set(stream, 8)
        cert = membership_check(scaled_triplet(psi), "S", pts)
        assert cert.verdict == NO_VIOLATION

    def test_deliberate_violator_in_Q(self):
        # Q diagonal at (r, 0) is (1 - 2 r^2) / (1 - r^2); r = 0.9 gives -3.263...
        cert = membership_check(VIOLATOR, "Q", [BidiskPoint(0.9, 0.0)])
        assert cert.verdict == VIOLATION
        assert cert.min_eigenvalue == pytest.approx((1 - 1.62) / 0.19, abs=1e-12)

    def test_class_validation(self):
        with pytest.raises(ValueError):
            membership_check(IDENTITY_TRIPLET, "X", [BidiskPoint(0, 0)])


class TestViolationSearch:
    def test_identity_triplet_survives_search(self):
        cfg = SearchConfig(seed=7, trials=200, n_points=8)
        cert = violation_search(IDENTITY_TRIPLET, "S", cfg)
        assert cert.verdict == NO_VIOLATION
        assert cert.min_eigenvalue >= -1e-9

    def test_single_function_in_Q(self):
        t = Triplet(Prod((Blaschke(0.2, 1), Z2)), ZERO, ZERO)
        cert = violation_search(t, "Q", SearchConfig(seed=3, trials=200))
        assert cert.verdict == NO_VIOLATION

    def test_rotation_pair_product_in_P(self):
        t = product_triplet(certify((Z1 + Z2) / 2, (Z1 - Z2) / 2))
        cert = violation_search(t, "P", SearchConfig(seed=11, trials=200))
        assert cert.verdict == NO_VIOLATION

    def test_violation_replays(self):
        cfg = SearchConfig(seed=5, trials=40, n_points=4, boundary_bias=0.5)
        cert = violation_search(VIOLATOR, "Q", cfg)
        assert cert.verdict == VIOLATION
        entries = pick_matrix("Q", VIOLATOR, cert.witness_points).entries
        lam, _ = psd.eigen_min(entries)
        assert lam == pytest.approx(cert.min_eigenvalue, abs=1e-10)

    def test_determinism(self):
        cfg = SearchConfig(seed=42, trials=60, n_points=6)
        a = violation_search(IDENTITY_TRIPLET, "P", cfg)
        b = violation_search(IDENTITY_TRIPLET, "P", cfg)
        assert a.to_json_dict() == b.to_json_dict()

    def test_monotone_consistency(self):
        # an S violation replays as a violation in P or Q at the same points
        cfg = SearchConfig(seed=9, trials=30, n_points=4, boundary_bias=0.5)
        s_cert = violation_search(VIOLATOR, "S", cfg)
        assert s_cert.verdict == VIOLATION
        p_cert = membership_check(VIOLATOR, "P", s_cert.witness_points, tol=cfg.tol)
        q_cert = membership_check(VIOLATOR, "Q", s_cert.witness_points, tol=cfg.tol)
        assert p_cert.verdict == VIOLATION or q_cert.verdict == VIOLATION

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(seed=0, trials=0)
        with pytest.raises(ValueError):
            SearchConfig(seed=0, n_points=1)
        with pytest.raises(ValueError):
            SearchConfig(seed=0, boundary_bias=1.5)


class TestClassProperties:
    def test_lemma_product_triplets_pass_P(self, stream):
        # product triplets of certified self-maps never certify a P violation
        for _ in range(50):
            psi = random_selfmap(stream)
            t = product_triplet(psi)
            for _ in range(2):
                pts = rng.draw_point_set(stream, 6, boundary_bias=0.3)
                cert = membership_check(t, "P", pts)
                assert cert.verdict == NO_VIOLATION, cert

    def test_scaled_triplets_pass_S(self, stream):
        for _ in range(50):
            psi = random_selfmap(stream)
            t = scaled_triplet(psi)
            for _ in range(2):
                pts = rng.draw_point_set(stream, 6, boundary_bias=0.3)
                cert = membership_check(t, "S", pts)
                assert cert.verdict == NO_VIOLATION, cert


class TestCompose:
    def test_identity_inner(self, stream):
        t = compose_triplet(IDENTITY_TRIPLET, certify(Z1, Z2))
        for _ in range(10):
            z = rng.draw_point(stream)
            assert eval_point(t.phi3, z) == pytest.approx(z[0] * z[1], abs=1e-15)

    def test_swap_inner(self):
        t = compose_triplet(IDENTITY_TRIPLET, certify(Z2, Z1))
        assert eval_point(t.phi1, (0.3, 0.7)) == pytest.approx(0.7)
        assert eval_point(t.phi3, (0.3, 0.7)) == pytest.approx(0.21)

    def test_dilation_inner(self):
        t = compose_triplet(IDENTITY_TRIPLET, dilation(0.5))
        assert eval_point(t.phi1, (0.8, 0.2)) == pytest.approx(0.4)
        assert eval_point(t.phi3, (0.8, 0.8)) == pytest.approx(0.25 * 0.64)

    def test_closure_check_tensor_map(self, stream):
        psi = random_tensor_map(stream)
        report = composition_closure_check(
            IDENTITY_TRIPLET, "Q", psi, SearchConfig(seed=2, trials=60))
        assert isinstance(report, ClosureReport)
        assert report.precondition.verdict == NO_VIOLATION
        assert report.certificate.verdict == NO_VIOLATION

    def test_closure_check_blaschke_tensor_pair(self):
        # each coordinate moves through its own Blaschke factor
        psi = certify(Blaschke(0.3, 1), Blaschke(0.2j, 2))
        report = composition_closure_check(
            IDENTITY_TRIPLET, "Q", psi, SearchConfig(seed=6, trials=200))
        assert report.precondition.verdict == NO_VIOLATION
        assert report.certificate.verdict == NO_VIOLATION

    def test_closure_check_identity_matches_plain_search(self):
        cfg = SearchConfig(seed=8, trials=40)
        report = composition_closure_check(IDENTITY_TRIPLET, "P",
                                           certify(Z1, Z2), cfg)
        plain = violation_search(IDENTITY_TRIPLET, "P", cfg)
        got = report.certificate.to_json_dict()
        want = plain.to_json_dict()
        got.pop("triplet")
        want.pop("triplet")
        assert got == want

    def test_closure_restricted_to_one_sided_classes(self):
        with pytest.raises(ValueError):
            composition_closure_check(IDENTITY_TRIPLET, "S", certify(Z1, Z2),
                                      SearchConfig(seed=0))


class TestSchwarzDiag:
    def test_identity_triplet_saturates(self, stream):
        pts = rng.draw_point_set(stream, 100)
        gap = schwarz_diag_check(IDENTITY_TRIPLET, pts, factor=1.0)
        assert gap <= 1e-12

    def test_single_function_bound(self):
        t = Triplet(Prod((Z1, Z2)), ZERO, ZERO)
        gap = schwarz_diag_check(t, [BidiskPoint(0.5, 0.5)], factor=1.0)
        # D = |z1 z2|^2 = 0.0625 against bound 0.4375; the lower side -D = -0.0625
        # is the tighter of the two margins
        assert gap == pytest.approx(-0.0625, abs=1e-15)
        assert 0.0625 - 0.4375 <= gap <= 0

    def test_origin_fixing_products_with_ceiling(self, stream):
        for _ in range(10):
            psi = random_selfmap(stream, origin_fixing=True)
            pts = rng.draw_point_set(stream, 100, boundary_bias=0.3)
            gap = schwarz_diag_check(product_triplet(psi), pts, factor=2.0)
            assert gap <= 1e-12

    def test_rejects_nonvanishing_origin(self):
        t = Triplet(Blaschke(0.3, 1), Z2, ZERO)
        with pytest.raises(OriginConditionError, match="phi1"):
            schwarz_diag_check(t, [BidiskPoint(0, 0)], factor=1.0)

    def test_factor_validation(self, stream):
        with pytest.raises(ValueError):
            schwarz_diag_check(IDENTITY_TRIPLET, [BidiskPoint(0, 0)], factor=0.0)


class TestCertificateRecord:
    def test_json_shape(self):
        cert = membership_check(VIOLATOR, "Q", [BidiskPoint(0.9, 0.0)])
        d = cert.to_json_dict()
        assert d["class"] == "Q"
        assert d["verdict"] == VIOLATION
        assert d["witness_points"] == [[0.9, 0.0, 0.0, 0.0]]
        assert isinstance(cert, Certificate)
