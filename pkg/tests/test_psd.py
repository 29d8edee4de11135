import numpy as np
import pytest

from bidisk import psd, rng
from bidisk.funcspace import Z1, Z2, certify, product_triplet
from bidisk.kernel import pick_matrix


def random_hermitian(gen, n, scale=1.0):
    g = np.array([[complex(gen.next_double() - 0.5, gen.next_double() - 0.5)
                   for _ in range(n)] for _ in range(n)]) * scale
    return (g + g.conj().T) / 2


def char_poly_min_2x2(h):
    # roots of x^2 - tr x + det, Hermitian case
    tr = h[0, 0].real + h[1, 1].real
    det = (h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]).real
    disc = np.sqrt(max(tr * tr - 4 * det, 0.0))
    return (tr - disc) / 2


def char_poly_min_3x3(h):
    c2 = -np.trace(h).real
    minors = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            minors += (h[i, i] * h[j, j] - h[i, j] * h[j, i]).real
    c0 = -np.linalg.det(h).real
    roots = np.roots([1.0, c2, minors, c0])
    return roots.real.min()


class TestEigenMin:
    def test_diagonal(self):
        lam, vec = psd.eigen_min(np.diag([1.0, -0.001]))
        assert lam == pytest.approx(-0.001, abs=1e-15)
        assert abs(vec[1]) == pytest.approx(1.0, abs=1e-12)

    def test_identity(self):
        lam, vec = psd.eigen_min(np.eye(5))
        assert lam == pytest.approx(1.0, abs=1e-14)
        assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)

    def test_two_by_two(self):
        lam, vec = psd.eigen_min([[2.0, 1.0], [1.0, 2.0]])
        assert lam == pytest.approx(1.0, abs=1e-13)
        expect = np.array([1.0, -1.0]) / np.sqrt(2)
        align = abs(np.vdot(expect, vec))
        assert align == pytest.approx(1.0, abs=1e-12)

    def test_against_characteristic_polynomial_2x2(self, stream):
        for _ in range(100):
            h = random_hermitian(stream, 2, scale=3.0)
            lam, _ = psd.eigen_min(h)
            assert lam == pytest.approx(char_poly_min_2x2(h), abs=1e-10)

    def test_against_characteristic_polynomial_3x3(self, stream):
        for _ in range(100):
            h = random_hermitian(stream, 3, scale=2.0)
            lam, _ = psd.eigen_min(h)
            assert lam == pytest.approx(char_poly_min_3x3(h), abs=1e-10)

    def test_witness_invariant(self, stream):
        for n in (2, 5, 9, 17):
            h = random_hermitian(stream, n)
            lam, vec = psd.eigen_min(h)
            scale = np.abs(h).max()
            ray = np.vdot(vec, h @ vec).real
            assert abs(ray - lam) <= 1e-9 * max(1.0, scale)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            psd.eigen_min(np.zeros((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            psd.eigen_min(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_zero_matrix(self):
        lam, vec = psd.eigen_min(np.zeros((4, 4)))
        assert lam == 0.0
        assert np.linalg.norm(vec) == pytest.approx(1.0)

    def test_agrees_with_lapack(self, stream):
        for _ in range(20):
            n = 2 + int(stream.next_double() * 20)
            h = random_hermitian(stream, n)
            vals, vecs = psd.eigh(h)
            ref = np.linalg.eigvalsh(h)
            assert np.abs(vals - ref).max() <= 1e-11 * max(1.0, np.abs(ref).max())
            resid = np.abs(h @ vecs - vecs * vals[None, :]).max()
            assert resid <= 1e-11 * max(1.0, np.abs(ref).max())


class TestIsPsd:
    def test_zero_is_psd(self):
        assert psd.is_psd(np.zeros((3, 3))).is_psd

    def test_indefinite_with_witness(self):
        verdict = psd.is_psd(np.diag([1.0, -1.0]))
        assert verdict.verdict == "not_psd"
        assert abs(verdict.witness[1]) == pytest.approx(1.0, abs=1e-12)

    def test_pick_matrix_of_identity_triplet(self, stream):
        t = product_triplet(certify(Z1, Z2))
        pts = rng.draw_point_set(stream, 8)
        entries = pick_matrix("P", t, pts).entries
        verdict = psd.is_psd(entries)
        assert verdict.is_psd
        # brute-force cross-check
        assert np.linalg.eigvalsh(entries).min() >= -1e-9 * max(
            1.0, np.abs(entries).max())

    def test_symmetrization_idempotence(self, stream):
        for _ in range(20):
            h = random_hermitian(stream, 6)
            hs = (h + h.conj().T) / 2
            assert psd.is_psd(h).verdict == psd.is_psd(hs).verdict

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            psd.is_psd(np.eye(2), tol=0.0)


class TestHadamard:
    def test_all_ones_is_identity_element(self, stream):
        a = random_hermitian(stream, 4)
        assert np.array_equal(psd.hadamard(a, np.ones((4, 4))), a)

    def test_diagonal_times_diagonal(self):
        a = np.diag([1.0, 2.0])
        b = np.diag([3.0, 4.0])
        assert np.array_equal(psd.hadamard(a, b), np.diag([3.0, 8.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            psd.hadamard(np.eye(2), np.eye(3))

    def test_schur_product_theorem(self, stream):
        # Hadamard products of PSD matrices stay PSD, 10^3 trials
        for _ in range(1000):
            n = 3 + int(stream.next_double() * 3)
            g1 = random_hermitian(stream, n)
            g2 = random_hermitian(stream, n)
            a = g1 @ g1.conj().T
            b = g2 @ g2.conj().T
            prod = psd.hadamard(a, b)
            lam, _ = psd.eigen_min(prod)
            assert lam >= -1e-10 * max(1.0, np.abs(prod).max())


class TestBackends:
    def test_backend_is_reported(self):
        assert psd.backend_name() in ("compiled", "python")

    def test_backends_bit_identical(self, stream):
        try:
            from bidisk import _jacobi_cy
        except ImportError:
            pytest.skip("compiled backend not built")
        from bidisk import _jacobi_py
        for _ in range(10):
            n = 2 + int(stream.next_double() * 24)
            h = random_hermitian(stream, n)
            a_re = np.ascontiguousarray(h.real)
            a_im = np.ascontiguousarray(h.imag)
            scale = float(np.sqrt(a_re * a_re + a_im * a_im).max())
            tau = psd.OFF_TOL * scale / n
            py_args = (a_re.copy(), a_im.copy(), np.eye(n), np.zeros((n, n)))
            cy_args = (a_re.copy(), a_im.copy(), np.eye(n), np.zeros((n, n)))
            s_py = _jacobi_py.jacobi_cycle(*py_args, tau * tau, 60)
            s_cy = _jacobi_cy.jacobi_cycle(*cy_args, tau * tau, 60)
            assert s_py == s_cy
            for x, y in zip(py_args, cy_args):
                assert np.array_equal(x, np.asarray(y))

    def test_dimension_guard(self):
        with pytest.raises(ValueError, match="cap"):
            psd.eigen_min(np.eye(2000))
