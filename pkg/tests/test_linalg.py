import itertools

import numpy as np
import pytest

from nhtopo.errors import NhtopoError
from nhtopo.linalg import pfaffian, poly_eval, poly_roots, rank_tol, takagi_factor, trim_poly


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def pfaffian_by_pairings(a):
    """Combinatorial definition: sum over perfect matchings (oracle for
    small dimensions)."""
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    total = 0.0 + 0j

    def pairings(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for i, second in enumerate(rest):
            for tail in pairings(rest[:i] + rest[i + 1:]):
                yield [(first, second)] + tail

    for pairing in pairings(list(range(n))):
        perm = [x for pair in pairing for x in pair]
        sign = _perm_sign(perm)
        term = sign
        for i, j in pairing:
            term *= a[i, j]
        total += term
    return total


def _perm_sign(perm):
    inversions = sum(
        1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


class TestRankTol:
    def test_identity(self):
        assert rank_tol(np.eye(3)) == 3

    def test_zero(self):
        assert rank_tol(np.zeros((2, 2))) == 0

    def test_threshold_cut(self):
        assert rank_tol(np.diag([1.0, 1e-12])) == 1

    def test_unitary_invariance(self):
        rng = np.random.default_rng(11)
        m = random_complex(rng, (5, 5))
        m[:, 3] = 2.0 * m[:, 1]  # force rank deficiency
        q, _ = np.linalg.qr(random_complex(rng, (5, 5)))
        p, _ = np.linalg.qr(random_complex(rng, (5, 5)))
        assert rank_tol(q @ m @ p) == rank_tol(m)

    def test_bad_tol(self):
        with pytest.raises(NhtopoError):
            rank_tol(np.eye(2), rel_tol=2.0)


class TestPfaffian:
    def test_2x2(self):
        a = 1.7 - 0.3j
        assert pfaffian(np.array([[0, a], [-a, 0]])) == pytest.approx(a)

    def test_4x4_textbook(self):
        rng = np.random.default_rng(5)
        vals = random_complex(rng, 6)
        a, b, c, d, e, f = vals
        m = np.zeros((4, 4), dtype=complex)
        m[0, 1], m[0, 2], m[0, 3] = a, b, c
        m[1, 2], m[1, 3] = d, e
        m[2, 3] = f
        m = m - m.T
        assert pfaffian(m) == pytest.approx(a * f - b * e + c * d)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_matches_pairing_sum(self, n):
        rng = np.random.default_rng(n)
        r = random_complex(rng, (n, n))
        a = r - r.T
        assert pfaffian(a) == pytest.approx(pfaffian_by_pairings(a), rel=1e-10)

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
    def test_square_is_determinant(self, n):
        rng = np.random.default_rng(100 + n)
        r = random_complex(rng, (n, n))
        a = r - r.T
        det = np.linalg.det(a)
        assert abs(pfaffian(a) ** 2 - det) <= 1e-8 * max(1.0, abs(det))

    def test_congruence_law(self):
        rng = np.random.default_rng(42)
        for n in (4, 6, 8):
            r = random_complex(rng, (n, n))
            a = r - r.T
            b = random_complex(rng, (n, n))
            lhs = pfaffian(b @ a @ b.T)
            rhs = np.linalg.det(b) * pfaffian(a)
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))

    def test_odd_dimension_rejected(self):
        with pytest.raises(NhtopoError, match="even"):
            pfaffian(np.zeros((3, 3)))

    def test_asymmetric_rejected(self):
        with pytest.raises(NhtopoError, match="antisymmetric"):
            pfaffian(np.array([[0.0, 1.0], [-0.5, 0.0]]))

    def test_singular_gives_zero(self):
        a = np.zeros((4, 4), dtype=complex)
        a[0, 1], a[1, 0] = 1.0, -1.0  # rank 2 only
        assert pfaffian(a) == 0


class TestTakagi:
    def test_identity(self):
        v = takagi_factor(np.eye(3))
        assert np.allclose(v, np.eye(3))

    def test_diagonal_phases(self):
        theta = np.array([0.3, -1.2, 2.9])
        u = np.diag(np.exp(1j * theta))
        v = takagi_factor(u)
        assert np.max(np.abs(v @ v.T - u)) < 1e-12
        assert np.max(np.abs(np.abs(np.diag(v)) - 1.0)) < 1e-12

    def test_chiral_chain_pairing_operator(self):
        from nhtopo.zoo import build_trs_dagger

        model = build_trs_dagger(1, 1, 1.2, -0.2)
        u_c = model.symmetries.u_c
        v = takagi_factor(u_c)
        assert np.max(np.abs(v @ v.T - u_c)) < 1e-12
        assert np.max(np.abs(v @ v.conj().T - np.eye(4))) < 1e-12

    def test_random_symmetric_unitaries(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = int(rng.integers(1, 7))
            s = rng.standard_normal((n, n))
            s = s + s.T
            evals, vecs = np.linalg.eigh(s)
            u = vecs @ np.diag(np.exp(1j * evals)) @ vecs.T
            v = takagi_factor(u)
            assert np.max(np.abs(v @ v.T - u)) < 1e-10
            assert np.max(np.abs(v @ v.conj().T - np.eye(n))) < 1e-10

    def test_rejects_nonsymmetric(self):
        rng = np.random.default_rng(8)
        q, _ = np.linalg.qr(random_complex(rng, (3, 3)))
        with pytest.raises(NhtopoError, match="symmetric"):
            takagi_factor(q - 0.3 * (q - q.T))

    def test_rejects_nonunitary(self):
        with pytest.raises(NhtopoError, match="unitary"):
            takagi_factor(np.diag([2.0, 0.5]))


class TestPolyRoots:
    def test_quadratic(self):
        roots = sorted(poly_roots([-1, 0, 1]).real)  # beta^2 - 1
        assert roots == pytest.approx([-1.0, 1.0])

    def test_factorable(self):
        roots = sorted(poly_roots([2, -3, 1]).real)  # (x-1)(x-2)
        assert roots == pytest.approx([1.0, 2.0])

    def test_residual_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            d = int(rng.integers(2, 15))
            c = random_complex(rng, d + 1)
            c = trim_poly(c)
            roots = poly_roots(c)
            d_eff = c.size - 1
            for r in roots:
                bound = 1e-8 * np.max(np.abs(c)) * max(1.0, abs(r)) ** d_eff
                assert abs(poly_eval(c, r)) < bound

    def test_vieta_product(self):
        rng = np.random.default_rng(14)
        c = random_complex(rng, 7)
        roots = poly_roots(c)
        prod = np.prod(roots)
        expected = (-1) ** (c.size - 1) * c[0] / c[-1]
        assert prod == pytest.approx(expected, rel=1e-8)

    def test_zero_polynomial_rejected(self):
        with pytest.raises(NhtopoError):
            poly_roots([0.0, 0.0])

    def test_trailing_noise_trimmed(self):
        roots = poly_roots([-1, 0, 1, 1e-18])
        assert len(roots) == 2
