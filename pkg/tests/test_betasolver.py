import numpy as np
import pytest

from nhtopo.betasolver import (
    _sector_polynomial,
    beta_roots,
    detect_blocks,
    nullvector_linearity_check,
    select_dominant,
)
from nhtopo.errors import GaplessOrCriticalError, NhtopoError
from nhtopo.linalg import poly_eval
from nhtopo.zoo import (
    build_four_band_critical,
    build_trs_dagger,
    build_two_band,
    build_two_band_hermitian,
)


def match_multisets(a, b, tol=1e-8):
    b = [complex(x) for x in b]
    assert len(a) == len(b)
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        assert abs(x - b[j]) <= tol * max(1.0, abs(x)), (x, b)
        b.pop(j)


class TestDetectBlocks:
    def test_critical_decoupled(self):
        assert detect_blocks(build_four_band_critical(c=0.0)) == ((0, 2), (1, 3))

    def test_critical_coupled(self):
        assert detect_blocks(build_four_band_critical(c=0.01)) == ((0, 1, 2, 3),)

    def test_time_reversal_chain_splits_into_families(self):
        # the blocks only ever couple orbital pairs (0,3) and (1,2), which
        # is the structural face of the symbol-determinant factorization;
        # the resulting per-family ordering is exactly the selection rule
        # the paired modes require
        assert detect_blocks(build_trs_dagger(1, 1, 1.2, -0.2)) == ((0, 3), (1, 2))
        assert detect_blocks(build_trs_dagger(1, 0.5, 1.2, -0.2)) == ((0, 3), (1, 2))


class TestBetaRoots:
    def test_two_band_roots_and_nullvectors(self):
        zeros_plus, zeros_minus = (2.0, 3.0), (0.5, 0.2)
        rs = beta_roots(build_two_band(1, 1, zeros_plus, zeros_minus), 0.0)
        match_multisets(list(zeros_plus) + list(zeros_minus), rs.betas())
        for root in rs.roots:
            expected = (
                np.array([1, 0]) if any(abs(root.beta - z) < 1e-8 for z in zeros_plus)
                else np.array([0, 1])
            )
            assert abs(abs(np.vdot(expected, root.nullvector)) - 1.0) < 1e-10

    def test_special_point_multiset(self):
        rs = beta_roots(build_trs_dagger(1, 0, 1.2, 0), 0.0)
        expected = [1, 1, -1, -1, 0.8 + 0.6j, 0.8 - 0.6j, -0.8 + 0.6j, -0.8 - 0.6j]
        match_multisets(expected, rs.betas())

    def test_sorted_descending(self):
        rs = beta_roots(build_four_band_critical(c=0.3), 0.1)
        mags = np.abs(rs.betas())
        assert np.all(np.diff(mags) <= 1e-12)

    def test_polynomial_residual_bound(self):
        model = build_four_band_critical(c=0.5)
        omega = 0.3
        coeffs = _sector_polynomial(model, omega, (0, 1, 2, 3))
        deg = coeffs.size - 1
        for root in beta_roots(model, omega).roots:
            bound = 1e-8 * np.max(np.abs(coeffs)) * max(1.0, abs(root.beta)) ** deg
            assert abs(poly_eval(coeffs, root.beta)) < bound

    def test_vieta_product(self):
        model = build_two_band(1.2, 0.8, (2, 3), (0.5, 0.2))
        omega = 0.21
        coeffs = _sector_polynomial(model, omega, (0, 1))
        roots = beta_roots(model, omega).betas()
        expected = (-1) ** (coeffs.size - 1) * coeffs[0] / coeffs[-1]
        assert np.prod(roots) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize(
        "model",
        [
            build_two_band_hermitian(1.0, (2.0, 3.0)),
            build_trs_dagger(1, 0.5, 0.0, -0.3),  # gamma = 0: Hermitian chain
        ],
        ids=["two_band", "trs_chain"],
    )
    def test_hermitian_pairing(self, model):
        for omega in (0.0, 0.37):
            betas = beta_roots(model, omega).betas()
            match_multisets(betas, [1.0 / np.conj(b) for b in betas])

    def test_time_reversal_pairing(self):
        model = build_trs_dagger(1, 0.5, 1.2, -0.3)
        betas = beta_roots(model, 0.11).betas()
        match_multisets(betas, [1.0 / b for b in betas])

    def test_sector_support_is_exact(self):
        rs = beta_roots(build_four_band_critical(c=0.0), 0.05)
        for root in rs.roots:
            outside = [i for i in range(4) if i not in root.sector]
            assert np.all(root.nullvector[outside] == 0)
            assert np.linalg.norm(root.nullvector) == pytest.approx(1.0)

    def test_flat_band_rejected(self):
        from nhtopo.model import LatticeModel

        zero = np.zeros((1, 1), dtype=complex)
        model = LatticeModel(zero, zero, zero)
        with pytest.raises(NhtopoError, match="flat band"):
            beta_roots(model, 0.0)

    def test_defective_root_rejected(self):
        # a repeated symbol zero in one scalar factor produces a genuine
        # size-2 Jordan block: multiplicity 2 with a 1-dim nullspace
        model = build_two_band(1, 1, (2.0, 2.0), (0.5, 0.2))
        with pytest.raises(NhtopoError, match="defective"):
            beta_roots(model, 0.0)

    def test_explicit_partition_must_cover(self):
        model = build_four_band_critical(c=0.0)
        with pytest.raises(NhtopoError, match="partition"):
            beta_roots(model, 0.0, partition=((0, 1), (2,)))


class TestSelectDominant:
    def test_critical_decoupled_selection(self):
        rs = beta_roots(build_four_band_critical(c=0.0), 0.0)
        chosen = select_dominant(rs)
        match_multisets([20, 10, 2, 1], [r.beta for r in chosen])

    def test_critical_coupled_selection(self):
        rs = beta_roots(build_four_band_critical(c=0.05), 0.0)
        chosen = select_dominant(rs)
        # globally largest four: the a-sector descendants
        mags = sorted(abs(r.beta) for r in chosen)
        assert mags == pytest.approx([5, 6, 10, 20], rel=0.05)

    def test_tie_raises(self):
        rs = beta_roots(build_two_band(1, 1, (3.0, 1.0), (1.0, 0.25)), 0.0)
        with pytest.raises(GaplessOrCriticalError, match="tie"):
            select_dominant(rs)

    def test_equal_hoppings_chain_selects_everything(self):
        # only four decay modes exist at t = u (two per family): selection
        # keeps them all and no tie check applies
        rs = beta_roots(build_trs_dagger(1, 1, 1.2, -0.2), 0.0)
        assert len(rs.roots) == 4
        assert len(select_dominant(rs)) == 4


class TestNullvectorLinearity:
    def test_quadratic_scaling(self):
        model = build_two_band(1, 1, (2, 3), (0.5, 0.2))
        r1 = nullvector_linearity_check(model, [1e-3, 2e-3, 4e-3])
        r2 = nullvector_linearity_check(model, [2e-3, 4e-3, 8e-3])
        assert 2.0 < r2 / r1 < 8.0  # omega^2 within a factor of two

    def test_time_reversal_chain_scaling(self):
        model = build_trs_dagger(1, 0.5, 1.2, -0.3)
        r1 = nullvector_linearity_check(model, [1e-3, 2e-3, 4e-3])
        r2 = nullvector_linearity_check(model, [2e-3, 4e-3, 8e-3])
        assert 2.0 < r2 / r1 < 8.0

    def test_degenerate_zero_energy_rejected(self):
        # both symbols share the zero at 2: diagonalizable double root
        model = build_two_band(1, 1, (2.0, 3.0), (2.0, 0.2))
        with pytest.raises(NhtopoError, match="degenerate"):
            nullvector_linearity_check(model, [1e-3, 2e-3])
