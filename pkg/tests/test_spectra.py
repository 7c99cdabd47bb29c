import numpy as np
import pytest

from nhtopo.errors import BudgetExceededError, NhtopoError
from nhtopo.spectra import beta_spectrum, locate_transition, obc_spectrum, pbc_min_gap
from nhtopo.zoo import (
    build_four_band_critical,
    build_trs_dagger,
    build_two_band_hermitian,
)

DELTA_C = (np.sqrt(2.0 * (np.sqrt(2581.0) - 9.0)) - 10.0) / 10.0


class TestObcSpectrum:
    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            obc_spectrum(build_four_band_critical(), 1200)

    def test_count(self):
        s = obc_spectrum(build_four_band_critical(), 40)
        assert s.energies.size == 160
        assert s.boundary_flags.size == 160

    def test_hermitian_dimerized_zero_modes(self):
        s = obc_spectrum(build_two_band_hermitian(1.0, (2.0, 3.0)), 40)
        assert int(np.sum(np.abs(s.energies) < 1e-6)) == 2
        assert np.all(np.abs(s.energies.imag) < 1e-8)  # Hermitian spectrum

    def test_critical_chain_boundary_modes(self):
        # c = 0: two modes per decoupled sector; the a-sector pair sits at
        # the (6/10)^(N/2) splitting, about 2.2e-4 at N = 40
        s0 = obc_spectrum(build_four_band_critical(c=0.0), 40)
        mags = np.sort(np.abs(s0.energies))
        assert mags[1] < 1e-12
        assert mags[3] == pytest.approx(2.21e-4, rel=0.01)
        assert mags[4] > 0.6  # well separated from the continuum
        s5 = obc_spectrum(build_four_band_critical(c=0.5), 40)
        assert np.min(np.abs(s5.energies)) > 1e-2

    def test_zero_modes_flagged(self):
        s = obc_spectrum(build_two_band_hermitian(1.0, (2.0, 3.0)), 40)
        near_zero = np.abs(s.energies) < 1e-6
        assert np.all(s.boundary_flags[near_zero])

    def test_chiral_spectrum_pairs_even_zero_count(self):
        for c in (0.0, 0.3):
            s = obc_spectrum(build_four_band_critical(c=c), 30)
            assert int(np.sum(np.abs(s.energies) < 1e-3)) % 2 == 0


class TestBetaSpectrum:
    def test_sample_shapes(self):
        model = build_trs_dagger(1, 1, 1.2, -0.2)
        samples = beta_spectrum(model, [0.0, 0.4, 0.8 + 0.1j])
        assert len(samples) == 3
        assert samples[0].energy == 0
        assert samples[0].betas.size == 4  # rank-deficient hoppings at t = u

    def test_unimodular_crossings_at_ring_closings(self):
        # at delta = -0.2 and 0 two zero-energy modes sit exactly on the
        # unit circle
        for d in (-0.2, 0.0):
            betas = beta_spectrum(build_trs_dagger(1, 1, 1.2, d), [0.0])[0].betas
            on_circle = np.abs(np.abs(betas) - 1.0) < 1e-6
            assert int(np.sum(on_circle)) == 2

    def test_tied_magnitudes_off_circle_at_transition(self):
        # at the open-chain transition two modes from different families
        # share a magnitude that is visibly away from 1
        betas = beta_spectrum(build_trs_dagger(1, 1, 1.2, DELTA_C), [0.0])[0].betas
        mags = np.sort(np.abs(betas))
        gaps = np.abs(np.diff(mags))
        i = int(np.argmin(gaps))
        assert gaps[i] < 1e-6
        assert abs(mags[i] - 1.0) > 0.05

    def test_hermitian_modes_on_unit_circle_in_bulk(self):
        model = build_two_band_hermitian(1.0, (2.0, 3.0))
        # bulk states of a Hermitian ring live at |beta| = 1: sample the
        # decay modes at an energy inside the band
        sample = beta_spectrum(model, [2.5])[0]
        assert np.sum(np.abs(np.abs(sample.betas) - 1) < 1e-8) >= 2


class TestLocateTransition:
    def test_z2_transition(self):
        fam = lambda d: build_trs_dagger(1, 1, 1.2, d)
        dc = locate_transition(fam, -0.15, 0.0, "Z2", tol=1e-3)
        assert abs(dc - DELTA_C) < 2e-3

    def test_no_jump_rejected(self):
        fam = lambda d: build_trs_dagger(1, 1, 1.2, d)
        with pytest.raises(NhtopoError, match="no transition"):
            locate_transition(fam, 0.3, 0.5, "Z2")

    def test_bad_interval_rejected(self):
        fam = lambda d: build_trs_dagger(1, 1, 1.2, d)
        with pytest.raises(NhtopoError):
            locate_transition(fam, 0.5, 0.3, "Z2")

    def test_unknown_kind_rejected(self):
        fam = lambda d: build_trs_dagger(1, 1, 1.2, d)
        with pytest.raises(NhtopoError, match="invariant kind"):
            locate_transition(fam, -0.15, 0.0, "Z3")

    def test_stable_under_refined_knobs(self):
        # halving the extrapolation ladder and doubling the k grid moves
        # the located point by less than the tolerance
        fam = lambda d: build_trs_dagger(1, 1, 1.2, d)
        a = locate_transition(fam, -0.12, -0.04, "Z2", tol=2e-3)
        b = locate_transition(
            fam, -0.12, -0.04, "Z2", tol=2e-3, omega_factor=5e-5, k_points=512
        )
        assert abs(a - b) <= 4e-3
        assert abs(a - DELTA_C) < 4e-3


def test_pbc_min_gap_reexport():
    assert pbc_min_gap(build_trs_dagger(1, 1, 1.2, 0.5)) > 0.3
