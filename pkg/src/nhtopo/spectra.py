"""Finite-chain and Bloch spectra, decay-mode spectra per energy, and
bisection of transition points on the integer invariant.

Transitions are located on the invariant, not on a gap estimate: the
critical family changes its invariant without any bulk gap closing, so the
invariant is the only reliable order parameter.
"""

from dataclasses import dataclass

import numpy as np

from .betasolver import beta_roots, detect_blocks
from .errors import (
    BudgetExceededError,
    GaplessOrCriticalError,
    NhtopoError,
    NonConvergentError,
)
from .invariants import invariant_z, invariant_z2
from .model import BoundaryCondition, LatticeModel, pbc_min_gap, real_space_hamiltonian

__all__ = [
    "SpectrumSample",
    "BetaSpectrumSample",
    "obc_spectrum",
    "pbc_min_gap",
    "beta_spectrum",
    "locate_transition",
]

DENSE_BUDGET = 4000
NEAR_ZERO_REL = 1e-6


@dataclass(frozen=True)
class SpectrumSample:
    parameter: float | None
    energies: np.ndarray
    boundary_flags: np.ndarray


@dataclass(frozen=True)
class BetaSpectrumSample:
    energy: complex
    betas: np.ndarray


def _discrete_flags(energies):
    """Isolated-point heuristic for plotting: a level is flagged when its
    distance to the 5th-nearest level exceeds 10x the median such distance.
    Never used by invariant computations."""
    n = energies.size
    if n < 7:
        return np.zeros(n, dtype=bool)
    dist = np.abs(energies[:, None] - energies[None, :])
    np.fill_diagonal(dist, np.inf)
    d5 = np.sort(dist, axis=1)[:, 4]
    med = np.median(d5)
    if med == 0:
        return np.zeros(n, dtype=bool)
    return d5 > 10.0 * med


def _balanced_eigvals(model, n_cells):
    """Open-chain eigenvalues, solved sector by sector after an exact
    hopping-balance similarity.

    Rescaling every cell by r^n (one scalar r per decoupled sector, chosen
    to equalize the typical V and W magnitudes) leaves the spectrum
    unchanged but removes most of the exponential non-normality of
    skin-effect chains, which would otherwise swamp the boundary-mode
    energies with pseudospectral noise.
    """
    energies = []
    for idx in detect_blocks(model):
        sel = np.asarray(idx)
        sub = LatticeModel(
            model.h[np.ix_(sel, sel)],
            model.v[np.ix_(sel, sel)],
            model.w[np.ix_(sel, sel)],
        )
        nzv = np.abs(sub.v[sub.v != 0])
        nzw = np.abs(sub.w[sub.w != 0])
        if nzv.size and nzw.size:
            r = np.sqrt(np.exp(np.mean(np.log(nzw))) / np.exp(np.mean(np.log(nzv))))
            if np.isfinite(r) and r > 0:
                sub = LatticeModel(sub.h, r * sub.v, sub.w / r)
        ham = real_space_hamiltonian(sub, n_cells, BoundaryCondition.OPEN)
        energies.append(np.linalg.eigvals(ham))
    return np.concatenate(energies)


def obc_spectrum(model, n_cells, parameter=None):
    """All eigenvalues of the open chain, with boundary-candidate flags.

    Flags mark levels that are near zero relative to the spectral radius or
    isolated from the continuum by the clustering heuristic.
    """
    if n_cells * model.n_orbitals > DENSE_BUDGET:
        raise BudgetExceededError(
            f"dense solve of size {n_cells * model.n_orbitals} exceeds the "
            f"budget of {DENSE_BUDGET}"
        )
    energies = _balanced_eigvals(model, n_cells)
    radius = max(float(np.max(np.abs(energies))), 1e-300)
    near_zero = np.abs(energies) < NEAR_ZERO_REL * radius
    flags = near_zero | _discrete_flags(energies)
    return SpectrumSample(parameter, energies, flags)


def beta_spectrum(model, energies, partition="auto"):
    """Decay-mode roots beta of det[E - H(beta)] = 0 for each energy.

    The zero-energy sample doubles as the boundary-state candidate set, so
    it is worth including E = 0 in ``energies`` when plotting.
    """
    samples = []
    for e in np.atleast_1d(np.asarray(energies, dtype=complex)):
        rs = beta_roots(model, e, partition)
        samples.append(BetaSpectrumSample(complex(e), rs.betas()))
    return samples


def _invariant_value(model, which, **kwargs):
    if which == "Z":
        return invariant_z(model, **kwargs).value
    if which == "Z2":
        return invariant_z2(model, **kwargs).value
    raise NhtopoError(f"unknown invariant kind {which!r}")


def locate_transition(family, lo, hi, which="Z", tol=1e-4, omega_factor=1e-4, k_points=256):
    """Bisection of the invariant jump of a one-parameter model family.

    ``family`` maps a parameter value to a model.  A selection-boundary tie
    (GaplessOrCriticalError) during evaluation is itself the transition
    signature and terminates the search at that parameter; so does a
    non-convergent surface recursion, which is the same degeneracy seen by
    the fixed-point route.
    """
    lo, hi = float(lo), float(hi)
    if not hi > lo:
        raise NhtopoError("need hi > lo")
    knobs = {"omega_factor": omega_factor, "k_points": k_points}
    v_lo = _invariant_value(family(lo), which, **knobs)
    v_hi = _invariant_value(family(hi), which, **knobs)
    if v_lo == v_hi:
        raise NhtopoError(
            f"invariant is {v_lo} at both endpoints; no transition inside "
            f"[{lo}, {hi}]"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        try:
            v_mid = _invariant_value(family(mid), which, **knobs)
        except (GaplessOrCriticalError, NonConvergentError):
            return mid
        if v_mid == v_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
