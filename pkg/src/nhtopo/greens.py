"""First-cell Green's-function block G11(omega), by four routes:

* direct dense inversion of a finite chain (oracle),
* the surface recursion grown cell by cell (reference finite-N method,
  works for singular hopping blocks),
* transfer-matrix powers (test oracle, small N only),
* the thermodynamic-limit formula from the dominant decay modes.

Plus the residue matrix of the 1/omega pole, extracted by Richardson
extrapolation of omega * G11(omega).
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .betasolver import beta_roots, select_dominant
from .errors import NhtopoError, NonConvergentError, SingularMatrixError
from .model import BoundaryCondition, pbc_min_gap, real_space_hamiltonian

__all__ = [
    "GreensBlock",
    "ResidueMatrix",
    "g11_direct",
    "g11_dyson",
    "g11_semi_infinite",
    "g11_thermo",
    "transfer_matrix",
    "g11_transfer_power",
    "residue_a",
    "gap_scale",
]

COND_LIMIT = 1e12
GAP_FLOOR = 1e-3


@dataclass(frozen=True)
class GreensBlock:
    omega: complex
    g11: np.ndarray
    method: str  # "direct" | "dyson" | "thermo"


@dataclass(frozen=True)
class ResidueMatrix:
    """Coefficient of the 1/omega pole of G11; zero when the spectrum has
    no protected zero-energy content at the surface."""

    a: np.ndarray


def g11_direct(model, n_cells, omega):
    """Top-left block of (omega - H_open)^{-1} by dense linear solves."""
    m = model.n_orbitals
    if n_cells == 1:  # no hoppings: the cell resolvent itself
        ham = model.h.copy()
    else:
        ham = real_space_hamiltonian(model, n_cells, BoundaryCondition.OPEN)
    lhs = omega * np.eye(n_cells * m) - ham
    rhs = np.zeros((n_cells * m, m), dtype=complex)
    rhs[:m, :m] = np.eye(m)
    try:
        sol = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError:
        sol = None
    # LU rarely reports exact singularity; a blown-up solution is the
    # practical signature of probing on top of a chain eigenvalue
    if sol is None or not np.all(np.isfinite(sol)) or np.max(np.abs(sol)) > 1e12:
        evals = np.linalg.eigvals(ham)
        nearest = float(np.min(np.abs(evals - omega)))
        raise SingularMatrixError(
            f"omega - H is singular at omega={omega}: nearest chain eigenvalue "
            f"is {nearest:.3e} away"
        )
    return GreensBlock(complex(omega), sol[:m, :], "direct")


def g11_dyson(model, n_cells, omega):
    """Surface block after growing the chain to n_cells, one cell at a time.

    Uses the recursion G_N = (omega - h - W G_{N-1} V)^{-1} from
    G_1 = (omega - h)^{-1}; no invertibility of V is needed.
    """
    if n_cells < 1:
        raise NhtopoError("need at least one cell")
    g_inv = omega * np.eye(model.n_orbitals) - model.h
    try:
        g, _ = backend.dyson_iterate(
            np.ascontiguousarray(g_inv),
            np.ascontiguousarray(model.v),
            np.ascontiguousarray(model.w),
            int(n_cells),
        )
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"surface recursion failed: {exc}") from None
    return GreensBlock(complex(omega), g, "dyson")


def g11_semi_infinite(model, omega, tol=1e-13, max_iter=100_000):
    """Fixed point of the surface recursion (the N -> infinity block)."""
    g_inv = omega * np.eye(model.n_orbitals) - model.h
    try:
        g, _ = backend.dyson_converge(
            np.ascontiguousarray(g_inv),
            np.ascontiguousarray(model.v),
            np.ascontiguousarray(model.w),
            float(tol),
            int(max_iter),
        )
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"surface recursion failed: {exc}") from None
    except RuntimeError as exc:
        raise NonConvergentError(str(exc)) from None
    return GreensBlock(complex(omega), g, "dyson")


def transfer_matrix(model, omega):
    """Two-cell transfer matrix [[V^-1 (omega-h), -V^-1 W], [I, 0]].

    Requires an invertible V; chains with rank-deficient hopping must use
    the surface recursion instead.
    """
    m = model.n_orbitals
    if np.linalg.cond(model.v) > COND_LIMIT:
        raise SingularMatrixError(
            "hopping block V is singular or near-singular; the transfer matrix "
            "does not exist -- use the surface recursion (g11_dyson) instead"
        )
    v_inv = np.linalg.inv(model.v)
    t = np.zeros((2 * m, 2 * m), dtype=complex)
    t[:m, :m] = v_inv @ (omega * np.eye(m) - model.h)
    t[:m, m:] = -v_inv @ model.w
    t[m:, :m] = np.eye(m)
    return t


def g11_transfer_power(model, n_cells, omega):
    """Finite-N surface block from transfer-matrix powers (test oracle).

    Matrix powers of the transfer map over- and underflow exponentially in
    chains with skewed decay modes, so this route is capped at N <= 30 and
    exists only to cross-check the recursion.
    """
    if n_cells > 30:
        raise NhtopoError("transfer-power route is a short-chain oracle (N <= 30)")
    m = model.n_orbitals
    t = transfer_matrix(model, omega)
    tn = np.linalg.matrix_power(t, n_cells)
    g = tn[m:, :m] @ np.linalg.inv(tn[:m, :m]) @ np.linalg.inv(model.v)
    return GreensBlock(complex(omega), g, "direct")


def g11_thermo(model, omega, partition="auto"):
    """Thermodynamic-limit surface block from the dominant decay modes.

    With X the matrix of selected nullvectors and B their betas, the block
    is X diag(1/B) X^{-1} V^{-1}, assembled sector by sector.  When V is
    rank deficient the analytic composition is unavailable and the
    converged surface recursion is returned instead (same limit).
    """
    omega = complex(omega)
    if np.linalg.cond(model.v) > COND_LIMIT:
        g = g11_semi_infinite(model, omega)
        return GreensBlock(omega, g.g11, "thermo")
    rootset = beta_roots(model, omega, partition)
    selected = select_dominant(rootset)
    m = model.n_orbitals
    g = np.zeros((m, m), dtype=complex)
    for idx in rootset.block_partition:
        sel = np.asarray(idx)
        sector_sel = [r for r in selected if r.sector == idx]
        x = np.column_stack([r.nullvector[sel] for r in sector_sel])
        if np.linalg.cond(x) > COND_LIMIT:
            raise SingularMatrixError(
                f"selected nullvector matrix is singular at omega={omega} in "
                f"sector {idx}; no block or pairing structure resolves the "
                "selection, so the thermodynamic-limit formula is invalid here"
            )
        d = np.diag([1.0 / r.beta for r in sector_sel])
        v_sector = model.v[np.ix_(sel, sel)]
        g[np.ix_(sel, sel)] = x @ d @ np.linalg.inv(x) @ np.linalg.inv(v_sector)
    return GreensBlock(omega, g, "thermo")


def gap_scale(model, k_points=256):
    """Cheap model-independent frequency scale: the Bloch-spectrum minimum
    |E| on a k grid, floored so that chains whose ring spectrum touches
    zero still get a usable probe frequency."""
    return max(pbc_min_gap(model, k_points), GAP_FLOOR)


def _g11_for_residue(model, omega, partition):
    if np.linalg.cond(model.v) > COND_LIMIT:
        return g11_semi_infinite(model, omega).g11
    return g11_thermo(model, omega, partition).g11


def _richardson(fvals):
    """Order-2 Richardson limit of f(w), f(w/2), f(w/4) as w -> 0 for
    f(w) = A + c1 w + c2 w^2 + ..."""
    f1, f2, f4 = fvals
    return (8.0 * f4 - 6.0 * f2 + f1) / 3.0


def residue_a(model, omega0=None, partition="auto", snap_tol=1e-8):
    """Residue of the 1/omega pole of the thermodynamic-limit G11.

    omega * G11(omega) is analytic at 0, so two Richardson refinements on a
    geometric omega ladder reach the limit at high order.  Two staggered
    ladders must agree, otherwise the extrapolation did not converge (a
    gapless bulk).  Entries below snap_tol relative to the result scale are
    snapped to exact zeros so ranks are stable downstream.
    """
    if omega0 is None:
        omega0 = 1e-4 * gap_scale(model)
    ladder = [omega0 / 2**k for k in range(4)]
    fvals = [w * _g11_for_residue(model, w, partition) for w in ladder]
    a1 = _richardson(fvals[:3])
    a2 = _richardson(fvals[1:])
    scale = max(float(np.max(np.abs(a1))), float(np.max(np.abs(fvals[0]))), 1e-300)
    if np.max(np.abs(a1 - a2)) > 1e-6 * scale:
        raise NonConvergentError(
            "residue extrapolation did not settle (staggered ladders disagree); "
            "the bulk is likely gapless at this parameter point"
        )
    a = a2.copy()
    a[np.abs(a) < snap_tol * scale] = 0.0
    return ResidueMatrix(a)
