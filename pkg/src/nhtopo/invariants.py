"""Reflection-matrix topological invariants and their boundary cross-checks.

The integer invariant of a chiral chain is -Tr(Gamma r(0))/2 (that sign
convention is used everywhere, including sweep output).  The primary
evaluation route is exact at omega = 0: the pole residue A of the surface
Green's function fixes r(0) = I - 2 P, with P the spectral projector onto
the nonzero eigenvalues of A, and the invariant equals
rank(A Pi_+) - rank(A Pi_-).  A small-omega evaluation of r(omega) is a
mandatory consistency check, not the source of truth.

For chains with the time-reversal analog the invariant is the sign of a
Pfaffian (Z2); its gauge is pinned by the principal-branch Takagi factor
and calibrated so the reference trivial chain reports +1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    NhtopoError,
    NotQuantizedError,
    SingularMatrixError,
    SymmetryViolationError,
)
from .greens import COND_LIMIT, ResidueMatrix, g11_semi_infinite, g11_thermo, gap_scale, residue_a
from .linalg import pfaffian, rank_tol
from .model import check_symmetries

__all__ = [
    "ReflectionMatrix",
    "InvariantReport",
    "reflection_matrix",
    "reflection_at_zero",
    "invariant_z",
    "invariant_z2",
    "bbc_rank_check",
    "kramers_pairs_count",
]

QUANTIZATION_TOL = 1e-4
SMALL_OMEGA_AGREEMENT = 1e-5


@dataclass(frozen=True)
class ReflectionMatrix:
    omega: complex
    r: np.ndarray
    coupling: np.ndarray


@dataclass(frozen=True)
class InvariantReport:
    kind: str  # "Z" | "Z2"
    value: int
    gamma_r_eigenvalues: np.ndarray
    quantization_error: float
    rank_plus: int
    rank_minus: int
    kramers_pairs: int | None = None

    def __post_init__(self):
        if self.kind == "Z" and self.value != self.rank_plus - self.rank_minus:
            raise NhtopoError("invariant value inconsistent with residue ranks")
        if self.kind == "Z2" and self.kramers_pairs is not None:
            if self.value != (-1) ** self.kramers_pairs:
                raise NhtopoError("Z2 value inconsistent with the Kramers-pair count")


def reflection_matrix(g11, v_ls=None):
    """r(omega) = (I + i V G V^dag) (I - i V G V^dag)^{-1} for a single
    left channel coupled to the first cell (default coupling: identity)."""
    g = g11.g11
    m = g.shape[0]
    v_ls = np.eye(m, dtype=complex) if v_ls is None else np.asarray(v_ls, dtype=complex)
    k = v_ls @ g @ v_ls.conj().T
    denom = np.eye(m) - 1j * k
    if np.linalg.cond(denom) > COND_LIMIT:
        raise SingularMatrixError(
            "I - i V G V^dag is singular: a perfectly transmitting channel "
            "opened, which signals a gap closing"
        )
    r = (np.eye(m) + 1j * k) @ np.linalg.inv(denom)
    return ReflectionMatrix(g11.omega, r, v_ls)


def _chiral_blocks(model):
    m = model.n_orbitals
    return slice(0, m // 2), slice(m // 2, m)


def _check_residue_symmetry(model, a, rel_tol=1e-8):
    gamma = model.symmetries.gamma
    scale = max(float(np.max(np.abs(a))), 1e-300)
    if np.max(np.abs(gamma @ a - a @ gamma)) > rel_tol * scale:
        raise SymmetryViolationError("residue matrix does not commute with gamma")


def reflection_at_zero(model, residue):
    """Exact omega -> 0 reflection matrix from the pole residue.

    r(0) = I - 2 P where P projects onto the nonzero-eigenvalue subspace
    of A; the projector is built per chirality block since [A, Gamma] = 0.
    """
    a = residue.a if isinstance(residue, ResidueMatrix) else np.asarray(residue, dtype=complex)
    _check_residue_symmetry(model, a)
    m = a.shape[0]
    proj = np.zeros((m, m), dtype=complex)
    for blk in _chiral_blocks(model):
        ablk = a[blk, blk]
        top = np.max(np.abs(ablk))
        if top == 0:
            continue
        evals, vecs = np.linalg.eig(ablk)
        keep = np.abs(evals) > 1e-8 * np.max(np.abs(evals))
        if not np.any(keep):
            continue
        if np.linalg.cond(vecs) > COND_LIMIT:
            raise SingularMatrixError(
                "residue block is too defective to build its spectral projector"
            )
        vinv = np.linalg.inv(vecs)
        proj[blk, blk] = vecs[:, keep] @ vinv[keep, :]
    return np.eye(m) - 2.0 * proj


def _g11_at(model, omega, partition="auto"):
    if np.linalg.cond(model.v) > COND_LIMIT:
        return g11_semi_infinite(model, omega)
    return g11_thermo(model, omega, partition)


def _sorted_eigs(mat):
    e = np.linalg.eigvals(mat)
    return e[np.lexsort((e.imag, e.real))]


def _small_omega_diagnostics(model, gap, partition="auto"):
    """Eigenvalues of Gamma r(omega) at omega = 1e-6*gap, checked against a
    tenfold smaller omega; returns (eigenvalues, quantization_error, r)."""
    gamma = model.symmetries.gamma
    eig_sets = []
    r_first = None
    for w in (1e-6 * gap, 1e-7 * gap):
        r = reflection_matrix(_g11_at(model, w, partition))
        r_first = r.r if r_first is None else r_first
        eig_sets.append(_sorted_eigs(gamma @ r.r))
    drift = float(np.max(np.abs(eig_sets[0] - eig_sets[1])))
    if drift > SMALL_OMEGA_AGREEMENT:
        raise NotQuantizedError(
            f"small-omega reflection eigenvalues drift by {drift:.3e} between "
            "probe frequencies; the omega -> 0 limit is not resolved"
        )
    eigs = eig_sets[0]
    qerr = float(np.max(np.minimum(np.abs(eigs - 1.0), np.abs(eigs + 1.0))))
    return eigs, qerr, r_first


def _require_sublattice(model, need_trs=False):
    if model.symmetries is None:
        raise SymmetryViolationError("model carries no symmetry operators")
    rep = check_symmetries(model)
    if not rep.sublattice:
        raise SymmetryViolationError(
            f"chiral symmetry violated (deviation {rep.max_deviation['sublattice']:.3e})"
        )
    if need_trs:
        if model.symmetries.u_t is None:
            raise SymmetryViolationError("Z2 invariant needs the time-reversal operator")
        if not rep.trs_dagger:
            raise SymmetryViolationError(
                f"time-reversal relation violated (deviation "
                f"{rep.max_deviation['trs_dagger']:.3e})"
            )


def _residue_ranks(model, a):
    m = model.n_orbitals
    pi_plus = np.diag(np.concatenate([np.ones(m // 2), np.zeros(m // 2)]))
    pi_minus = np.eye(m) - pi_plus
    return rank_tol(a @ pi_plus), rank_tol(a @ pi_minus)


def bbc_rank_check(model):
    """(rank(A Pi_+), rank(A Pi_-)) -- the boundary side of the invariant."""
    _require_sublattice(model)
    a = residue_a(model).a
    _check_residue_symmetry(model, a)
    return _residue_ranks(model, a)


def kramers_pairs_count(residue, syms):
    """Number of Kramers pairs of nonzero eigenvalues of the residue.

    Time reversal pairs the chirality sectors, so rank(A Pi_+) must equal
    rank(A Pi_-); the common value is the pair count.
    """
    if syms.u_t is None:
        raise SymmetryViolationError("Kramers counting needs the time-reversal operator")
    a = residue.a if isinstance(residue, ResidueMatrix) else np.asarray(residue, dtype=complex)
    gamma = syms.gamma
    scale = max(float(np.max(np.abs(a))), 1e-300)
    if np.max(np.abs(gamma @ a - a @ gamma)) > 1e-8 * scale:
        raise SymmetryViolationError("residue matrix does not commute with gamma")
    m = a.shape[0]
    pi_plus = np.diag(np.concatenate([np.ones(m // 2), np.zeros(m // 2)]))
    p = rank_tol(a @ pi_plus)
    q = rank_tol(a @ (np.eye(m) - pi_plus))
    if p != q:
        raise SymmetryViolationError(
            f"Kramers pairing violated: rank(A Pi_+) = {p} differs from "
            f"rank(A Pi_-) = {q}"
        )
    return p


def invariant_z(model, omega_factor=1e-4, k_points=256):
    """Integer invariant of a chiral gapped chain, with diagnostics.

    Value: rank(A Pi_+) - rank(A Pi_-) from the exact residue route; the
    small-omega trace of Gamma r(omega) must agree, and the eigenvalues of
    Gamma r(omega) must sit within QUANTIZATION_TOL of +/-1.
    """
    _require_sublattice(model)
    gap = gap_scale(model, k_points)
    a = residue_a(model, omega0=omega_factor * gap).a
    _check_residue_symmetry(model, a)
    p, q = _residue_ranks(model, a)
    value = p - q
    eigs, qerr, _ = _small_omega_diagnostics(model, gap)
    if qerr > QUANTIZATION_TOL:
        raise NotQuantizedError(
            f"Gamma r eigenvalues deviate from +/-1 by {qerr:.3e}; the chain is "
            "gapless or the chiral symmetry is broken"
        )
    trace_value = -0.5 * float(np.sum(eigs).real)
    if round(trace_value) != value:
        raise NotQuantizedError(
            f"residue route gives {value} but the small-omega trace gives "
            f"{trace_value:.6f}; the two routes disagree"
        )
    return InvariantReport("Z", value, eigs, qerr, p, q)


def invariant_z2(model, omega_factor=1e-4, k_points=256):
    """Sign invariant of a chiral chain with the time-reversal analog.

    Q = (-1)^{(M/2)(M/2-1)/2} Pf(i V_C^dag Gamma r(0) V_C) with V_C the
    principal-branch Takagi factor of U_C = U_T Gamma; the independent
    Kramers-pair count p must satisfy Q = (-1)^p.
    """
    _require_sublattice(model, need_trs=True)
    syms = model.symmetries
    gap = gap_scale(model, k_points)
    residue = residue_a(model, omega0=omega_factor * gap)
    p = kramers_pairs_count(residue, syms)
    r0 = reflection_at_zero(model, residue)
    gamma = syms.gamma
    m = model.n_orbitals
    det_gr = np.linalg.det(gamma @ r0)
    if abs(det_gr - 1.0) > 1e-8:
        raise SymmetryViolationError(
            f"det(Gamma r(0)) = {det_gr:.6f} but time reversal forces +1"
        )
    v_c = syms.v_c()
    k = 1j * v_c.conj().T @ gamma @ r0 @ v_c
    if np.max(np.abs(k + k.T)) > 1e-8 * max(1.0, np.max(np.abs(k))):
        raise SymmetryViolationError("V_C^dag Gamma r(0) V_C is not antisymmetric")
    half = m // 2
    prefactor = (-1.0) ** (half * (half - 1) // 2)
    q_raw = prefactor * pfaffian(k)
    if abs(abs(q_raw) - 1.0) > QUANTIZATION_TOL:
        raise NotQuantizedError(f"Pfaffian invariant |Q| = {abs(q_raw):.6f} is not 1")
    if abs(q_raw.imag) > QUANTIZATION_TOL:
        raise NotQuantizedError(f"Pfaffian invariant Q = {q_raw:.6f} is not real")
    value = 1 if q_raw.real > 0 else -1
    if value != (-1) ** p:
        raise NhtopoError(
            f"bulk Pfaffian sign {value} contradicts the Kramers-pair count {p}"
        )
    eigs, qerr, r_small = _small_omega_diagnostics(model, gap)
    if qerr > QUANTIZATION_TOL:
        raise NotQuantizedError(
            f"Gamma r eigenvalues deviate from +/-1 by {qerr:.3e} at the probe "
            "frequency"
        )
    # independent cross-check: the Pfaffian sign read off the finite-
    # frequency reflection matrix (antisymmetrized, which discards the
    # O(omega) symmetric part) must agree with the exact route
    k_small = 1j * v_c.conj().T @ gamma @ r_small @ v_c
    q_small = prefactor * pfaffian(0.5 * (k_small - k_small.T))
    if abs(q_small.real - value) > QUANTIZATION_TOL or abs(q_small.imag) > QUANTIZATION_TOL:
        raise NotQuantizedError(
            f"small-omega Pfaffian gives {q_small:.6f} but the residue route "
            f"gives {value}"
        )
    return InvariantReport("Z2", value, eigs, qerr, p, p, kramers_pairs=p)
