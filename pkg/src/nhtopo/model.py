"""1D nearest-neighbor tight-binding models and their discrete symmetries.

A model is the triple of M x M blocks (h, V, W): onsite, right-hopping and
left-hopping.  The Bloch-like symbol is H(beta) = h + V*beta + W/beta, and
the open chain with N cells is block tridiagonal with V below and W above
the diagonal.

Symmetry operators are stored explicitly.  On construction the chiral
operator is normalized to diag(+I, -I) by a unitary change of basis that is
applied to all blocks and remembered, so downstream projector formulas can
assume the split form.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import NhtopoError, SymmetryViolationError

__all__ = [
    "BoundaryCondition",
    "LatticeModel",
    "SymmetrySet",
    "SymmetryReport",
    "check_symmetries",
    "h_beta",
    "real_space_hamiltonian",
    "pbc_min_gap",
    "direct_sum",
    "model_from_dict",
    "model_to_dict",
    "load_model",
    "save_model",
]


class BoundaryCondition(Enum):
    OPEN = "open"
    PERIODIC = "periodic"


def _block(m, name):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NhtopoError(f"{name} block must be square, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NhtopoError(f"{name} block has non-finite entries")
    return m


@dataclass(frozen=True)
class SymmetrySet:
    """Chiral operator and, optionally, the time-reversal-like operator.

    gamma must square to the identity; u_t (when present) must satisfy
    u_t @ conj(u_t) = -1, which makes u_c = u_t @ gamma symmetric with
    u_c @ conj(u_c) = +1.
    """

    gamma: np.ndarray
    u_t: np.ndarray | None = None

    def __post_init__(self):
        g = _block(self.gamma, "gamma")
        object.__setattr__(self, "gamma", g)
        n = g.shape[0]
        if np.max(np.abs(g @ g - np.eye(n))) > 1e-10:
            raise SymmetryViolationError("gamma does not square to the identity")
        if np.max(np.abs(g @ g.conj().T - np.eye(n))) > 1e-10:
            raise SymmetryViolationError("gamma is not unitary")
        if self.u_t is not None:
            ut = _block(self.u_t, "u_t")
            object.__setattr__(self, "u_t", ut)
            if ut.shape != g.shape:
                raise SymmetryViolationError("u_t dimension mismatch with gamma")
            if np.max(np.abs(ut @ ut.conj().T - np.eye(n))) > 1e-10:
                raise SymmetryViolationError("u_t is not unitary")
            if np.max(np.abs(ut @ ut.conj() + np.eye(n))) > 1e-10:
                raise SymmetryViolationError("u_t does not satisfy u_t u_t* = -1")

    @property
    def u_c(self):
        """Particle-hole-like combination u_t @ gamma (requires u_t)."""
        if self.u_t is None:
            raise SymmetryViolationError("u_c requested but no u_t operator is stored")
        uc = self.u_t @ self.gamma
        n = uc.shape[0]
        if np.max(np.abs(uc @ uc.conj() - np.eye(n))) > 1e-8:
            raise SymmetryViolationError("u_c does not satisfy u_c u_c* = +1")
        return uc

    def v_c(self):
        """Takagi factor of u_c (computed on demand)."""
        from .linalg import takagi_factor

        return takagi_factor(self.u_c)


def _chiral_diagonalizer(gamma):
    """Unitary Q with Q^dag gamma Q = diag(+1..., -1...), or None if gamma
    is already in that form."""
    n = gamma.shape[0]
    target = np.diag(np.concatenate([np.ones(n // 2), -np.ones(n - n // 2)]))
    if np.max(np.abs(gamma - target)) < 1e-12:
        return None
    # gamma is unitary with gamma^2 = 1, hence Hermitian up to rounding.
    if np.max(np.abs(gamma - gamma.conj().T)) > 1e-10:
        raise SymmetryViolationError("gamma must be Hermitian (unitary involution)")
    evals, q = np.linalg.eigh(0.5 * (gamma + gamma.conj().T))
    order = np.argsort(-evals)
    q = q[:, order]
    evals = evals[order]
    n_plus = int(np.count_nonzero(evals > 0))
    if n_plus != n - n_plus:
        raise SymmetryViolationError(
            f"gamma has {n_plus} positive eigenvalues out of {n}; "
            "chiral sectors must have equal dimension"
        )
    return q


@dataclass(frozen=True)
class LatticeModel:
    """One unit cell of a nearest-neighbor chain: blocks h, V, W.

    ``symmetries`` may be None for plain models (single-band chains used as
    oracles); invariant computations require at least the chiral operator.
    ``basis_change`` records the unitary that brought gamma to split form
    (columns are the new basis vectors in the original one).
    """

    h: np.ndarray
    v: np.ndarray
    w: np.ndarray
    symmetries: SymmetrySet | None = None
    name: str = ""
    basis_change: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        h = _block(self.h, "h")
        v = _block(self.v, "V")
        w = _block(self.w, "W")
        if not (h.shape == v.shape == w.shape):
            raise NhtopoError("h, V, W must share one shape")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        if self.symmetries is not None:
            if self.symmetries.gamma.shape != h.shape:
                raise NhtopoError("symmetry operators must match the block size")
            if h.shape[0] % 2 != 0:
                raise NhtopoError("chiral models need an even number of orbitals")
            q = _chiral_diagonalizer(self.symmetries.gamma)
            if q is not None:
                qh = q.conj().T
                object.__setattr__(self, "h", qh @ h @ q)
                object.__setattr__(self, "v", qh @ v @ q)
                object.__setattr__(self, "w", qh @ w @ q)
                n = h.shape[0]
                gamma = np.diag(
                    np.concatenate([np.ones(n // 2), -np.ones(n // 2)])
                ).astype(complex)
                u_t = None
                if self.symmetries.u_t is not None:
                    u_t = qh @ self.symmetries.u_t @ q.conj()
                object.__setattr__(self, "symmetries", SymmetrySet(gamma, u_t))
                object.__setattr__(self, "basis_change", q)

    @property
    def n_orbitals(self):
        return self.h.shape[0]

    # Frozen dataclass with ndarray fields: identity hashing is what we want.
    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


def h_beta(model, beta):
    """Evaluate H(beta) = h + V*beta + W/beta."""
    if beta == 0:
        raise NhtopoError("H(beta) has a pole at beta = 0")
    return model.h + model.v * beta + model.w / beta


def real_space_hamiltonian(model, n_cells, bc=BoundaryCondition.OPEN):
    """Dense Hamiltonian of an N-cell chain (block tridiagonal, V below the
    diagonal, W above; corner blocks added for periodic chains)."""
    if n_cells < 2:
        raise NhtopoError(f"need at least 2 cells, got {n_cells}")
    m = model.n_orbitals
    ham = np.zeros((n_cells * m, n_cells * m), dtype=complex)
    for n in range(n_cells):
        ham[n * m:(n + 1) * m, n * m:(n + 1) * m] = model.h
    for n in range(n_cells - 1):
        ham[(n + 1) * m:(n + 2) * m, n * m:(n + 1) * m] += model.v
        ham[n * m:(n + 1) * m, (n + 1) * m:(n + 2) * m] += model.w
    if bc is BoundaryCondition.PERIODIC:
        ham[:m, (n_cells - 1) * m:] += model.v
        ham[(n_cells - 1) * m:, :m] += model.w
    return ham


@dataclass(frozen=True)
class SymmetryReport:
    sublattice: bool
    trs_dagger: bool | None
    hermitian: bool
    max_deviation: dict

    def __bool__(self):
        ok = self.sublattice
        if self.trs_dagger is not None:
            ok = ok and self.trs_dagger
        return ok


def check_symmetries(model, syms=None, n_samples=20, tol=1e-10, seed=20240917):
    """Verify the declared symmetries on sampled beta values.

    Checks gamma H(beta) gamma^-1 = -H(beta) and, when u_t is present,
    u_t H(beta)^T u_t^-1 = H(1/beta), at beta points on and off the unit
    circle.  Also reports plain Hermiticity (h = h^dag and V = W^dag).
    """
    syms = syms if syms is not None else model.symmetries
    if syms is None:
        raise SymmetryViolationError("no symmetry operators supplied")
    if syms.gamma.shape != model.h.shape:
        raise NhtopoError("symmetry operators must match the block size")
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.4, 2.5, size=n_samples)
    radii[: n_samples // 3] = 1.0  # keep a third exactly on the circle
    phases = np.exp(2j * np.pi * rng.uniform(size=n_samples))
    betas = radii * phases

    g = syms.gamma
    g_inv = g.conj().T
    dev_sls = 0.0
    dev_trs = 0.0
    for b in betas:
        hb = h_beta(model, b)
        dev_sls = max(dev_sls, np.max(np.abs(g @ hb @ g_inv + hb)))
        if syms.u_t is not None:
            lhs = syms.u_t @ hb.T @ syms.u_t.conj().T
            dev_trs = max(dev_trs, np.max(np.abs(lhs - h_beta(model, 1.0 / b))))
    dev_herm = max(
        np.max(np.abs(model.h - model.h.conj().T)),
        np.max(np.abs(model.v - model.w.conj().T)),
    )
    scale = max(1.0, np.max(np.abs(model.h)), np.max(np.abs(model.v)), np.max(np.abs(model.w)))
    return SymmetryReport(
        sublattice=bool(dev_sls <= tol * scale),
        trs_dagger=None if syms.u_t is None else bool(dev_trs <= tol * scale),
        hermitian=bool(dev_herm <= tol * scale),
        max_deviation={
            "sublattice": float(dev_sls),
            "trs_dagger": float(dev_trs) if syms.u_t is not None else None,
            "hermitian": float(dev_herm),
        },
    )


def pbc_min_gap(model, k_points=256):
    """Smallest |E| over the Bloch spectrum on a uniform k grid."""
    if k_points < 64:
        raise NhtopoError(f"need at least 64 k points, got {k_points}")
    gap = np.inf
    for k in np.linspace(0.0, 2.0 * np.pi, k_points, endpoint=False):
        evals = np.linalg.eigvals(h_beta(model, np.exp(1j * k)))
        gap = min(gap, float(np.min(np.abs(evals))))
    return gap


def direct_sum(a, b, name=""):
    """Block-diagonal combination of two models (symmetries combined when
    both carry them)."""

    def bd(x, y):
        out = np.zeros((x.shape[0] + y.shape[0],) * 2, dtype=complex)
        out[: x.shape[0], : x.shape[0]] = x
        out[x.shape[0]:, x.shape[0]:] = y
        return out

    syms = None
    if a.symmetries is not None and b.symmetries is not None:
        u_t = None
        if a.symmetries.u_t is not None and b.symmetries.u_t is not None:
            u_t = bd(a.symmetries.u_t, b.symmetries.u_t)
        syms = SymmetrySet(bd(a.symmetries.gamma, b.symmetries.gamma), u_t)
    return LatticeModel(bd(a.h, b.h), bd(a.v, b.v), bd(a.w, b.w), syms, name=name)


# -- model-definition files --------------------------------------------------
#
# JSON with complex entries as [re, im] pairs, matrices row-major:
#   {"M": 2, "h": [[[0,0],[1,0]], ...], "V": ..., "W": ...,
#    "gamma": ..., "u_t": ... (optional), "name": "..."}
# or a zoo reference: {"zoo": "two_band", "params": {...}}.


def _matrix_to_pairs(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _pairs_to_matrix(rows, name):
    try:
        return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise NhtopoError(f"malformed matrix field {name!r}: {exc}") from exc


def model_to_dict(model):
    d = {
        "M": model.n_orbitals,
        "h": _matrix_to_pairs(model.h),
        "V": _matrix_to_pairs(model.v),
        "W": _matrix_to_pairs(model.w),
    }
    if model.name:
        d["name"] = model.name
    if model.symmetries is not None:
        d["gamma"] = _matrix_to_pairs(model.symmetries.gamma)
        if model.symmetries.u_t is not None:
            d["u_t"] = _matrix_to_pairs(model.symmetries.u_t)
    return d


def model_from_dict(d):
    if "zoo" in d:
        from . import zoo

        return zoo.build(d["zoo"], **d.get("params", {}))
    for key in ("M", "h", "V", "W"):
        if key not in d:
            raise NhtopoError(f"model definition is missing field {key!r}")
    h = _pairs_to_matrix(d["h"], "h")
    if h.shape != (d["M"], d["M"]):
        raise NhtopoError(f"h has shape {h.shape}, expected ({d['M']}, {d['M']})")
    syms = None
    if "gamma" in d:
        u_t = _pairs_to_matrix(d["u_t"], "u_t") if "u_t" in d else None
        syms = SymmetrySet(_pairs_to_matrix(d["gamma"], "gamma"), u_t)
    return LatticeModel(
        h,
        _pairs_to_matrix(d["V"], "V"),
        _pairs_to_matrix(d["W"], "W"),
        syms,
        name=d.get("name", ""),
    )


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=1)


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
