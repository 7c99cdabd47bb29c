"""Dense complex-matrix primitives: tolerant rank, Pfaffian, Takagi
factorization of symmetric unitaries, and polynomial root finding.

All functions accept and return plain ``numpy.ndarray`` objects with
``complex128`` entries.
"""

import numpy as np
import scipy.linalg

from . import backend
from .errors import NhtopoError

RANK_REL_TOL = 1e-8

__all__ = ["rank_tol", "pfaffian", "takagi_factor", "poly_roots", "trim_poly"]


def _as_square(m, name="matrix"):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NhtopoError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NhtopoError(f"{name} has non-finite entries")
    return m


def rank_tol(m, rel_tol=RANK_REL_TOL):
    """Number of singular values above rel_tol times the largest one.

    A zero matrix has rank 0; the comparison is strict so entries at the
    noise floor never count.
    """
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise NhtopoError("rank_tol: non-finite entries")
    if not 0.0 < rel_tol < 1.0:
        raise NhtopoError(f"rank_tol: rel_tol must lie in (0, 1), got {rel_tol}")
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(s > rel_tol * s[0]))


def pfaffian(m, asym_tol=1e-10):
    """Pfaffian of an even-dimensional antisymmetric matrix.

    The input is symmetrized to (m - m^T)/2 after verifying that the
    symmetric residue is below ``asym_tol`` relative to the matrix norm.
    Dimensions 2 and 4 use the closed forms; larger matrices go through
    skew tridiagonalization with partial pivoting (compiled kernel when
    available).
    """
    m = _as_square(m, "pfaffian input")
    n = m.shape[0]
    if n % 2 != 0:
        raise NhtopoError(f"pfaffian needs even dimension, got {n}")
    scale = np.max(np.abs(m))
    if scale > 0:
        asym = np.max(np.abs(m + m.T)) / scale
        if asym > asym_tol:
            raise NhtopoError(
                f"pfaffian input is not antisymmetric (relative deviation {asym:.3e})"
            )
    a = 0.5 * (m - m.T)
    if n == 0:
        return 1.0 + 0.0j
    if n == 2:
        return complex(a[0, 1])
    if n == 4:
        return complex(
            a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
        )
    return complex(backend.pfaffian_skew(a))


def takagi_factor(u, tol=1e-10):
    """Factor a symmetric unitary as u = V V^T with V unitary.

    For a unitary symmetric input the principal matrix square root is
    itself symmetric and unitary, and S S^T = S^2 = u, so V = sqrt(u).
    The square root is evaluated on the (complex) Schur form, which for a
    normal matrix is diagonal up to rounding.
    """
    u = _as_square(u, "takagi input")
    n = u.shape[0]
    eye = np.eye(n)
    if np.max(np.abs(u - u.T)) > tol * max(1.0, np.max(np.abs(u))):
        raise NhtopoError("takagi_factor: input is not symmetric")
    if np.max(np.abs(u @ u.conj().T - eye)) > tol * 10:
        raise NhtopoError("takagi_factor: input is not unitary")
    t, q = scipy.linalg.schur(u, output="complex")
    v = q @ np.diag(np.sqrt(np.diag(t).astype(complex))) @ q.conj().T
    v = 0.5 * (v + v.T)
    if np.max(np.abs(v @ v.T - u)) > tol:
        raise NhtopoError("takagi_factor: reconstruction failed beyond tolerance")
    return v


def trim_poly(coeffs, rel_tol=1e-12):
    """Drop leading coefficients below rel_tol times the largest magnitude.

    Coefficients are ascending in degree.  Raises on the zero polynomial.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise NhtopoError("polynomial coefficients must be a nonempty 1-d sequence")
    top = np.max(np.abs(c))
    if top == 0:
        raise NhtopoError("zero polynomial")
    keep = np.nonzero(np.abs(c) > rel_tol * top)[0]
    return c[: keep[-1] + 1]


def poly_roots(coeffs, rel_tol=1e-12):
    """All roots (with multiplicity) of a polynomial given by ascending
    coefficients, via the balanced companion-matrix eigenproblem.
    """
    c = trim_poly(coeffs, rel_tol)
    if c.size < 2:
        raise NhtopoError("polynomial must have degree >= 1 after trimming")
    # np.roots expects descending order and applies LAPACK balancing.
    return np.roots(c[::-1])


def poly_eval(coeffs, z):
    """Evaluate an ascending-coefficient polynomial (Horner)."""
    c = np.asarray(coeffs, dtype=complex)
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for ck in c[::-1]:
        acc = acc * z + ck
    return acc
