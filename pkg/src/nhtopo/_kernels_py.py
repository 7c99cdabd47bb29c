"""Pure-NumPy implementations of the hot kernels.

These mirror the compiled versions in ``_kernels_cy`` exactly; the backend
module picks one set at import time.  Inputs are assumed validated by the
callers (square complex128 arrays, matching shapes).
"""

import numpy as np


def dyson_iterate(g_inv, v, w, n_cells):
    """Surface block of the resolvent after growing a chain cell by cell.

    Starting from G = g_inv^{-1} for a single cell, applies
    G <- (g_inv - w @ G @ v)^{-1} a total of ``n_cells - 1`` times.

    Returns (G, steps_done).  Raises np.linalg.LinAlgError with the step
    index encoded by the caller when an iterate is singular.
    """
    m = g_inv.shape[0]
    eye = np.eye(m, dtype=complex)
    g = np.linalg.solve(g_inv, eye)
    for step in range(1, n_cells):
        try:
            g = np.linalg.solve(g_inv - w @ g @ v, eye)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(f"singular iterate at step {step + 1}") from exc
    return g, n_cells


def dyson_converge(g_inv, v, w, tol, max_iter):
    """Iterate the surface-block recursion to its fixed point.

    Returns (G, iterations).  Convergence is measured entrywise relative to
    max(1, |G|_max) so that both bounded and pole-enhanced blocks settle.
    Raises RuntimeError when max_iter is exhausted.
    """
    m = g_inv.shape[0]
    eye = np.eye(m, dtype=complex)
    g = np.linalg.solve(g_inv, eye)
    for step in range(1, max_iter + 1):
        try:
            g_next = np.linalg.solve(g_inv - w @ g @ v, eye)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(f"singular iterate at step {step + 1}") from exc
        diff = np.max(np.abs(g_next - g))
        scale = max(1.0, np.max(np.abs(g_next)))
        g = g_next
        if diff <= tol * scale:
            return g, step + 1
    raise RuntimeError(f"no fixed point after {max_iter} iterations")


def pfaffian_skew(a):
    """Pfaffian of an even-dimensional skew-symmetric matrix.

    Skew tridiagonalization by congruence with partial pivoting; the input
    must already be exactly skew-symmetric (callers symmetrize).  Operates
    on a copy.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        pivot = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if a[pivot, k] == 0:
            return 0.0 + 0.0j
        if pivot != k + 1:
            a[[k + 1, pivot], :] = a[[pivot, k + 1], :]
            a[:, [k + 1, pivot]] = a[:, [pivot, k + 1]]
            pf = -pf
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf
