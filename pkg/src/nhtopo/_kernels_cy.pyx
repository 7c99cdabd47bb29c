# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: the cell-by-cell surface recursion and the skew
tridiagonalization behind the Pfaffian.

Mirrors _kernels_py exactly (same signatures, same exceptions); the
backend module picks whichever imported.  The per-step linear solves go
through LAPACK's zgesv; passing C-ordered buffers as if column-major
solves the transposed system, which lands the inverse back in row-major
order with no explicit transposes.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_lapack cimport zgesv

cnp.import_array()


cdef inline void _matmul(double complex[:, ::1] a, double complex[:, ::1] b,
                         double complex[:, ::1] out, int m) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc
    for i in range(m):
        for j in range(m):
            acc = 0
            for k in range(m):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc


cdef inline int _invert(double complex[:, ::1] mat, double complex[:, ::1] out,
                        int[::1] ipiv, int m) noexcept nogil:
    """Overwrite out with mat^{-1} (mat is destroyed)."""
    cdef int i, j, info = 0, n = m, nrhs = m
    for i in range(m):
        for j in range(m):
            out[i, j] = 0
        out[i, i] = 1
    zgesv(&n, &nrhs, &mat[0, 0], &n, &ipiv[0], &out[0, 0], &n, &info)
    return info


def dyson_iterate(double complex[:, ::1] g_inv, double complex[:, ::1] v,
                  double complex[:, ::1] w, int n_cells):
    """Surface block after n_cells - 1 recursion steps from (g_inv)^{-1}."""
    cdef int m = g_inv.shape[0]
    g_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] g = g_arr
    scratch_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] scratch = scratch_arr
    t1_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] t1 = t1_arr
    t2_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] t2 = t2_arr
    ipiv_arr = np.empty(m, dtype=np.intc)
    cdef int[::1] ipiv = ipiv_arr
    cdef int i, j, step, info

    scratch[:, :] = g_inv
    info = _invert(scratch, g, ipiv, m)
    if info != 0:
        raise np.linalg.LinAlgError("singular iterate at step 1")
    for step in range(1, n_cells):
        with nogil:
            _matmul(w, g, t1, m)
            _matmul(t1, v, t2, m)
            for i in range(m):
                for j in range(m):
                    scratch[i, j] = g_inv[i, j] - t2[i, j]
            info = _invert(scratch, g, ipiv, m)
        if info != 0:
            raise np.linalg.LinAlgError(f"singular iterate at step {step + 1}")
    return g_arr, n_cells


def dyson_converge(double complex[:, ::1] g_inv, double complex[:, ::1] v,
                   double complex[:, ::1] w, double tol, int max_iter):
    """Fixed point of the surface recursion; returns (G, iterations)."""
    cdef int m = g_inv.shape[0]
    g_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] g = g_arr
    gn_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] gn = gn_arr
    scratch_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] scratch = scratch_arr
    t1_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] t1 = t1_arr
    t2_arr = np.empty((m, m), dtype=complex)
    cdef double complex[:, ::1] t2 = t2_arr
    ipiv_arr = np.empty(m, dtype=np.intc)
    cdef int[::1] ipiv = ipiv_arr
    cdef int i, j, step, info
    cdef double diff, scale, mag
    cdef double complex d
    cdef bint done

    scratch[:, :] = g_inv
    info = _invert(scratch, g, ipiv, m)
    if info != 0:
        raise np.linalg.LinAlgError("singular iterate at step 1")
    for step in range(1, max_iter + 1):
        done = False
        with nogil:
            _matmul(w, g, t1, m)
            _matmul(t1, v, t2, m)
            for i in range(m):
                for j in range(m):
                    scratch[i, j] = g_inv[i, j] - t2[i, j]
            info = _invert(scratch, gn, ipiv, m)
            if info == 0:
                diff = 0
                scale = 1
                for i in range(m):
                    for j in range(m):
                        d = gn[i, j] - g[i, j]
                        mag = d.real * d.real + d.imag * d.imag
                        if mag > diff:
                            diff = mag
                        mag = gn[i, j].real * gn[i, j].real + gn[i, j].imag * gn[i, j].imag
                        if mag > scale:
                            scale = mag
                        g[i, j] = gn[i, j]
                if diff <= tol * tol * scale:
                    done = True
        if info != 0:
            raise np.linalg.LinAlgError(f"singular iterate at step {step + 1}")
        if done:
            return g_arr, step + 1
    raise RuntimeError(f"no fixed point after {max_iter} iterations")


def pfaffian_skew(a):
    """Pfaffian of an exactly skew-symmetric complex matrix (copy taken)."""
    a_arr = np.array(a, dtype=complex, order="C")
    cdef double complex[:, ::1] am = a_arr
    cdef int n = am.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    tau_arr = np.empty(n, dtype=complex)
    cdef double complex[::1] tau = tau_arr
    col_arr = np.empty(n, dtype=complex)
    cdef double complex[::1] col = col_arr
    cdef double complex pf = 1.0 + 0.0j
    cdef double complex tmp, piv
    cdef double best, mag
    cdef int k, i, j, kp

    with nogil:
        for k in range(0, n - 1, 2):
            kp = k + 1
            best = am[k + 1, k].real * am[k + 1, k].real + am[k + 1, k].imag * am[k + 1, k].imag
            for i in range(k + 2, n):
                mag = am[i, k].real * am[i, k].real + am[i, k].imag * am[i, k].imag
                if mag > best:
                    best = mag
                    kp = i
            if am[kp, k] == 0:
                pf = 0
                break
            if kp != k + 1:
                for j in range(n):
                    tmp = am[k + 1, j]
                    am[k + 1, j] = am[kp, j]
                    am[kp, j] = tmp
                for i in range(n):
                    tmp = am[i, k + 1]
                    am[i, k + 1] = am[i, kp]
                    am[i, kp] = tmp
                pf = -pf
            piv = am[k, k + 1]
            pf = pf * piv
            if k + 2 < n:
                for i in range(k + 2, n):
                    tau[i] = am[k, i] / piv
                    col[i] = am[i, k + 1]
                for i in range(k + 2, n):
                    for j in range(k + 2, n):
                        am[i, j] = am[i, j] + tau[i] * col[j] - col[i] * tau[j]
    return complex(pf)
