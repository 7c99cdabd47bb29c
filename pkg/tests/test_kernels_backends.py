"""The compiled kernels must be drop-in replacements for the NumPy ones."""

import numpy as np
import pytest

from nhtopo import _kernels_py

try:
    from nhtopo import _kernels_cy

    HAVE_COMPILED = hasattr(_kernels_cy, "dyson_iterate")
except ImportError:
    HAVE_COMPILED = False

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels unavailable")


def _random_system(seed, m=4):
    rng = np.random.default_rng(seed)
    mk = lambda: np.ascontiguousarray(
        rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    )
    return mk(), mk(), mk()


@needs_compiled
@pytest.mark.parametrize("m", [1, 2, 4, 6])
def test_iterate_parity(m):
    gi, v, w = _random_system(m, m)
    g1, n1 = _kernels_py.dyson_iterate(gi, v, w, 25)
    g2, n2 = _kernels_cy.dyson_iterate(gi, v, w, 25)
    assert n1 == n2
    assert np.max(np.abs(g1 - g2)) < 1e-12 * max(1.0, np.max(np.abs(g1)))


@needs_compiled
def test_converge_parity():
    from nhtopo.zoo import build_two_band

    model = build_two_band(1, 1, (2, 3), (0.5, 0.2))
    gi = np.ascontiguousarray(0.4 * np.eye(2) - model.h)
    v = np.ascontiguousarray(model.v)
    w = np.ascontiguousarray(model.w)
    g1, i1 = _kernels_py.dyson_converge(gi, v, w, 1e-13, 5000)
    g2, i2 = _kernels_cy.dyson_converge(gi, v, w, 1e-13, 5000)
    assert i1 == i2
    assert np.max(np.abs(g1 - g2)) < 1e-13


@needs_compiled
def test_converge_budget_exhaustion_parity():
    # growing hopping: the recursion has no bounded fixed point
    gi = np.ascontiguousarray(np.eye(1, dtype=complex))
    v = np.ascontiguousarray(2.0 * np.eye(1, dtype=complex))
    w = np.ascontiguousarray(2.0 * np.eye(1, dtype=complex))
    for impl in (_kernels_py, _kernels_cy):
        with pytest.raises(RuntimeError, match="no fixed point"):
            impl.dyson_converge(gi, v, w, 1e-16, 50)


@needs_compiled
@pytest.mark.parametrize("n", [2, 4, 8, 12, 16])
def test_pfaffian_parity(n):
    rng = np.random.default_rng(n)
    r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = r - r.T
    p1 = _kernels_py.pfaffian_skew(a)
    p2 = _kernels_cy.pfaffian_skew(a)
    assert p1 == pytest.approx(p2, rel=1e-12)


@needs_compiled
def test_pfaffian_zero_column_parity():
    a = np.zeros((4, 4), dtype=complex)
    a[2, 3], a[3, 2] = 1.0, -1.0
    assert _kernels_py.pfaffian_skew(a) == 0
    assert _kernels_cy.pfaffian_skew(a) == 0


def test_backend_module_exposes_kernels():
    from nhtopo import backend

    assert backend.BACKEND in ("compiled", "python")
    for name in ("dyson_iterate", "dyson_converge", "pfaffian_skew"):
        assert callable(getattr(backend, name))
