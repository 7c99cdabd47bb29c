"""Reference model builders.

Four families cover the regimes the package is exercised on:

* ``two_band``          -- minimal chiral chain, scalar off-diagonal symbols
                           factored by their beta zeros;
* ``four_band_subgbz``  -- chiral four-band chain whose decay modes split
                           into two non-degenerate families;
* ``four_band_critical``-- two chiral two-band chains coupled inside the
                           cell; decoupled at coupling 0 (critical phase);
* ``trs_dagger``        -- chiral chain with the non-Hermitian
                           time-reversal analog (Kramers-paired modes).

Hermitian variants are derived by conjugate-reciprocal zero pairing.
Default parameter values are the reference values used by the bundled
``reproduce`` presets.
"""

import numpy as np

from .errors import NhtopoError
from .model import LatticeModel, SymmetrySet

__all__ = [
    "build_two_band",
    "build_two_band_hermitian",
    "build_four_band_subgbz",
    "build_four_band_critical",
    "build_four_band_critical_hermitian",
    "build_trs_dagger",
    "trs_dagger_analytic_betas",
    "ZOO",
    "build",
]

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)

# four_band_subgbz fixed hoppings
SUBGBZ_T1 = 2.0
SUBGBZ_T2 = 2.0j
SUBGBZ_T_PLUS = 7.0
SUBGBZ_T_MINUS = 3.0

# four_band_critical reference zeros (magnitude-ordered families)
CRITICAL_ZEROS = {
    "zeros_plus_a": (20.0, 10.0),
    "zeros_minus_a": (6.0, 5.0),
    "zeros_plus_b": (2.0, 1.0),
    "zeros_minus_b": (0.2, 0.1),
}


def _chiral_gamma(m):
    return np.diag(np.concatenate([np.ones(m // 2), -np.ones(m // 2)])).astype(complex)


def _factored_blocks(a, zeros):
    """(onsite, right, left) scalars of a*(beta - z1)*(beta - z2)/beta."""
    z1, z2 = (complex(z) for z in zeros)
    if a == 0:
        raise NhtopoError("leading factor must be nonzero")
    if z1 == 0 or z2 == 0:
        raise NhtopoError("zeros must be nonzero")
    return -a * (z1 + z2), complex(a), a * z1 * z2


def build_two_band(a_plus=1.0, a_minus=1.0, zeros_plus=(2.0, 3.0), zeros_minus=(0.5, 0.2)):
    """Two-band chiral chain with scalar symbols factored by their zeros.

    The positive-chirality symbol (lower-left block of H(beta)) has zeros
    ``zeros_plus``; the other block has ``zeros_minus``.
    """
    hp, vp, wp = _factored_blocks(complex(a_plus), zeros_plus)
    hm, vm, wm = _factored_blocks(complex(a_minus), zeros_minus)
    h = np.array([[0, hm], [hp, 0]], dtype=complex)
    v = np.array([[0, vm], [vp, 0]], dtype=complex)
    w = np.array([[0, wm], [wp, 0]], dtype=complex)
    return LatticeModel(h, v, w, SymmetrySet(_chiral_gamma(2)), name="two_band")


def build_two_band_hermitian(a_plus=1.0, zeros_plus=(2.0, 3.0)):
    """Hermitian member of the two-band family.

    Hermiticity of the chain forces the second symbol to have the
    conjugate-reciprocal zeros and a matching leading factor.
    """
    z1, z2 = (complex(z) for z in zeros_plus)
    a_plus = complex(a_plus)
    a_minus = np.conj(a_plus) * np.conj(z1) * np.conj(z2)
    zeros_minus = (1.0 / np.conj(z1), 1.0 / np.conj(z2))
    model = build_two_band(a_plus, a_minus, zeros_plus, zeros_minus)
    return LatticeModel(model.h, model.v, model.w, model.symmetries, name="two_band_hermitian")


def build_four_band_subgbz(lam=0.0):
    """Four-band chiral chain with two non-degenerate decay-mode families.

    The intra-cell coupling ``lam`` drives the topological transition.
    """
    lam = complex(lam)
    h = np.zeros((4, 4), dtype=complex)
    v = np.zeros((4, 4), dtype=complex)
    w = np.zeros((4, 4), dtype=complex)
    # upper-right block: lam*I + [[0, t+ + t1*beta], [t2*beta, 0]]
    h[0:2, 2:4] = np.array([[lam, SUBGBZ_T_PLUS], [0, lam]])
    v[0:2, 2:4] = np.array([[0, SUBGBZ_T1], [SUBGBZ_T2, 0]])
    # lower-left block: lam*I + [[0, t2/beta], [t- + t1/beta, 0]]
    h[2:4, 0:2] = np.array([[lam, 0], [SUBGBZ_T_MINUS, lam]])
    w[2:4, 0:2] = np.array([[0, SUBGBZ_T2], [SUBGBZ_T1, 0]])
    return LatticeModel(h, v, w, SymmetrySet(_chiral_gamma(4)), name="four_band_subgbz")


def build_four_band_critical(
    c=0.0,
    a_plus=1.0,
    a_minus=1.0,
    b_plus=1.0,
    b_minus=1.0,
    zeros_plus_a=CRITICAL_ZEROS["zeros_plus_a"],
    zeros_minus_a=CRITICAL_ZEROS["zeros_minus_a"],
    zeros_plus_b=CRITICAL_ZEROS["zeros_plus_b"],
    zeros_minus_b=CRITICAL_ZEROS["zeros_minus_b"],
):
    """Two chiral two-band chains coupled inside the cell by ``c``.

    At c = 0 the chain is the direct sum of independent a and b sectors;
    any nonzero c couples them.  Orbital order is (+a, +b, -a, -b).
    """
    c = complex(c)
    hpa, vpa, wpa = _factored_blocks(complex(a_plus), zeros_plus_a)
    hma, vma, wma = _factored_blocks(complex(a_minus), zeros_minus_a)
    hpb, vpb, wpb = _factored_blocks(complex(b_plus), zeros_plus_b)
    hmb, vmb, wmb = _factored_blocks(complex(b_minus), zeros_minus_b)
    h = np.zeros((4, 4), dtype=complex)
    v = np.zeros((4, 4), dtype=complex)
    w = np.zeros((4, 4), dtype=complex)
    h[0:2, 2:4] = np.array([[hma, c], [c, hmb]])
    v[0:2, 2:4] = np.diag([vma, vmb])
    w[0:2, 2:4] = np.diag([wma, wmb])
    h[2:4, 0:2] = np.array([[hpa, c], [c, hpb]])
    v[2:4, 0:2] = np.diag([vpa, vpb])
    w[2:4, 0:2] = np.diag([wpa, wpb])
    return LatticeModel(h, v, w, SymmetrySet(_chiral_gamma(4)), name="four_band_critical")


def build_four_band_critical_hermitian(c=0.0, zeros_plus_a=(2.0, 3.0), zeros_plus_b=(1.5, 2.5)):
    """Hermitian member of the coupled-pair family (real coupling c).

    Each sector's second symbol carries the conjugate-reciprocal zeros of
    the first, which is exactly the Hermiticity constraint on the chain.
    """
    c = complex(c)
    if abs(c.imag) > 0:
        raise NhtopoError("Hermiticity requires a real intra-cell coupling")
    za1, za2 = (complex(z) for z in zeros_plus_a)
    zb1, zb2 = (complex(z) for z in zeros_plus_b)
    model = build_four_band_critical(
        c=c,
        a_plus=1.0,
        a_minus=np.conj(za1) * np.conj(za2),
        b_plus=1.0,
        b_minus=np.conj(zb1) * np.conj(zb2),
        zeros_plus_a=zeros_plus_a,
        zeros_minus_a=(1 / np.conj(za1), 1 / np.conj(za2)),
        zeros_plus_b=zeros_plus_b,
        zeros_minus_b=(1 / np.conj(zb1), 1 / np.conj(zb2)),
    )
    return LatticeModel(
        model.h, model.v, model.w, model.symmetries, name="four_band_critical_hermitian"
    )


def build_trs_dagger(t=1.0, u=1.0, gamma=1.2, delta=-0.2):
    """Chiral four-band chain with the non-Hermitian time-reversal analog.

    ``gamma`` is the non-Hermitian strength (gamma = 0 gives a Hermitian
    chain); ``delta`` drives the topological transition.
    """
    t, u, gamma, delta = (float(x) for x in (t, u, gamma, delta))
    c1 = delta + u + 0.5j * gamma
    c2 = delta + u
    x = 0.5j * t * _SX + 0.5 * u * _SY
    y = -0.5j * t * _SX + 0.5 * u * _SY
    h = np.zeros((4, 4), dtype=complex)
    v = np.zeros((4, 4), dtype=complex)
    w = np.zeros((4, 4), dtype=complex)
    h[0:2, 2:4] = c1 * _SY
    h[2:4, 0:2] = c2 * _SY
    v[0:2, 2:4] = x
    v[2:4, 0:2] = x
    w[0:2, 2:4] = y
    w[2:4, 0:2] = y
    gamma_op = np.kron(np.diag([1.0, -1.0]), np.eye(2)).astype(complex)
    u_t = np.kron(np.array([[0.0, -1.0], [1.0, 0.0]]), np.eye(2)).astype(complex)
    return LatticeModel(h, v, w, SymmetrySet(gamma_op, u_t), name="trs_dagger")


def trs_dagger_analytic_betas(t, u, gamma, delta):
    """Analytic zero-energy decay modes of the trs_dagger chain.

    Returns eight (beta, nullvector) pairs ordered so consecutive entries
    (2i-1, 2i) multiply to 1.  Requires t != u (two of the modes escape to
    zero/infinity in that limit and the chain drops to four modes).
    """
    t, u, gamma, delta = (float(x) for x in (t, u, gamma, delta))
    if abs(t - u) < 1e-12:
        raise NhtopoError("analytic mode list degenerates at t == u")
    s0 = np.sqrt(complex(delta**2 + t**2 + 2 * delta * u))
    s1 = np.sqrt(4 * t**2 + (2 * delta + 1j * gamma) * (2 * delta + 1j * gamma + 4 * u))
    du = delta + u
    dg = 2 * delta + 2 * u + 1j * gamma
    e1, e2, e3, e4 = np.eye(4, dtype=complex)
    return [
        (-(du + s0) / (t + u), e1),
        ((du - s0) / (t - u), e2),
        ((s0 - du) / (t + u), e1),
        ((du + s0) / (t - u), e2),
        ((dg - s1) / (2 * (t - u)), e4),
        (-(dg + s1) / (2 * (t + u)), e3),
        ((dg + s1) / (2 * (t - u)), e4),
        ((s1 - dg) / (2 * (t + u)), e3),
    ]


ZOO = {
    "two_band": build_two_band,
    "two_band_hermitian": build_two_band_hermitian,
    "four_band_subgbz": build_four_band_subgbz,
    "four_band_critical": build_four_band_critical,
    "four_band_critical_hermitian": build_four_band_critical_hermitian,
    "trs_dagger": build_trs_dagger,
}


def build(name, **params):
    """Instantiate a zoo model by name."""
    try:
        builder = ZOO[name]
    except KeyError:
        raise NhtopoError(
            f"unknown zoo model {name!r}; available: {', '.join(sorted(ZOO))}"
        ) from None
    return builder(**params)
