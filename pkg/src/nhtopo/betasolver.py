"""Decay-mode solver: roots beta of det[omega - H(beta)] = 0 with their
nullvectors, structural block detection, and the dominant-mode selection
rule used by the thermodynamic-limit Green's function.

The determinant is converted to a polynomial by sampling on a circle and
solving the (unitary) Fourier system, which avoids symbolic expansion.
Models that decouple into independent index sectors are solved sector by
sector, and selection keeps the largest-magnitude modes of each sector
independently.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GaplessOrCriticalError, NhtopoError
from .linalg import poly_eval

__all__ = [
    "BetaRoot",
    "BetaRootSet",
    "detect_blocks",
    "beta_roots",
    "select_dominant",
    "nullvector_linearity_check",
]

SELECTION_TIE_TOL = 1e-10
# companion-matrix eigenvalues resolve a double root only to ~sqrt(eps),
# so coincident roots must be clustered at a coarser radius than that
CLUSTER_REL_TOL = 3e-7
NULLSPACE_REL_TOL = 1e-8


@dataclass(frozen=True)
class BetaRoot:
    """One decay mode: the root beta, its unit nullvector (full orbital
    space, exact zeros outside the mode's sector), and the sector."""

    beta: complex
    nullvector: np.ndarray
    sector: tuple


@dataclass(frozen=True)
class BetaRootSet:
    omega: complex
    roots: tuple
    block_partition: tuple

    def betas(self):
        return np.array([r.beta for r in self.roots])


def detect_blocks(model):
    """Finest partition of orbital indices with h, V, W simultaneously
    block-diagonal.  Only exact structural zeros decouple; no thresholds."""
    m = model.n_orbitals
    adj = (model.h != 0) | (model.v != 0) | (model.w != 0)
    adj = adj | adj.T
    seen = np.zeros(m, dtype=bool)
    parts = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.nonzero(adj[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        parts.append(tuple(sorted(comp)))
    parts.sort(key=lambda p: p[0])
    return tuple(parts)


def _restrict(mat, idx):
    sel = np.asarray(idx)
    return mat[np.ix_(sel, sel)]


def _sector_polynomial(model, omega, idx):
    """Ascending coefficients of the cleared determinant polynomial of the
    sector: beta^p * det[omega - H_s(beta)] with spurious beta^k factors
    stripped (they arise when hopping blocks are rank deficient)."""
    hs = _restrict(model.h, idx)
    vs = _restrict(model.v, idx)
    ws = _restrict(model.w, idx)
    m = len(idx)
    deg = 2 * m
    n = deg + 1
    scale = max(1.0, np.max(np.abs(hs)), np.max(np.abs(vs)), np.max(np.abs(ws)), abs(omega))

    def sample(radius):
        nodes = radius * np.exp(2j * np.pi * np.arange(n) / n)
        vals = np.array(
            [
                b**m * np.linalg.det(omega * np.eye(m) - (hs + vs * b + ws / b))
                for b in nodes
            ]
        )
        coeffs = np.fft.fft(vals) / n
        return coeffs / radius ** np.arange(n)

    def cleared(coeffs):
        """Strip leading zeros (rank-deficient hoppings lower the degree)
        and trailing zeros (spurious beta = 0 roots of the cleared pole)."""
        nonzero = np.nonzero(np.abs(coeffs) > 1e-12 * np.max(np.abs(coeffs)))[0]
        return coeffs[nonzero[0]: nonzero[-1] + 1]

    coeffs = sample(1.0)
    if np.max(np.abs(coeffs)) <= n * 1e-13 * scale**m:
        raise NhtopoError("determinant is identically zero (flat band); no beta roots")
    coeffs = cleared(coeffs)
    # Re-sample on a better-centered circle when the crude root bounds say
    # the unit radius is far off (keeps the Fourier system well scaled).
    if coeffs.size >= 2:
        upper = 1.0 + np.max(np.abs(coeffs[:-1])) / np.abs(coeffs[-1])
        lower = 1.0 / (1.0 + np.max(np.abs(coeffs[1:])) / np.abs(coeffs[0]))
        rad = np.sqrt(upper * lower)
        if abs(np.log10(rad)) > 0.5 and 1e-3 < rad < 1e3:
            coeffs = cleared(sample(rad))
    return coeffs


def _cluster_roots(roots):
    """Group numerically coincident roots, returning (center, count) pairs."""
    order = np.lexsort((np.angle(roots), np.abs(roots)))
    clusters = []
    for r in roots[order]:
        if clusters and abs(r - clusters[-1][0]) <= CLUSTER_REL_TOL * max(1.0, abs(r)):
            c, k = clusters[-1]
            clusters[-1] = ((c * k + r) / (k + 1), k + 1)
        else:
            clusters.append((r, 1))
    return clusters


def _sector_roots(model, omega, idx):
    coeffs = _sector_polynomial(model, omega, idx)
    if coeffs.size < 2:
        return []
    raw = np.roots(coeffs[::-1])
    # one Newton step tightens already-converged simple roots; a step that
    # wants to move a root visibly signals a cluster, so leave those alone
    deriv = coeffs[1:] * np.arange(1, coeffs.size)
    pv = poly_eval(coeffs, raw)
    dv = poly_eval(deriv, raw)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(dv != 0, pv / dv, np.inf)
    safe = np.abs(step) < 1e-6 * np.maximum(1.0, np.abs(raw))
    raw[safe] = raw[safe] - step[safe]
    hs = _restrict(model.h, idx)
    vs = _restrict(model.v, idx)
    ws = _restrict(model.w, idx)
    m = len(idx)
    # residuals are judged against the model scale, not the evaluated
    # matrix: at a root of high multiplicity the matrix itself collapses
    scale = max(
        np.max(np.abs(hs)), np.max(np.abs(vs)), np.max(np.abs(ws)), abs(omega), 1e-30
    )
    out = []
    for beta, mult in _cluster_roots(raw):
        mat = omega * np.eye(m) - (hs + vs * beta + ws / beta)
        _, sig, vh = np.linalg.svd(mat)
        nullity = int(np.count_nonzero(sig < NULLSPACE_REL_TOL * scale))
        if nullity < mult:
            raise NhtopoError(
                f"root {beta:.12g} has multiplicity {mult} but nullspace dimension "
                f"{nullity}; the transfer map is defective here and the "
                "thermodynamic-limit construction does not apply"
            )
        for j in range(mult):
            x = np.zeros(model.n_orbitals, dtype=complex)
            x[np.asarray(idx)] = vh[m - 1 - j].conj()
            x /= np.linalg.norm(x)
            out.append(BetaRoot(complex(beta), x, tuple(idx)))
    return out


def beta_roots(model, omega, partition="auto"):
    """All decay modes of det[omega - H(beta)] = 0, sector-resolved.

    ``partition`` may be "auto" (structural detection), an explicit
    partition (sequence of index sequences), or None for the trivial
    single-sector treatment.
    """
    omega = complex(omega)
    if partition == "auto":
        partition = detect_blocks(model)
    elif partition is None:
        partition = (tuple(range(model.n_orbitals)),)
    else:
        partition = tuple(tuple(int(i) for i in p) for p in partition)
        flat = sorted(i for p in partition for i in p)
        if flat != list(range(model.n_orbitals)):
            raise NhtopoError("partition must cover each orbital index exactly once")
    roots = []
    for idx in partition:
        roots.extend(_sector_roots(model, omega, idx))
    roots.sort(key=lambda r: -abs(r.beta))
    return BetaRootSet(omega, tuple(roots), partition)


def select_dominant(rootset):
    """The dominant decay modes: within every sector, keep as many
    largest-|beta| roots as the sector has orbitals.

    A magnitude tie at a sector's selection boundary raises
    GaplessOrCriticalError, which transition locators treat as the
    transition itself.
    """
    selected = []
    for idx in rootset.block_partition:
        sector_roots = [r for r in rootset.roots if r.sector == idx]
        m = len(idx)
        if len(sector_roots) < m:
            raise NhtopoError(
                f"sector {idx} has only {len(sector_roots)} decay modes but "
                f"{m} are required for the surface Green's function"
            )
        if len(sector_roots) > m:
            kept, dropped = sector_roots[m - 1].beta, sector_roots[m].beta
            if abs(abs(kept) - abs(dropped)) <= SELECTION_TIE_TOL * max(abs(kept), abs(dropped)):
                raise GaplessOrCriticalError(kept, dropped, sector=idx)
        selected.extend(sector_roots[:m])
    return selected


def _match_to_base(base, roots):
    """Greedy nearest matching of one root list onto a base list."""
    remaining = list(roots)
    matched = []
    for b in base:
        j = int(np.argmin([abs(r.beta - b.beta) for r in remaining]))
        matched.append(remaining.pop(j))
    return matched


def nullvector_linearity_check(model, omega_samples, partition="auto"):
    """Maximum deviation of the nullvectors from a linear-in-omega fit.

    The deviation is expected to scale as omega^2; callers verify the
    scaling by feeding ladders of samples.  Fails when the zero-energy
    roots are degenerate (the perturbative picture needs simple modes).
    """
    base_set = beta_roots(model, 0.0, partition)
    base = list(base_set.roots)
    for idx in base_set.block_partition:
        betas = [r.beta for r in base if r.sector == idx]
        for i in range(len(betas)):
            for j in range(i + 1, len(betas)):
                if abs(betas[i] - betas[j]) <= CLUSTER_REL_TOL * max(1.0, abs(betas[i])):
                    raise NhtopoError(
                        f"degenerate zero-energy root {betas[i]:.12g} in sector {idx}; "
                        "linearity check needs simple roots"
                    )
    samples = [float(w) for w in omega_samples]
    aligned = {i: [] for i in range(len(base))}
    for w in samples:
        rs = beta_roots(model, w, base_set.block_partition)
        matched = _match_to_base(base, rs.roots)
        for i, (b, r) in enumerate(zip(base, matched)):
            overlap = np.vdot(b.nullvector, r.nullvector)
            if abs(overlap) < 1e-8:
                raise NhtopoError("nullvector continuation lost between omega samples")
            aligned[i].append(r.nullvector * np.conj(overlap) / abs(overlap))
    ws = np.array(samples)
    worst = 0.0
    for i, b in enumerate(base):
        dx = np.array(aligned[i]) - b.nullvector
        slope = (ws[:, None] * dx).sum(axis=0) / (ws**2).sum()
        resid = dx - ws[:, None] * slope
        worst = max(worst, float(np.max(np.abs(resid))))
    return worst
