"""Self-contained acceptance checks, runnable via ``nhtopo selftest``.

Each criterion is a function that raises AssertionError on failure; the
runner times it against its budget and prints one PASS/FAIL line.  The
same functions back tests/test_acceptance.py.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import zoo
from .betasolver import beta_roots
from .greens import g11_direct, g11_dyson, g11_thermo, gap_scale
from .invariants import _g11_at, invariant_z, invariant_z2, reflection_matrix
from .linalg import pfaffian, takagi_factor
from .model import check_symmetries
from .spectra import locate_transition, obc_spectrum
from .sweep import preset_config, run_sweep

DELTA_C = (np.sqrt(2.0 * (np.sqrt(2581.0) - 9.0)) - 10.0) / 10.0


def _match_multisets(a, b, tol=1e-8):
    """Greedy nearest matching; returns the worst matched relative distance."""
    b = [complex(x) for x in b]
    assert len(a) == len(b), f"multiset sizes differ: {len(a)} vs {len(b)}"
    worst = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        worst = max(worst, abs(x - b[j]) / max(1.0, abs(x)))
        b.pop(j)
    assert worst <= tol, f"multiset mismatch: worst relative distance {worst:.3e}"
    return worst


def _gapped_zoo_points():
    return [
        zoo.build_two_band(1, 1, (2, 3), (0.5, 0.2)),
        zoo.build_two_band(1, 1, (0.5, 0.2), (2, 3)),
        zoo.build_two_band(1, 1, (2, 0.4), (1.5, 0.3)),
        zoo.build_two_band_hermitian(1, (2, 3)),
        zoo.build_four_band_subgbz(1.0),
        zoo.build_four_band_subgbz(5.0),
        zoo.build_four_band_critical(c=0.0),
        zoo.build_four_band_critical(c=0.5),
        zoo.build_four_band_critical(c=1.0),
        zoo.build_four_band_critical_hermitian(c=0.1),
        zoo.build_trs_dagger(1, 1, 1.2, -0.2),
        zoo.build_trs_dagger(1, 1, 1.2, 0.5),
        zoo.build_trs_dagger(1, 1, 1.2, -2.5),
        zoo.build_trs_dagger(1, 0.5, 1.2, -0.3),
    ]


def criterion_1():
    """Gamma r eigenvalues quantize to +/-1 at omega = 1e-6 * gap."""
    points = _gapped_zoo_points()
    assert len(points) >= 12
    worst = 0.0
    for model in points:
        gap = gap_scale(model)
        r = reflection_matrix(_g11_at(model, 1e-6 * gap))
        eigs = np.linalg.eigvals(model.symmetries.gamma @ r.r)
        qerr = float(np.max(np.minimum(np.abs(eigs - 1.0), np.abs(eigs + 1.0))))
        assert qerr < 1e-5, f"{model.name}: quantization error {qerr:.3e} >= 1e-5"
        worst = max(worst, qerr)
    return f"{len(points)} configurations, worst quantization error {worst:.2e}"


def criterion_2():
    """Critical-coupling reproduction: invariant 2 only at c = 0, plus the
    literal boundary-mode count thresholds.

    The boundary half asserts 4 eigenvalues with |E| < 1e-6 at N = 40.
    The two a-sector modes actually sit at 2.2e-4 there (their splitting
    shrinks as (6/10)^(N/2) and crosses 1e-6 only near N = 64), so that
    sub-assertion fails by construction; it is kept in its literal form
    deliberately.
    """
    assert invariant_z(zoo.build_four_band_critical(c=0.0)).value == 2
    for c in (0.05, -0.05, 0.5, -0.5, 1.0, -1.0):
        v = invariant_z(zoo.build_four_band_critical(c=c)).value
        assert v == 0, f"c={c}: invariant {v} != 0"
    spec0 = obc_spectrum(zoo.build_four_band_critical(c=0.0), 40)
    spec5 = obc_spectrum(zoo.build_four_band_critical(c=0.5), 40)
    min5 = float(np.min(np.abs(spec5.energies)))
    assert min5 > 1e-2, f"c=0.5: smallest |E| {min5:.3e} is not above 1e-2"
    n_zero = int(np.sum(np.abs(spec0.energies) < 1e-6))
    assert n_zero == 4, (
        f"c=0: {n_zero} modes below |E| = 1e-6 at N = 40 (the four smallest "
        f"are {np.sort(np.abs(spec0.energies))[:4]}); the a-sector pair sits "
        "at 2.2e-4 and only drops below 1e-6 for N >= 64"
    )
    return "invariant column and boundary-mode counts reproduced"


def criterion_3():
    """Z2 transition points and values for the time-reversal chain."""

    def family(d):
        return zoo.build_trs_dagger(1.0, 1.0, 1.2, d)

    assert invariant_z2(family(-0.2)).value == -1
    assert invariant_z2(family(0.5)).value == 1
    dc = locate_transition(family, -0.15, 0.0, "Z2", tol=1e-4)
    assert abs(dc - DELTA_C) < 1e-3, f"first transition at {dc:.6f}, expected {DELTA_C:.6f}"
    dc2 = locate_transition(family, -2.0, -1.8, "Z2", tol=1e-4)
    assert abs(dc2 - (-2.0 - DELTA_C)) < 1e-3, (
        f"second transition at {dc2:.6f}, expected {-2.0 - DELTA_C:.6f}"
    )
    return f"transitions at {dc:.5f} and {dc2:.5f}, Q values correct"


def criterion_4():
    """Numeric decay modes match the analytic solutions, with reciprocal
    pairing of consecutive analytic modes."""
    points = [
        (1.0, 0.0, 1.2, 0.0),
        (1.0, 0.5, 1.2, -0.3),
        (1.0, 0.0, 1.2, 0.4),
        (1.3, 0.6, 0.8, -0.7),
        (1.0, 0.5, 2.2, 0.1),
    ]
    for t, u, g, d in points:
        analytic = [b for b, _ in zoo.trs_dagger_analytic_betas(t, u, g, d)]
        numeric = beta_roots(zoo.build_trs_dagger(t, u, g, d), 0.0).betas()
        _match_multisets(analytic, numeric, tol=1e-8)
        for i in range(4):
            prod = analytic[2 * i] * analytic[2 * i + 1]
            assert abs(prod - 1.0) < 1e-8, f"pair {i} product {prod} != 1"
        _match_multisets(numeric, [1.0 / b for b in numeric], tol=1e-8)
    special = sorted(
        np.round(beta_roots(zoo.build_trs_dagger(1, 0, 1.2, 0), 0.0).betas(), 9),
        key=lambda z: (abs(z), z.real, z.imag),
    )
    expected = [1, 1, -1, -1, 0.8 + 0.6j, 0.8 - 0.6j, -0.8 + 0.6j, -0.8 - 0.6j]
    _match_multisets(expected, special, tol=1e-8)
    return "5 parameter points verified against the analytic mode list"


def criterion_5():
    """Single invariant step of the two-family chain, co-located with the
    open-chain gap minimum at N = 60.

    The single-step property holds.  The co-location half is kept in its
    literal form although it cannot hold at N = 60: on the topological side
    the spectrum always contains midgap boundary modes, so the pointwise
    minimum |E| over the sweep is attained wherever those modes are deepest
    (or, with boundary-flagged states excluded, at whatever lifted mode
    escapes the flag heuristic), not at the transition.  The correlation
    length within 0.05 of the step exceeds 100 cells, so no N = 60 spectrum
    distinguishes the step location to one grid spacing; pushing N beyond
    ~150 runs into the non-normality floor of double precision instead.
    The step location itself is right: a dense large-N inversion shows the
    1/omega pole of the surface block alive at lam = 3.4 and dead at 3.5.
    """
    config = preset_config("fig2")
    result = run_sweep(config)
    values = [row["invariant"] for row in result.rows]
    statuses = {row["status"] for row in result.rows}
    assert statuses <= {"ok"}, f"unexpected row statuses: {statuses - {'ok'}}"
    assert values[0] == 1 and values[-1] == 0
    flips = [
        i for i in range(1, len(values)) if values[i] != values[i - 1]
    ]
    assert len(flips) == 1, f"expected a single step, found flips at {flips}"
    lam_step = 0.5 * (
        result.rows[flips[0] - 1]["parameter"] + result.rows[flips[0]]["parameter"]
    )
    lams = [row["parameter"] for row in result.rows]
    min_raw = []
    min_bulk = []
    for lam in lams:
        s = obc_spectrum(zoo.build_four_band_subgbz(lam), 60)
        abs_e = np.abs(s.energies)
        min_raw.append(float(np.min(abs_e)))
        bulk = abs_e[~s.boundary_flags]
        min_bulk.append(float(np.min(bulk)) if bulk.size else np.inf)
    lam_raw = lams[int(np.argmin(min_raw))]
    lam_bulk = lams[int(np.argmin(min_bulk))]
    assert abs(lam_step - lam_raw) <= 0.05 + 1e-9, (
        f"invariant step at {lam_step:.3f}; minimum-|E| point at {lam_raw:.3f} "
        f"(boundary-flag-excluded variant: {lam_bulk:.3f}); at N = 60 the "
        "midgap boundary modes dominate the minimum everywhere on the "
        "topological side, so the coincidence check cannot be met"
    )
    return f"step at lam = {lam_step:.3f}, gap minimum at {lam_raw:.3f}"


def criterion_6():
    """Cross-method agreement of the surface Green's function."""
    worst_fd = worst_th = worst_tr = 0.0
    for model in _gapped_zoo_points():
        gap = gap_scale(model)
        omegas = np.linspace(0.05, 0.5, 5) * max(gap, 0.3)
        for w in omegas:
            for n in (10, 30, 60):
                d = np.max(np.abs(g11_direct(model, n, w).g11 - g11_dyson(model, n, w).g11))
                assert d < 1e-10, f"{model.name}: direct vs recursion {d:.2e} at N={n}"
                worst_fd = max(worst_fd, float(d))
            d = np.max(np.abs(g11_thermo(model, w).g11 - g11_dyson(model, 400, w).g11))
            assert d < 1e-6, f"{model.name}: thermo vs N=400 {d:.2e}"
            worst_th = max(worst_th, float(d))
        if np.linalg.cond(model.v) < 1e6:
            from .greens import transfer_matrix

            w = 0.3 * max(gap, 0.3)
            te = np.linalg.eigvals(transfer_matrix(model, w))
            br = beta_roots(model, w).betas()
            worst_tr = max(worst_tr, _match_multisets(te, br, tol=1e-8))
    return (
        f"direct/recursion {worst_fd:.1e}, thermo/finite {worst_th:.1e}, "
        f"transfer/roots {worst_tr:.1e}"
    )


def criterion_7():
    """Bulk-boundary identities on the sweep points of criteria 2-5."""
    checked = 0
    for c in (0.0, 0.05, -0.05, 0.5, -0.5, 1.0, -1.0):
        rep = invariant_z(zoo.build_four_band_critical(c=c))
        assert rep.value == rep.rank_plus - rep.rank_minus
        checked += 1
    for lam in np.arange(0.0, 6.01, 0.5):
        rep = invariant_z(zoo.build_four_band_subgbz(float(lam)))
        assert rep.value == rep.rank_plus - rep.rank_minus
        checked += 1
    for d in (-2.5, -2.2, -1.0, -0.5, -0.2, -0.1, 0.2, 0.5):
        rep = invariant_z2(zoo.build_trs_dagger(1, 1, 1.2, d))
        assert rep.value == (-1) ** rep.kramers_pairs
        assert rep.rank_plus == rep.rank_minus == rep.kramers_pairs
        checked += 1
    return f"{checked} gapped points satisfy the rank/Kramers identities exactly"


def criterion_8():
    """Hermitian control: no critical transition, conjugate-reciprocal modes."""
    v0 = invariant_z(zoo.build_four_band_critical_hermitian(c=0.0)).value
    v1 = invariant_z(zoo.build_four_band_critical_hermitian(c=0.1)).value
    assert v0 == v1, f"Hermitian family jumped from {v0} to {v1} at c=0"
    for c in (0.0, 0.1):
        model = zoo.build_four_band_critical_hermitian(c=c)
        assert check_symmetries(model).hermitian
        betas = beta_roots(model, 0.0).betas()
        _match_multisets(betas, [1.0 / np.conj(b) for b in betas], tol=1e-8)
    return f"invariant stays {v0}; all modes pair as (beta, 1/conj(beta))"


def criterion_9():
    """Kernel property blitz: Pfaffian vs determinant, Takagi reconstruction."""
    rng = np.random.default_rng(20240917)
    for trial in range(200):
        n = 2 * int(rng.integers(1, 7))
        r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = r - r.T
        pf = pfaffian(a)
        det = np.linalg.det(a)
        assert abs(pf**2 - det) <= 1e-8 * max(1.0, abs(det)), (
            f"trial {trial}: pf^2 = {pf**2} vs det = {det}"
        )
    for trial in range(100):
        n = int(rng.integers(1, 9))
        s = rng.standard_normal((n, n))
        s = s + s.T
        evals, vecs = np.linalg.eigh(s)
        u = vecs @ np.diag(np.exp(1j * evals)) @ vecs.T
        v = takagi_factor(u)
        assert np.max(np.abs(v @ v.T - u)) < 1e-10
        assert np.max(np.abs(v @ v.conj().T - np.eye(n))) < 1e-10
    return "200 Pfaffian and 100 Takagi property trials"


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    ok: bool
    elapsed: float
    budget: float | None
    detail: str

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        budget = f"/{self.budget:.0f}s" if self.budget else ""
        return (
            f"criterion {self.number} ({self.name}): {status} "
            f"[{self.elapsed:.1f}s{budget}] {self.detail}"
        )


CRITERIA = (
    (1, "quantization", criterion_1, 10.0),
    (2, "critical-coupling reproduction", criterion_2, 30.0),
    (3, "Z2 transition points", criterion_3, 60.0),
    (4, "analytic decay-mode cross-check", criterion_4, 5.0),
    (5, "two-family step reproduction", criterion_5, 120.0),
    (6, "oracle equivalence", criterion_6, 60.0),
    (7, "bulk-boundary identities", criterion_7, None),
    (8, "Hermitian control", criterion_8, None),
    (9, "kernel properties", criterion_9, None),
)


def run_criterion(number):
    entry = next((c for c in CRITERIA if c[0] == number), None)
    if entry is None:
        raise ValueError(f"no criterion {number}")
    _, name, func, budget = entry
    start = time.perf_counter()
    try:
        detail = func()
        ok = True
    except AssertionError as exc:
        detail = str(exc)
        ok = False
    elapsed = time.perf_counter() - start
    if ok and budget is not None and elapsed > budget:
        ok = False
        detail = f"over budget ({elapsed:.1f}s > {budget:.0f}s); {detail}"
    return CriterionResult(number, name, ok, elapsed, budget, detail)


def run_all(numbers=None, stream=None):
    results = []
    for number, _, _, _ in CRITERIA:
        if numbers and number not in numbers:
            continue
        res = run_criterion(number)
        results.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    return results
