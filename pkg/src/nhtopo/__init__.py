"""Bulk topological invariants of 1D non-Hermitian tight-binding chains via
the reflection matrix of a single fictitious lead, without generalized-
Brillouin-zone constructions."""

from .backend import BACKEND
from .betasolver import (
    BetaRoot,
    BetaRootSet,
    beta_roots,
    detect_blocks,
    nullvector_linearity_check,
    select_dominant,
)
from .errors import (
    BudgetExceededError,
    GaplessOrCriticalError,
    NhtopoError,
    NonConvergentError,
    NotQuantizedError,
    SingularMatrixError,
    SymmetryViolationError,
)
from .greens import (
    GreensBlock,
    ResidueMatrix,
    g11_direct,
    g11_dyson,
    g11_semi_infinite,
    g11_thermo,
    g11_transfer_power,
    gap_scale,
    residue_a,
    transfer_matrix,
)
from .invariants import (
    InvariantReport,
    ReflectionMatrix,
    bbc_rank_check,
    invariant_z,
    invariant_z2,
    kramers_pairs_count,
    reflection_at_zero,
    reflection_matrix,
)
from .linalg import pfaffian, poly_roots, rank_tol, takagi_factor
from .model import (
    BoundaryCondition,
    LatticeModel,
    SymmetrySet,
    check_symmetries,
    direct_sum,
    h_beta,
    load_model,
    model_from_dict,
    model_to_dict,
    pbc_min_gap,
    real_space_hamiltonian,
    save_model,
)
from .spectra import (
    BetaSpectrumSample,
    SpectrumSample,
    beta_spectrum,
    locate_transition,
    obc_spectrum,
)
from .zoo import (
    ZOO,
    build,
    build_four_band_critical,
    build_four_band_critical_hermitian,
    build_four_band_subgbz,
    build_trs_dagger,
    build_two_band,
    build_two_band_hermitian,
    trs_dagger_analytic_betas,
)

__version__ = "0.1.0"
