"""Spectral entanglement criteria for bipartite quantum states.

The reduction criterion (``rho_A ⊗ I >= rho_AB``) implies the majorization
criterion (``lambda(rho_AB) ≺ lambda(rho_A)``). This package checks both,
builds an explicit doubly substochastic witness for the implication, and
reports the resulting distillability certificate.
"""

from importlib.resources import files

from .criteria import (
    CriterionReport,
    Theorem1Witness,
    VerificationReport,
    build_theorem1_witness,
    check_majorization_criterion,
    check_reduction,
    distillability_verdict,
    douglas_contraction,
    spectra,
    verify_witness,
)
from .errors import (
    EntSpectraError,
    InvalidInputError,
    NumericalError,
    ReductionViolatedError,
    WitnessInvalidError,
)
from .linalg import (
    HermitianEigen,
    hermitian_eigen,
    is_psd,
    kron,
    min_eigenvalue,
    operator_norm,
    psd_inv_sqrt,
    psd_sqrt,
)
from .majorization import (
    MajorizationVerdict,
    SpectrumVector,
    is_doubly_stochastic,
    is_doubly_substochastic,
    majorizes,
    pad_spectrum,
    weakly_submajorizes,
)
from .states import (
    BipartiteState,
    bell_state,
    embed_support,
    isotropic_state,
    maximally_correlated_state,
    mems_rank2_state,
    partial_trace_a,
    partial_trace_b,
    product_state,
    pure_state,
    random_density_matrix,
    random_separable_state,
    random_unitary,
    restrict_to_support,
    swap_subsystems,
)

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a bundled example state file, e.g. ``fixture_path("bell.json")``."""
    return files(__name__) / "fixtures" / name
