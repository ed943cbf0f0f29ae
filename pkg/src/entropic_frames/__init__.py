"""Numerical laboratory for entropic uncertainty principles on finite weighted Parseval frames.

Computes Shannon and phi-entropies of states against weighted frames,
certifies candidate phi-functions, verifies the Deutsch, Maassen-Uffink /
Ricaud-Torresani, and phi-entropy product bounds with explicit margins, and
searches the unit sphere for entropy-product minimizers to measure how tight
the product bound is and to hunt for counterexamples to its conjectured
strengthening.
"""

from ._validation import AdmissibilityError, DomainError, ValidationError
from .bounds import (
    BatchResult,
    BatchSummary,
    BoundReport,
    ProofChain,
    amgm_sum_bound,
    buzano_check,
    conjectured_product_bound,
    deutsch_lower_bound,
    deutsch_upper_bound,
    is_orthonormal_basis,
    is_unweighted_parseval,
    mu_bound,
    product_bound,
    product_double_sum_identity,
    proof_chain,
    verify_batch,
    verify_pair,
)
from .entropy import phi_entropy, shannon_entropy
from .estimator import EntropyProductMinimizer
from .frames import (
    AdmissibilityReport,
    FrameValidation,
    StateVector,
    WeightedFrame,
    admissibility,
    analysis_coefficients,
    apply_unitary,
    frame_from_dict,
    frame_to_dict,
    load_frame,
    make_orthonormal_basis,
    make_parseval_frame,
    mutual_coherence,
    rotated_basis_2d,
    sample_unit_states,
    save_frame,
    validate_frame,
)
from .phi import PhiCertificate, PhiSpec, certify_phi, phi_eval
from .search import (
    ProbeResult,
    SearchConfig,
    SearchResult,
    SweepResult,
    SweepRow,
    entropy_product_objective,
    interior_angle_grid,
    minimize_entropy_product,
    probe_conjecture,
    sweep_rotation,
    sweep_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "AdmissibilityReport",
    "BatchResult",
    "BatchSummary",
    "BoundReport",
    "DomainError",
    "EntropyProductMinimizer",
    "FrameValidation",
    "PhiCertificate",
    "PhiSpec",
    "ProbeResult",
    "ProofChain",
    "SearchConfig",
    "SearchResult",
    "StateVector",
    "SweepResult",
    "SweepRow",
    "ValidationError",
    "WeightedFrame",
    "admissibility",
    "amgm_sum_bound",
    "analysis_coefficients",
    "apply_unitary",
    "buzano_check",
    "certify_phi",
    "conjectured_product_bound",
    "deutsch_lower_bound",
    "deutsch_upper_bound",
    "entropy_product_objective",
    "frame_from_dict",
    "frame_to_dict",
    "interior_angle_grid",
    "is_orthonormal_basis",
    "is_unweighted_parseval",
    "load_frame",
    "make_orthonormal_basis",
    "make_parseval_frame",
    "minimize_entropy_product",
    "mu_bound",
    "mutual_coherence",
    "phi_entropy",
    "phi_eval",
    "probe_conjecture",
    "product_bound",
    "product_double_sum_identity",
    "proof_chain",
    "rotated_basis_2d",
    "sample_unit_states",
    "save_frame",
    "shannon_entropy",
    "sweep_rotation",
    "sweep_to_csv",
    "validate_frame",
    "verify_batch",
    "verify_pair",
    "__version__",
]
