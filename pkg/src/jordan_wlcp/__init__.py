"""Weighted horizontal linear complementarity over Euclidean Jordan algebras."""

from .algebra import (
    Algebra,
    AlgebraDescriptor,
    ConeClass,
    Element,
    SpectralDecomposition,
    build_algebra,
    cone_membership,
    inner_product,
    jordan_product,
    lyapunov_operator,
    min_eigenvalue,
    norm,
    operator_commute,
    product,
    rn,
    spectral_decompose,
    spectral_map,
    spin,
    sym,
)
from .errors import (
    CapacityError,
    DegeneratePairError,
    DomainError,
    GenerationFailure,
    InvalidInputError,
    JordanWLCPError,
    NumericFailure,
    ParseError,
    ValidationError,
)
from .io import generate_instance, parse_instance, report_to_dict, serialize_instance
from .maps import ResidualTriple, fb_map, min_map, residuals, weighted_fb_map
from .operators import (
    LinearOperator,
    PairProblem,
    apply,
    lcp_embedding,
    lyapunov_transform,
    stein_transform,
)
from .pairs import (
    DegreeReport,
    R0Result,
    SupportPattern,
    brute_force_hlcp,
    hlcp_degree,
    is_p_matrix,
    is_p_pair,
    is_positive_stable,
    is_r0_pair,
    verify_r_pair_witness,
)
from .solver import (
    PathTrace,
    SolveReport,
    SolverConfig,
    assemble_jacobian,
    geometric_schedule,
    path_trace,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraDescriptor",
    "CapacityError",
    "ConeClass",
    "DegeneratePairError",
    "DegreeReport",
    "DomainError",
    "Element",
    "GenerationFailure",
    "InvalidInputError",
    "JordanWLCPError",
    "LinearOperator",
    "NumericFailure",
    "PairProblem",
    "ParseError",
    "PathTrace",
    "R0Result",
    "ResidualTriple",
    "SolveReport",
    "SolverConfig",
    "SpectralDecomposition",
    "SupportPattern",
    "ValidationError",
    "apply",
    "assemble_jacobian",
    "brute_force_hlcp",
    "build_algebra",
    "cone_membership",
    "fb_map",
    "generate_instance",
    "geometric_schedule",
    "hlcp_degree",
    "inner_product",
    "is_p_matrix",
    "is_p_pair",
    "is_positive_stable",
    "is_r0_pair",
    "jordan_product",
    "lcp_embedding",
    "lyapunov_operator",
    "lyapunov_transform",
    "min_eigenvalue",
    "min_map",
    "norm",
    "operator_commute",
    "parse_instance",
    "path_trace",
    "product",
    "report_to_dict",
    "residuals",
    "rn",
    "serialize_instance",
    "solve",
    "spectral_decompose",
    "spectral_map",
    "spin",
    "stein_transform",
    "sym",
    "verify_r_pair_witness",
    "weighted_fb_map",
]
