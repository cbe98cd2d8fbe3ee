"""Exact Jacobian-ring, Koszul and infinitesimal Torelli computations for
projective hypersurfaces with simple (ADE) singularities."""

__version__ = "0.1.0"

from .errors import (
    AdeTorelliError,
    BudgetExceeded,
    ConsistencyError,
    DomainError,
    DualityViolation,
    IncompleteSingularLocusError,
    InputError,
    LemmaViolation,
    NonVersalError,
    UnsupportedParity,
)
from .instance import instance_from_dict, instance_to_dict, parse_instance
from .jacobian import (
    HypersurfaceInstance,
    completeness_certificate,
    duality_report,
    evaluation_map,
    h1_ideal,
    hilbert_table,
    hodge_graded,
    ideal_piece_I,
    ivhs_differential,
    jacobian_piece,
    p_value,
    quotient_dims,
    stratum_codim,
    torelli_report,
)
from .koszul import KoszulSetup, build_koszul, koszul_cohomology, verify_le33
from .local import classify_ade, milnor_number, tjurina_number, verify_singular
from .matrix import ExactMatrix
from .poly import HomogeneousPoly, monomial_basis, partial
