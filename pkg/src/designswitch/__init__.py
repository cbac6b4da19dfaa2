"""Switching sets for 2-designs, Bush-type Hadamard matrices and orbit matrices."""

from .bush_search import search_bush_type
from .canon import CanonResult, ColoredGraph, canonical_form
from .classify import ClassificationReport, DesignRecord, bush_closure, classify
from .design import (
    DesignParams,
    IncidenceStructure,
    IntersectionProfile,
    derived_design,
    dual,
    format_incidence,
    intersection_profile,
    parse_incidence,
    parse_incidences,
    validate_2design,
)
from .errors import *  # noqa: F401,F403
from .gflinear import p_rank, rank_distribution
from .hadamard import (
    SignMatrix,
    block_negacyclic_matrix,
    diagonal_switching_sets,
    format_sign_matrix,
    hadamard_to_menon,
    is_block_negacyclic,
    is_bush_type,
    is_hadamard,
    is_regular,
    menon_to_hadamard,
    normalize_row_sum,
    parse_sign_matrix,
)
from .isomorphism import (
    Certificate,
    are_isomorphic,
    aut_group_order,
    design_certificate,
    hadamard_certificate,
    is_self_dual,
)
from .orbit import (
    OrbitMatrix,
    OrbitReport,
    load_builtin,
    orbit_matrices_equivalent,
    orbit_switching,
    orbit_switching_candidates,
    parse_orbit_matrix,
    validate_orbit_matrix,
)
from .switching import (
    Grouped,
    SwitchingSet,
    analyze_block_set,
    apply_switching,
    enumerate_switching_sets,
    switching_closure,
    trade_subdesign,
)

__version__ = "0.1.0"
