"""Unitals in finite projective planes: search, groups, classification.

The package splits along the workflow: ``design`` holds the incidence
structures and the unital predicate, ``geometry`` builds the desarguesian
planes and Hermitian point sets over fixed small fields, ``autgroup``
computes automorphism groups (partition refinement plus Schreier-Sims),
``search`` runs the orbit-union backtracking campaigns, ``isomorph``
classifies results by canonical certificate, ``report`` speaks the classic
text listing format and a JSON schema, and ``cli`` wires it all together.
"""

from .autgroup import (
    ColoredGraph,
    OrbitPartition,
    PermGroup,
    automorphism_group,
    blocks_to_graph,
    canonical_labeling,
    graph_certificate,
    plane_automorphism_group,
    plane_to_graph,
    point_orbits,
    refine,
    schreier_sims,
    setwise_stabilizer,
)
from .design import (
    DesignParams,
    InducedDesign,
    ProjectivePlane,
    Unital,
    ValidationReport,
    Violation,
    induced_design,
    intersection_profile,
    is_unital,
    pair_coverage_exhaustive,
    tangent_secant_counts,
    unital_size,
    validate_plane,
)
from .errors import (
    BaseLabelError,
    ContractViolationError,
    FormatError,
    MalformedInputError,
    ParameterError,
    PlaneValidationError,
    UnitalsError,
)
from .geometry import (
    SUPPORTED_SIZES,
    FiniteField,
    classical_collineation_generators,
    desarguesian_plane,
    hermitian_unital,
    make_field,
    pgammal_order,
)
from .isomorph import are_isomorphic, canonical_certificate, unital_aut_group
from .kernels import backend_name
from .report import (
    CampaignResult,
    UnitalRecord,
    emit_plane,
    emit_report,
    load_results,
    parse_plane,
    parse_report_json,
    store_results,
)
from .search import (
    OrbitFamily,
    SearchConfig,
    exhaustive_search,
    orbit_union_search,
    run_campaign,
    subgroup_orbit_families,
)

__version__ = "1.0.0"

__all__ = [
    "BaseLabelError",
    "CampaignResult",
    "ColoredGraph",
    "ContractViolationError",
    "DesignParams",
    "FiniteField",
    "FormatError",
    "InducedDesign",
    "MalformedInputError",
    "OrbitFamily",
    "OrbitPartition",
    "ParameterError",
    "PermGroup",
    "PlaneValidationError",
    "ProjectivePlane",
    "SUPPORTED_SIZES",
    "SearchConfig",
    "Unital",
    "UnitalRecord",
    "UnitalsError",
    "ValidationReport",
    "Violation",
    "are_isomorphic",
    "automorphism_group",
    "backend_name",
    "blocks_to_graph",
    "canonical_certificate",
    "canonical_labeling",
    "classical_collineation_generators",
    "desarguesian_plane",
    "emit_plane",
    "emit_report",
    "exhaustive_search",
    "graph_certificate",
    "hermitian_unital",
    "induced_design",
    "intersection_profile",
    "is_unital",
    "load_results",
    "make_field",
    "orbit_union_search",
    "pair_coverage_exhaustive",
    "parse_plane",
    "parse_report_json",
    "pgammal_order",
    "plane_automorphism_group",
    "plane_to_graph",
    "point_orbits",
    "refine",
    "run_campaign",
    "schreier_sims",
    "setwise_stabilizer",
    "store_results",
    "subgroup_orbit_families",
    "tangent_secant_counts",
    "unital_aut_group",
    "unital_size",
    "validate_plane",
]
