"""Skein invariants and adequacy analysis for link diagrams on surfaces."""

from .diagram import Diagram, DiagramError, Face, HomologyContext, Region, load_sld, parse_sld
from .states import (
    DEFAULT_CUBE_SCAN_LIMIT,
    DEFAULT_STATE_SUM_LIMIT,
    EnumerationLimitError,
    Loop,
    ResolvedState,
    adjacent_states,
    all_states,
    alternating_state,
    alternating_states,
    find_single_cycle_bifurcation,
    has_single_cycle_bifurcation,
    is_alternating_state,
    loop_count,
    resolve,
    transition_type,
)
from .invariants import (
    DELTA,
    BracketValue,
    EmptyBracketError,
    SpanBounds,
    bracket,
    degree_stats,
    homological_bracket,
    jones,
    reduced_homotopy_bracket,
    span_bounds,
)

__version__ = "0.1.0"

from .adequacy import (
    AdequacyReport,
    CuttingDisk,
    PreconditionError,
    UnsupportedEmbeddingError,
    WeaklyAlternatingCertificate,
    adequacy,
    cutting_disks,
    is_reduced,
    is_strongly_prime,
    nugatory_crossings,
    weakly_alternating_certificate,
)
from .constructions import (
    CutPoint,
    InvalidSiteError,
    OrientationMismatchError,
    RetryExhaustedError,
    add_kink,
    connected_sum,
    cut_point,
    mirror,
    parallel,
    random_alternating,
    random_diagram,
    reduce_kinks,
    reidemeister2,
    reidemeister2_inverse,
    reidemeister3,
    smooth_crossing,
)

__all__ = [
    "Diagram",
    "DiagramError",
    "Face",
    "HomologyContext",
    "Region",
    "load_sld",
    "parse_sld",
    "DEFAULT_CUBE_SCAN_LIMIT",
    "DEFAULT_STATE_SUM_LIMIT",
    "EnumerationLimitError",
    "Loop",
    "ResolvedState",
    "adjacent_states",
    "all_states",
    "alternating_state",
    "alternating_states",
    "find_single_cycle_bifurcation",
    "has_single_cycle_bifurcation",
    "is_alternating_state",
    "loop_count",
    "resolve",
    "transition_type",
    "DELTA",
    "BracketValue",
    "EmptyBracketError",
    "SpanBounds",
    "bracket",
    "degree_stats",
    "homological_bracket",
    "jones",
    "reduced_homotopy_bracket",
    "span_bounds",
    "AdequacyReport",
    "CuttingDisk",
    "PreconditionError",
    "UnsupportedEmbeddingError",
    "WeaklyAlternatingCertificate",
    "adequacy",
    "cutting_disks",
    "is_reduced",
    "is_strongly_prime",
    "nugatory_crossings",
    "weakly_alternating_certificate",
    "CutPoint",
    "InvalidSiteError",
    "OrientationMismatchError",
    "RetryExhaustedError",
    "add_kink",
    "connected_sum",
    "cut_point",
    "mirror",
    "parallel",
    "random_alternating",
    "random_diagram",
    "reduce_kinks",
    "reidemeister2",
    "reidemeister2_inverse",
    "reidemeister3",
    "smooth_crossing",
    "__version__",
]
