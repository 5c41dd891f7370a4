"""Free splittings and residual-finiteness certificates for Artin groups.

The library takes a labelled defining graph, orients its edges, builds the
level graphs of the associated presentation complex, and extracts from them
a splitting of the group over finite-rank free subgroups.  Fiber products
of the resulting immersions drive the residual-finiteness certifier.
"""

from .multigraph import (
    ColoredGraph,
    DisconnectedError,
    Edge,
    GraphMap,
    StructureError,
    Walk,
    blocks,
    bouquet,
    connected_components,
    core,
    free_rank,
    is_degree_n_cover,
    is_immersion,
)
from .defining_graph import (
    DefiningEdge,
    DefiningGraph,
    InvalidDefiningGraph,
    OrientationReport,
    SchemaError,
    enumerate_cycles,
    require_valid,
    validate,
)
from .orientation import (
    AdmissibilityVerdict,
    DoubleCoverGraph,
    SearchSpaceError,
    WitnessCycle,
    check_witness,
    double_cover,
    find_admissible_orientation,
    has_collapsed_cycle,
    is_admissible,
    oracle_almost_misdirected,
)
from .horizontal import (
    CollapsedQuarter,
    HorizontalFamily,
    InadmissibleOrientation,
    Segment,
    SplittingCertificate,
    build_collapsed,
    build_family,
    compute_splitting,
    deck_involution_on_quarter,
)
from .fiber import (
    FiberInputError,
    FiberProduct,
    MonochromeVerdict,
    OppressiveSet,
    OppressiveWord,
    TraceResult,
    fiber_product,
    fill_rank_check,
    monochrome_check,
    oppressive_set,
    traces_word,
)
from .certify import RFCertificate, certify

__all__ = [
    "AdmissibilityVerdict",
    "CollapsedQuarter",
    "ColoredGraph",
    "DefiningEdge",
    "DefiningGraph",
    "DisconnectedError",
    "DoubleCoverGraph",
    "Edge",
    "FiberInputError",
    "FiberProduct",
    "GraphMap",
    "HorizontalFamily",
    "InadmissibleOrientation",
    "InvalidDefiningGraph",
    "MonochromeVerdict",
    "OppressiveSet",
    "OppressiveWord",
    "OrientationReport",
    "RFCertificate",
    "SchemaError",
    "SearchSpaceError",
    "Segment",
    "SplittingCertificate",
    "StructureError",
    "TraceResult",
    "Walk",
    "WitnessCycle",
    "blocks",
    "bouquet",
    "build_collapsed",
    "build_family",
    "certify",
    "check_witness",
    "compute_splitting",
    "connected_components",
    "core",
    "deck_involution_on_quarter",
    "double_cover",
    "enumerate_cycles",
    "fiber_product",
    "fill_rank_check",
    "find_admissible_orientation",
    "free_rank",
    "has_collapsed_cycle",
    "is_admissible",
    "is_degree_n_cover",
    "is_immersion",
    "monochrome_check",
    "oppressive_set",
    "oracle_almost_misdirected",
    "require_valid",
    "traces_word",
    "validate",
]
