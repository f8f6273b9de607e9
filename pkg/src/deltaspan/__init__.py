"""deltaspan: geometric t-spanner construction and verification.

Builds sparse graphs on planar point sets whose shortest-path metric
approximates the Euclidean metric within a chosen stretch factor t, using a
cone-pruned greedy construction plus several classic baselines, and verifies
the results exactly.
"""

from .geometry import (
    Point,
    PointSet,
    Cone,
    ConeCollection,
    distance,
    direction,
    cone_half_angle,
    cone_contains,
    collection_covers,
)
from .graph import (
    SpannerGraph,
    BoundedQueryResult,
    bounded_astar,
    bounded_dijkstra,
    full_dijkstra,
    euclidean_mst_weight,
)
from .construct import (
    delta_greedy,
    path_greedy,
    theta_graph,
    greedy_on_theta,
    gap_greedy,
    DeltaGreedyParams,
)
from .analysis import (
    DilationReport,
    RunReport,
    measure_dilation,
    certify_spanner,
    graphs_equal,
    compute_report,
)
from .pointgen import generate_points

__version__ = "0.1.0"

__all__ = [
    "Point",
    "PointSet",
    "Cone",
    "ConeCollection",
    "distance",
    "direction",
    "cone_half_angle",
    "cone_contains",
    "collection_covers",
    "SpannerGraph",
    "BoundedQueryResult",
    "bounded_astar",
    "bounded_dijkstra",
    "full_dijkstra",
    "euclidean_mst_weight",
    "delta_greedy",
    "path_greedy",
    "theta_graph",
    "greedy_on_theta",
    "gap_greedy",
    "DeltaGreedyParams",
    "DilationReport",
    "RunReport",
    "measure_dilation",
    "certify_spanner",
    "graphs_equal",
    "compute_report",
    "generate_points",
    "__version__",
]
