"""Planar convex geometry for origin-symmetric bodies: polarity, ellipse fits,
Steiner symmetrization, sector polars, and experiments verifying the
volume-sum strengthening |K| + |K*| <= 2*pi of the Blaschke-Santalo bound."""

from .bodies import (
    HighDimVolumes,
    LpBallSpec,
    highdim_counterexample,
    lp_ball_area,
    lp_ball_polygon,
    random_symmetric_polygon,
    regular_polygon,
)
from .cones import (
    ConeBody,
    CutChord,
    SectorFrame,
    area_sum,
    circular_sector_body,
    deltoid,
    ellipse_sector_body,
    extremal_sector_value,
    minimal_cut_line,
    orthogonalize,
    random_cone_body,
    relative_polar,
    truncated_deltoid,
)
from .ellipses import (
    CenteredEllipse,
    JohnCertificate,
    ellipse_polygon,
    john_ellipse,
    lowner_ellipse,
    normalize,
    unit_disk_polygon,
)
from .errors import (
    AlreadyOrthogonal,
    DegenerateBody,
    DomainError,
    GeometryError,
    HypothesisViolated,
    NoConvergence,
    NumericallySingularEdge,
    ParallelSupportLines,
    PointNotInterior,
    SingularMatrix,
)
from .experiments import ExperimentReport, derive_passed
from .polygons import (
    LineNotThroughOrigin,
    SymmetricPolygon,
    area,
    clip_halfplane,
    contains_points,
    convex_hull,
    hausdorff_distance,
    intersect_convex,
    linear_image,
    line_intersection,
    load_polygon,
    make_symmetric_polygon,
    polar_dual,
    polar_dual_vertices,
    save_polygon,
    symmetric_difference_area,
)
from .search import (
    SearchResult,
    VariationMove,
    apply_variation,
    conic_fit_residual,
    equilibrium_residuals,
    local_search,
    proper_vertex_chain,
)
from .steiner import AxisLine, reflect, steiner_symmetral

__version__ = "0.1.0"
