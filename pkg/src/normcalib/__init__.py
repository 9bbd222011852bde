"""normcalib: exact-arithmetic area densities, calibrating 2-forms and
flat-minimality experiments for polyhedral normed spaces.

Core objects: SymPolytope (a polyhedral unit ball), SymPolygon (a plane
section with supports and weights), the BH/HT/weighted densities,
Calibrator construction and verification, TriMesh chains over Z and Z2,
and exact-rational LP searches.  A FastAPI service wraps the pipelines
(normcalib.service.app) and the `normcalib` CLI is a thin client for it.
"""

from .arith import EXACT, FLOAT, ModeMixError, PiTimes
from .calibrate import (
    CalibrationError,
    CalibrationReport,
    Calibrator,
    LPSearchResult,
    MixedAreaCertificate,
    build_calibrator,
    check_area_edge_identity,
    check_polygon_inequality,
    check_support_edge_identity,
    lp_calibrator_search,
    maximize_over_polar,
    mixed_area_certificate,
    reduce_functionals,
    verify_calibrator,
)
from .density import (
    EPSILON_K,
    AlphaDensity,
    BHDensity,
    HTDensity,
    alpha_eval,
    bh_eval,
    enumerate_vertices,
    ht_eval,
    volume_k,
)
from .exterior import (
    Covector,
    DimensionMismatch,
    KForm,
    SimpleTwoVector,
    TwoForm,
    Vec,
    eval_k_form,
    eval_two_form,
    planar_wedge_norm,
    wedge,
)
from .kdim import (
    KInstance,
    MuCoefficients,
    MuSearchReport,
    embed_linf,
    mu_lhs,
    mu_search,
    product_weight_mu,
    revalidate_mu,
)
from .lp import FarkasCertificate, LPResult, solve_feasibility, solve_feasibility_lazy
from .polytope import (
    GeometryError,
    PlaneBasis,
    SymPolygon,
    SymPolytope,
    edge_weights,
    halfplane_intersection,
    minkowski_gap,
    mixed_area,
    polar_polygon,
    polygon_area,
    section,
)
from .rng import SplitMix64
from .surfaces import (
    ExperimentReport,
    PlanarDisc,
    TriMesh,
    alpha_area,
    bh_area,
    boundary,
    pushforward_area,
    semi_ellipticity_experiment,
)

__version__ = "0.1.0"
