"""Canonical heights on quadratic twists of elliptic curves over Q.

Core layers: exact arithmetic (exactmath), curve models and exact point
arithmetic (curve), local height machinery (localheights), explicit bounds
and primitivity certificates (bounds), and twist-family construction
(families).  A FastAPI service wraps the core; the CLI is a thin client.
"""

from .bounds import (
    FamilyUpperBound,
    LowerBoundReport,
    PrimitivityCertificate,
    ThresholdScanReport,
    bound_ratio,
    family_upper_bound,
    find_half_points,
    lower_bound,
    primitivity_check,
    threshold_scan,
)
from .curve import (
    CurvePoint,
    DivisionPolyValues,
    WeierstrassModel,
    add,
    discriminant_identity_check,
    division_poly_values,
    double,
    make_model,
    make_short_model,
    multiply,
    naive_height,
    negate,
    on_curve,
    shift_model,
    twist,
)
from .errors import (
    CurveError,
    HypothesisError,
    PointError,
    PrecisionError,
    TwistHeightsError,
)
from .exactmath import (
    DEFAULT_PRECISION,
    DEFAULT_TRIAL_BOUND,
    IntPolynomial,
    SquareFreeVerdict,
    agm,
    context,
    factorize,
    poly_discriminant,
    poly_resultant,
    square_free_test,
    valuation,
)
from .families import (
    FamilyInstance,
    ScanRecord,
    TwistFamily,
    construct_family,
    cubic_seed_family,
    instantiate,
    reference_family,
    scan,
)
from .localheights import (
    BreakdownEntry,
    LocalHeightBreakdown,
    NaiveLimitEstimate,
    PeriodData,
    arch_local_height_tate,
    arch_local_height_theta,
    canonical_height,
    height_difference_bound,
    naive_limit_estimate,
    nonarch_local_height,
    omega_for_twist,
    periods,
)

__version__ = "0.1.0"
