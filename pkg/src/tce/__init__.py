"""Translated cone exchange maps on the closed upper half-plane.

Exact continued-fraction arithmetic, the cone-exchange dynamics, closed-form
first-return maps to the middle cone, and their renormalization, with every
closed form cross-checked against a brute-force orbit-iteration oracle.
"""

from .cf import (
    ContinuedFraction,
    SemiIndex,
    error_scaling_check,
    error_shift_combination,
    error_sign,
    error_term,
    gauss_shift,
    phi,
    sqrt2m1,
)
from .cones import (
    Point,
    ScaledMap,
    TceParams,
    cone_index,
    exchange,
    exchange_preimage,
    itinerary,
    make_point,
    orbit,
    parse_angle,
    scale_conjugate,
    step,
    translate,
)
from .errors import (
    AmbiguousBoundary,
    BelowThreshold,
    BudgetExceeded,
    DepthExhausted,
    InvalidIndex,
    NoPeriodicPoint,
    NotInDomain,
)
from .exact import ZLambda
from .regions import Region, golden_x, golden_y, middle_cone, smn_region, u_region
from .renorm import (
    RenormStep,
    detect_period,
    periodic_cascade,
    renorm_tower,
    renormalize,
    verify_conjugacy,
)
from .returns import (
    BaselineOrbit,
    BaselineState,
    baseline_orbit,
    closed_return_map,
    closed_return_time,
    first_return,
    first_return_2d,
    get_baseline,
    locate,
    locate_exchanged,
    lower_bound_check,
    orbit_csv,
    returns_csv,
    sample_atom_preimage,
    threshold_index,
    two_sided_bound_check,
)

__version__ = "0.1.0"
