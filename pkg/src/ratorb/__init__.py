"""ratorb: orbifold calculus for rational maps on the projective line.

Exact rational-function arithmetic over Q(sqrt d), certified-enough numerics
(roots, critical data, fiber tracking), the orbifold covering calculus,
generalized Lattes detection, fiber-product genus tables, compositional
left-factor tests, and exact arithmetic orbit scans.
"""

from .errors import (
    BadOrbifoldError,
    BudgetError,
    CapacityError,
    FieldMismatchError,
    InvalidTransformError,
    NonRationalCoveringError,
    ParseError,
    PrecisionError,
    PreconditionError,
    RatorbError,
    TrackingError,
    UnsupportedSignatureError,
)
from .scalar import Scalar
from .poly import Poly
from .ratfunc import (
    INF,
    Mobius,
    ProjPoint,
    RatFunc,
    chebyshev,
    compose,
    conjugate,
    dfunc,
    evaluate,
    iterate,
    power,
)
from .parse import format_ratfunc, parse, parse_point
from .points import AlgebraicPoint, ComplexApprox
from .numeric import CriticalDatum, critical_data, roots, track
from .orbifold import (
    MapKind,
    Orbifold,
    canonical_orbifolds,
    classify_map,
    preceq,
    pullback,
)
from .lattes import (
    LattesReport,
    SpecialClass,
    classify_special,
    detect_generalized_lattes,
    maximal_orbifold_consistency,
)
from .fibercurve import (
    CurveComponent,
    FiberDecomposition,
    MonodromyData,
    check_good_solution,
    fiber_components,
    genus_sequence,
    monodromy,
    theorem_m2_check,
)
from .decomp import (
    BoundedGenusVerdict,
    LeftFactorWitness,
    ThetaCovering,
    bounded_genus_criterion,
    left_factor,
    theta_for,
    verify_semiconjugacy,
)
from .orbits import (
    OrbitReport,
    PreimageQuery,
    ProgressionFit,
    orbit_scan,
    progression_fit,
    rational_preimages,
)

__version__ = "0.1.0"
