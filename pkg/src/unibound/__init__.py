"""Lower and upper moment bounds for monotone, unimodal and discrete distributions,
with an exact moment oracle to check them against."""

from .bounds import (
    BoundKind,
    BoundResult,
    Source,
    central_even_lb_unimodal,
    discrete_central_lb,
    lattice_variance_lb,
    raw_moment_lb_monotone,
    raw_moment_lb_unimodal,
    tangent_raw_lb,
    two_point_raw_lb,
    variance_lb_monotone,
    variance_lb_unimodal,
    variance_ub_jacobson,
)
from .distributions import (
    DiscretePMF,
    from_json,
    load,
    mean,
    to_json,
    PiecewiseConstantDensity,
    Shape,
    ShapeClass,
    central_moment,
    classify_shape,
    raw_moment,
)
from .errors import (
    ConsistencyError,
    ConstraintInfeasibleError,
    DegenerateWitnessError,
    InputError,
    LemmaViolationError,
    PreconditionError,
    UniboundError,
    UnsupportedRegimeError,
)
from .verify import TrialConfig, audit, compare, run_suite
from .witness import (
    MomentPolynomial,
    QuadraticWitness,
    build_moment_polynomial,
    solve_witness_constraint,
    witness_monotone,
    witness_unimodal,
)

from . import bounds, distributions, verify, witness

__version__ = "0.1.0"
