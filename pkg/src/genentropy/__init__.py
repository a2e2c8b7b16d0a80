"""Two-parameter generalized entropies: evaluation, axiom checks, counterexamples and maxent."""

__version__ = "0.1.0"

from .core import (
    REGION_GRID,
    Distribution,
    JointDistribution,
    Normalizer,
    ParamPair,
    canonical_normalizer,
    entropy,
    region_contains,
    shannon_entropy,
    summand,
)
from .counterexamples import (
    WeierstrassParams,
    directional_limit_scan,
    entropy_limit_failure_demo,
    normalizer_a,
    normalizer_b,
    weierstrass,
)
from .deformed_log import (
    KappaPair,
    check_coefficient_limit,
    deformed_entropy_from_log,
    gen_exp,
    gen_log,
    gen_log_general,
    gen_log_prime,
)
from .errors import (
    DegenerateDirectionError,
    DomainError,
    GenEntropyError,
    MonotonicityError,
    NoConvergenceError,
    NondegenerateParamError,
    RangeError,
    RegionError,
)
from .maxent import MaxentProblem, solve_canonical, stationarity_inverse, verify_maximum
from .verifier import (
    CheckReport,
    LimitPath,
    axiom_suite,
    check_continuity_probe,
    check_expandability,
    check_maximality,
    check_normalizer_properties,
    check_shannon_additivity,
    check_shannon_limit,
)
