"""Two-parameter deformed logarithm and its inverse.

    gen_log(x) = (x**k1 - x**k2) / (k1 - k2)

satisfies gen_log(1) = 0 and gen_log'(1) = 1, and tends to ln x as both
parameters go to zero.  The inverse (the generalized exponential) has no
closed form for general parameters and is computed numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import _roots
from .core import Distribution
from .errors import DomainError, NondegenerateParamError

__all__ = [
    "KappaPair",
    "CoefficientLimitReport",
    "gen_log",
    "gen_log_general",
    "gen_log_prime",
    "gen_exp",
    "check_coefficient_limit",
    "symmetric_kappa_path",
    "deformed_entropy_from_log",
]

CoefficientA = Callable[[float, float], float]

INVERSION_RTOL = 1e-12
TARGET_RTOL = 1e-14


@dataclass(frozen=True)
class KappaPair:
    kappa1: float
    kappa2: float

    def __post_init__(self):
        object.__setattr__(self, "kappa1", float(self.kappa1))
        object.__setattr__(self, "kappa2", float(self.kappa2))

    @property
    def spread(self) -> float:
        return self.kappa1 - self.kappa2

    @classmethod
    def from_alpha_beta(cls, alpha: float, beta: float) -> "KappaPair":
        return cls(alpha - 1.0, beta - 1.0)


def _require_distinct(kp: KappaPair) -> float:
    d = kp.spread
    if d == 0.0:
        raise NondegenerateParamError(f"kappa1 != kappa2 required (got {kp.kappa1!r} twice)")
    return d


def _require_positive(x: float) -> None:
    if not x > 0:
        raise DomainError(f"x must be > 0 (got {x!r})")


def _log_core(x: float, kp: KappaPair, d: float) -> float:
    # x**k2 * (x**d - 1) / d; expm1 keeps the small-d limit accurate.  The
    # expression is symmetric in (k1, k2), so factor out whichever power keeps
    # the expm1 argument from blowing up.
    lx = math.log(x)
    if d * lx <= 0:
        return x**kp.kappa2 * math.expm1(d * lx) / d
    return x**kp.kappa1 * math.expm1(-d * lx) / -d


def gen_log(x: float, kp: KappaPair) -> float:
    d = _require_distinct(kp)
    _require_positive(x)
    return _log_core(x, kp, d)


def gen_log_general(x: float, kp: KappaPair, a: CoefficientA) -> float:
    """A(k1, k2) * (x**k1 - x**k2) for an arbitrary coefficient function A."""
    _require_positive(x)
    return a(kp.kappa1, kp.kappa2) * x**kp.kappa2 * math.expm1(kp.spread * math.log(x))


def gen_log_prime(x: float, kp: KappaPair) -> float:
    d = _require_distinct(kp)
    _require_positive(x)
    # (k1 x**(k1-1) - k2 x**(k2-1)) / d rewritten as x**(k2-1) * (k1 (x**d - 1)/d + 1)
    return x ** (kp.kappa2 - 1.0) * (kp.kappa1 * math.expm1(d * math.log(x)) / d + 1.0)


def gen_exp(y: float, kp: KappaPair, x_max: float = 1.0) -> float:
    """Inverse of :func:`gen_log` on (0, x_max].

    The logarithm must be strictly increasing there; this is checked on a
    256-point logarithmic grid before inverting.  Raises RangeError when
    ``y`` is not attained on the interval.
    """
    _require_distinct(kp)
    _require_positive(x_max)
    _roots.check_monotone_on_grid(lambda x: gen_log_prime(x, kp), x_max, +1, "the deformed logarithm")
    return _roots.invert_on_unit_side(
        lambda x: gen_log(x, kp),
        lambda x: gen_log_prime(x, kp),
        y,
        x_max,
        sign=+1,
        tol=TARGET_RTOL * max(1.0, abs(y)),
        accept=INVERSION_RTOL * max(1.0, abs(y)),
    )


@dataclass(frozen=True)
class CoefficientLimitReport:
    path: tuple[tuple[float, float], ...]
    values: tuple[float, ...]
    tol: float
    tail_error: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "path": [list(p) for p in self.path],
            "values": list(self.values),
            "tol": self.tol,
            "tail_error": self.tail_error,
            "passed": self.passed,
        }


def symmetric_kappa_path(deltas: Iterable[float] = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)):
    return [(d, -d) for d in deltas]


def check_coefficient_limit(
    a: CoefficientA,
    path: Sequence[tuple[float, float]] | None = None,
    tol: float = 1e-6,
) -> CoefficientLimitReport:
    """Track A(k1, k2) * (k1 - k2) along a path shrinking to (0, 0).

    The classical-limit condition asks this product to tend to 1; the report
    passes when the last value on the path is within ``tol`` of 1.
    """
    path = tuple((float(k1), float(k2)) for k1, k2 in (path or symmetric_kappa_path()))
    if not path:
        raise DomainError("path must contain at least one point")
    values = tuple(a(k1, k2) * (k1 - k2) for k1, k2 in path)
    tail_error = abs(values[-1] - 1.0)
    return CoefficientLimitReport(path, values, tol, tail_error, tail_error <= tol)


def deformed_entropy_values(probs: Iterable[float], kp: KappaPair) -> float:
    d = _require_distinct(kp)
    return -math.fsum(p * _log_core(p, kp, d) for p in probs if p > 0)


def deformed_entropy_from_log(dist: Distribution, kp: KappaPair) -> float:
    """-sum p_i gen_log(p_i); zero-probability outcomes contribute nothing."""
    return deformed_entropy_values(dist.probs, kp)
