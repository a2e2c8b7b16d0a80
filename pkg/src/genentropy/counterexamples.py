"""The two pathological normalizers and the scanners that expose them.

``normalizer_a`` is built from the Weierstrass function, so it is continuous
but nowhere differentiable in alpha.  ``normalizer_b`` is smooth away from
(1, 1) but C / (alpha - beta) has a different limit along every direction
through (1, 1).

Directions through (1, 1) are written alpha = 1 + r, beta = 1 + m * r.  Only
m <= 0 stays inside the parameter region; for m > 0 the normalizer itself is
still defined and is evaluated off-region, which the scan records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .core import Distribution, Normalizer, ParamPair, entropy, region_contains, shannon_entropy
from .errors import DegenerateDirectionError, DomainError

__all__ = [
    "WeierstrassParams",
    "weierstrass",
    "weierstrass_terms",
    "normalizer_a",
    "normalizer_b",
    "anisotropy_bracket",
    "DirectionalScan",
    "directional_limit_scan",
    "predicted_limit_b",
    "EntropyLimitDemo",
    "entropy_limit_failure_demo",
    "difference_quotients",
    "DEFAULT_RADII",
]

WEIERSTRASS_THRESHOLD = 1.0 + 3.0 * math.pi / 2.0
DEFAULT_RADII = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class WeierstrassParams:
    a: float = 0.9
    b: int = 7
    truncation_tol: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise DomainError(f"Weierstrass a must lie in (0, 1) (got {self.a!r})")
        if int(self.b) != self.b or self.b < 1 or self.b % 2 == 0:
            raise DomainError(f"Weierstrass b must be a positive odd integer (got {self.b!r})")
        object.__setattr__(self, "b", int(self.b))
        if not self.a * self.b > WEIERSTRASS_THRESHOLD:
            raise DomainError(
                f"Weierstrass parameters need a*b > 1 + 3*pi/2 = {WEIERSTRASS_THRESHOLD:.15g} "
                f"(got {self.a * self.b!r})"
            )
        if not self.truncation_tol > 0:
            raise DomainError("truncation_tol must be > 0")

    @property
    def terms(self) -> int:
        """Index K of the last term kept."""
        return weierstrass_terms(self.a, self.truncation_tol)

    @property
    def tail_bound(self) -> float:
        return self.a ** (self.terms + 1) / (1.0 - self.a)


@lru_cache(maxsize=64)
def weierstrass_terms(a: float, tol: float) -> int:
    # Smallest K with a**(K+1)/(1-a) <= tol/2; the other half of tol absorbs rounding.
    k = 0
    while a ** (k + 1) / (1.0 - a) > 0.5 * tol:
        k += 1
    return k


def weierstrass(x: float, wp: WeierstrassParams = WeierstrassParams()) -> float:
    """Partial sum of sum_k a**k cos(b**k pi x), within ``wp.truncation_tol`` of the series.

    The phase b**k * x is reduced modulo 2 in exact integer arithmetic (x is a
    dyadic rational), so high-frequency terms keep their true phase.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite (got {x!r})")
    num, den = x.as_integer_ratio()
    period = 2 * den
    residue = num % period
    terms = []
    for k in range(wp.terms + 1):
        # residue / den == b**k * x  (mod 2), taken in (-1, 1]
        r = residue - period if residue > den else residue
        terms.append(wp.a**k * math.cos(math.pi * (r / den)))
        residue = (residue * wp.b) % period
    return math.fsum(terms)


def normalizer_a(k: float = 1.0, wp: WeierstrassParams = WeierstrassParams()) -> Normalizer:
    """C(alpha, beta) = ((1 - alpha)/k) * (W(alpha - 1) + 2 W(0)) / (3 W(0)).

    Depends on alpha only.  Note that it vanishes on the whole line alpha = 1,
    and C / (alpha - beta) tends to -1/(k (1 - m)) along the direction of slope
    m, so it is -1/k only along beta = 1.
    """
    if not k > 0:
        raise DomainError(f"k must be > 0 (got {k!r})")
    w0 = weierstrass(0.0, wp)

    def c(alpha: float, beta: float) -> float:
        return (1.0 - alpha) / k * (weierstrass(alpha - 1.0, wp) + 2.0 * w0) / (3.0 * w0)

    return Normalizer("counterexample-a", c, k, frozenset({"I", "II", "III'"}))


def anisotropy_bracket(alpha: float, beta: float) -> float:
    """(x y / (x**2 + y**2)) - 1 with x = alpha - 1, y = beta - 1; lies in [-3/2, -1/2]."""
    x, y = alpha - 1.0, beta - 1.0
    # Rescale first so x*x + y*y cannot underflow for tiny offsets.
    s = max(abs(x), abs(y))
    x, y = x / s, y / s
    return x * y / (x * x + y * y) - 1.0


def normalizer_b(k: float = 1.0) -> Normalizer:
    if not k > 0:
        raise DomainError(f"k must be > 0 (got {k!r})")

    def c(alpha: float, beta: float) -> float:
        if alpha == 1.0 and beta == 1.0:
            return 0.0
        return (alpha - beta) / (2.0 * k) * anisotropy_bracket(alpha, beta)

    return Normalizer("counterexample-b", c, k, frozenset({"I", "II", "III", "IV"}))


def predicted_limit_b(m: float, k: float = 1.0) -> float:
    """Limit of C/(alpha - beta) for normalizer_b along slope m."""
    return (m / (1.0 + m * m) - 1.0) / (2.0 * k)


def _direction_side(m: float) -> str:
    # alpha = 1 + r, beta = 1 + m r with r > 0 sits in the alpha-strip iff m <= 0.
    return "alpha-strip" if m <= 0 else "outside-region"


@dataclass(frozen=True)
class DirectionalScan:
    m: float
    radii: tuple[float, ...]
    values: tuple[float, ...]
    side: str
    in_region: tuple[bool, ...]

    @property
    def limit(self) -> float:
        return self.values[-1]


def directional_limit_scan(norm: Normalizer, m: float, radii: Sequence[float] = DEFAULT_RADII) -> DirectionalScan:
    """C(1 + r, 1 + m r) / (alpha - beta) for each radius r."""
    if m == 1:
        raise DegenerateDirectionError("slope m = 1 runs along alpha = beta; C/(alpha - beta) is undefined")
    radii = tuple(float(r) for r in radii)
    if not radii or any(not r > 0 for r in radii):
        raise DomainError("radii must be a non-empty sequence of positive numbers")
    values, flags = [], []
    for r in radii:
        alpha, beta = 1.0 + r, 1.0 + m * r
        values.append(norm(alpha, beta) / (alpha - beta))
        flags.append(region_contains(ParamPair(alpha, beta)))
    return DirectionalScan(float(m), radii, tuple(values), _direction_side(m), tuple(flags))


@dataclass(frozen=True)
class EntropyLimitDemo:
    normalizer: str
    k: float
    shannon: float
    slopes: tuple[float, ...]
    radii: tuple[float, ...]
    entropies: dict
    limits: dict
    spread: float
    threshold: float
    demonstrated: bool

    def to_dict(self) -> dict:
        return {
            "normalizer": self.normalizer,
            "k": self.k,
            "shannon": self.shannon,
            "slopes": list(self.slopes),
            "radii": list(self.radii),
            "entropies": {repr(m): list(v) for m, v in self.entropies.items()},
            "limits": {repr(m): v for m, v in self.limits.items()},
            "spread": self.spread,
            "threshold": self.threshold,
            "demonstrated": self.demonstrated,
        }


def entropy_limit_failure_demo(
    dist: Distribution,
    k: float = 1.0,
    slopes: Iterable[float] = (0.0, -1.0),
    radii: Sequence[float] = DEFAULT_RADII,
    norm: Normalizer | None = None,
) -> EntropyLimitDemo:
    """Evaluate the entropy along several directions into (1, 1) and compare the end values.

    The demonstration succeeds when two directions end more than
    0.1 * |Shannon entropy| apart.  Slopes must be <= 0 so the path stays in
    the region.
    """
    norm = norm or normalizer_b(k)
    slopes = tuple(float(m) for m in slopes)
    radii = tuple(float(r) for r in radii)
    entropies, limits = {}, {}
    for m in slopes:
        if m == 1:
            raise DegenerateDirectionError("slope m = 1 runs along alpha = beta")
        seq = tuple(entropy(dist, ParamPair(1.0 + r, 1.0 + m * r), norm) for r in radii)
        entropies[m] = seq
        limits[m] = seq[-1]
    spread = max(limits.values()) - min(limits.values()) if limits else 0.0
    threshold = 0.1 * abs(shannon_entropy(dist, k))
    return EntropyLimitDemo(
        normalizer=norm.name,
        k=k,
        shannon=shannon_entropy(dist, k),
        slopes=slopes,
        radii=radii,
        entropies=entropies,
        limits=limits,
        spread=spread,
        threshold=threshold,
        demonstrated=spread > threshold,
    )


def difference_quotients(
    f: Callable[[float], float], x: float, steps: Iterable[float] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
) -> tuple[list[float], float]:
    """Forward difference quotients of ``f`` at ``x`` and their spread (max - min).

    A differentiable function gives quotients that settle; a wide spread at
    small steps is numerical evidence (not proof) of non-differentiability.
    """
    fx = f(x)
    quotients = [(f(x + h) - fx) / h for h in steps]
    return quotients, max(quotients) - min(quotients)
