"""Distributions, parameter pairs, normalizers and the two-parameter entropy.

The entropy of a distribution p for a parameter pair (alpha, beta) and a
normalizer C is

    S(p) = sum_i (p_i**alpha - p_i**beta) / C(alpha, beta)

with the convention ``0**x == 0`` for every x >= 0, including x = 0.  That
convention makes appending a zero-probability outcome an exact no-op.

Sums are taken with :func:`math.fsum`, which is correctly rounded and
therefore independent of the order of the outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterable

import numpy as np

from .errors import DomainError, NondegenerateParamError, RegionError

__all__ = [
    "SUM_ATOL",
    "PROPERTIES",
    "Distribution",
    "ParamPair",
    "Normalizer",
    "JointDistribution",
    "REGION_GRID",
    "region_contains",
    "summand",
    "entropy",
    "shannon_entropy",
    "canonical_normalizer",
    "uniform_entropy_closed_form",
]

SUM_ATOL = 1e-12
PROPERTIES = frozenset({"I", "II", "III", "IV", "III'"})


@dataclass(frozen=True)
class Distribution:
    """A point of the probability simplex.

    Inputs are never renormalized silently; use :meth:`from_values` with
    ``renormalize=True`` to opt in.
    """

    probs: tuple[float, ...]
    atol: float = field(default=SUM_ATOL, compare=False, repr=False)

    def __post_init__(self):
        probs = tuple(float(x) for x in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise DomainError("distribution needs at least one outcome (n >= 1)")
        if any(not math.isfinite(x) for x in probs):
            raise DomainError("distribution entries must be finite")
        if any(x < 0 for x in probs):
            raise DomainError("distribution entries must be >= 0")
        total = math.fsum(probs)
        if abs(total - 1.0) > self.atol:
            raise DomainError(
                f"distribution entries must sum to 1 within {self.atol:g} (sum = {total!r})"
            )

    @classmethod
    def from_values(cls, values: Iterable[float], renormalize: bool = False) -> "Distribution":
        values = [float(v) for v in values]
        if renormalize:
            if any(v < 0 for v in values):
                raise DomainError("cannot renormalize negative entries")
            total = math.fsum(values)
            if total <= 0:
                raise DomainError("cannot renormalize entries summing to 0")
            values = [v / total for v in values]
        return cls(tuple(values))

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        if n < 1:
            raise DomainError("n must be >= 1")
        return cls((1.0 / n,) * n)

    def expand(self) -> "Distribution":
        """Append one zero-probability outcome."""
        return Distribution(self.probs + (0.0,), atol=self.atol)

    def __len__(self) -> int:
        return len(self.probs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)


@dataclass(frozen=True)
class ParamPair:
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def in_region(self) -> bool:
        return region_contains(self)

    def swapped(self) -> "ParamPair":
        return ParamPair(self.beta, self.alpha)


@dataclass(frozen=True)
class Normalizer:
    """A named denominator function C(alpha, beta) with its constant k.

    ``claimed_properties`` is what the constructor of the normalizer asserts;
    nothing in the library relies on it.  The axiom checks test the claims.
    """

    name: str
    c: Callable[[float, float], float] = field(compare=False)
    k: float
    claimed_properties: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"normalizer constant k must be > 0 (got {self.k!r})")
        props = frozenset(self.claimed_properties)
        unknown = props - PROPERTIES
        if unknown:
            raise DomainError(f"unknown normalizer properties: {sorted(unknown)}")
        object.__setattr__(self, "claimed_properties", props)

    def __call__(self, alpha: float, beta: float) -> float:
        return float(self.c(alpha, beta))


@dataclass(frozen=True)
class JointDistribution:
    """Joint probabilities p_ij, one row per outer outcome i (rows may differ in length)."""

    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or any(len(r) == 0 for r in rows):
            raise DomainError("joint distribution needs n >= 1 rows with m_i >= 1 entries")
        flat = [x for r in rows for x in r]
        if any(x < 0 or not math.isfinite(x) for x in flat):
            raise DomainError("joint entries must be finite and >= 0")
        total = math.fsum(flat)
        if abs(total - 1.0) > SUM_ATOL:
            raise DomainError(f"joint entries must sum to 1 within {SUM_ATOL:g} (sum = {total!r})")

    def marginals(self) -> tuple[float, ...]:
        return tuple(math.fsum(r) for r in self.rows)

    def conditionals(self, i: int) -> tuple[float, ...]:
        """p(j|i) for row ``i``; undefined (DomainError) when the row has zero mass."""
        p_i = math.fsum(self.rows[i])
        if p_i <= 0:
            raise DomainError(f"conditional p(j|{i}) undefined: row {i} has zero mass")
        return tuple(x / p_i for x in self.rows[i])


def region_contains(pair: ParamPair) -> bool:
    """True iff (alpha, beta) lies in the union of the two admissible strips."""
    a, b = pair.alpha, pair.beta
    in_alpha_strip = a >= 1 and 0 <= b <= 1 and (a, b) != (1.0, 0.0)
    in_beta_strip = 0 <= a <= 1 and b >= 1 and (a, b) != (0.0, 1.0)
    return in_alpha_strip or in_beta_strip


# Twelve pairs spread over both strips, mirrored across the diagonal.  The
# boundary lines alpha = 1, beta = 0, beta = 1 are represented on purpose.
REGION_GRID: tuple[ParamPair, ...] = tuple(
    ParamPair(a, b)
    for a, b in [
        (2.0, 0.5), (1.5, 0.0), (3.0, 1.0), (1.2, 0.8), (1.0, 0.5), (4.0, 0.2),
        (0.5, 2.0), (0.0, 1.5), (1.0, 3.0), (0.8, 1.2), (0.5, 1.0), (0.2, 4.0),
    ]
)


def _pow_diff(p: float, alpha: float, beta: float) -> float:
    # p**alpha - p**beta without cancellation; 0**x := 0.
    if p == 0.0:
        return 0.0
    # Factor out the larger power so the expm1 argument is never positive.
    if alpha >= beta:
        return p**beta * math.expm1((alpha - beta) * math.log(p))
    return -(p**alpha) * math.expm1((beta - alpha) * math.log(p))


def _checked_c(pair: ParamPair, norm: Normalizer) -> float:
    if pair.alpha == pair.beta:
        raise NondegenerateParamError(
            f"alpha != beta required (got alpha = beta = {pair.alpha!r})"
        )
    if not region_contains(pair):
        raise RegionError(f"(alpha, beta) = ({pair.alpha!r}, {pair.beta!r}) is outside the region")
    c = norm(pair.alpha, pair.beta)
    if c == 0.0 or not math.isfinite(c):
        raise NondegenerateParamError(
            f"normalizer {norm.name!r} gives C = {c!r} at ({pair.alpha!r}, {pair.beta!r}); C != 0 required"
        )
    return c


def summand(p: float, pair: ParamPair, norm: Normalizer) -> float:
    """One term (p**alpha - p**beta) / C(alpha, beta) of the entropy sum."""
    c = _checked_c(pair, norm)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1] (got {p!r})")
    return _pow_diff(p, pair.alpha, pair.beta) / c


def entropy(dist: Distribution, pair: ParamPair, norm: Normalizer) -> float:
    c = _checked_c(pair, norm)
    return math.fsum(_pow_diff(p, pair.alpha, pair.beta) / c for p in dist.probs)


def entropy_rows(rows: np.ndarray, pair: ParamPair, norm: Normalizer) -> np.ndarray:
    """Entropy of every row of a 2-D array of (already validated) distributions."""
    c = _checked_c(pair, norm)
    rows = np.asarray(rows, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(rows)
        lo, hi = min(pair.alpha, pair.beta), max(pair.alpha, pair.beta)
        sign = 1.0 if pair.alpha >= pair.beta else -1.0
        terms = sign * rows**lo * np.expm1((hi - lo) * logs) / c
    terms = np.where(rows == 0.0, 0.0, terms)
    return np.array([math.fsum(r) for r in terms.tolist()])


def shannon_entropy(dist: Distribution, k: float = 1.0) -> float:
    """-k * sum p ln p with 0 ln 0 = 0."""
    if not k > 0:
        raise DomainError(f"k must be > 0 (got {k!r})")
    return -k * math.fsum(p * math.log(p) for p in dist.probs if p > 0)


def canonical_normalizer(k: float = 1.0) -> Normalizer:
    """C(alpha, beta) = (beta - alpha) / k, the normalizer that satisfies every property."""
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"k must be > 0 (got {k!r})")
    return Normalizer(
        name="canonical",
        c=lambda alpha, beta: (beta - alpha) / k,
        k=k,
        claimed_properties=PROPERTIES,
    )


def uniform_entropy_closed_form(n: int, pair: ParamPair, norm: Normalizer) -> float:
    """(n**(1-alpha) - n**(1-beta)) / C, the entropy of the uniform distribution."""
    c = _checked_c(pair, norm)
    return (n ** (1 - pair.alpha) - n ** (1 - pair.beta)) / c

