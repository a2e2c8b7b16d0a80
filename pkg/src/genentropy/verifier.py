"""Sampled checks of the entropy axioms and of the normalizer properties.

Every check returns a :class:`CheckReport`.  Continuity and limits are probed
numerically; a passing probe is evidence, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import (
    REGION_GRID,
    Distribution,
    JointDistribution,
    Normalizer,
    ParamPair,
    _checked_c,
    _pow_diff,
    entropy,
    entropy_rows,
    region_contains,
    shannon_entropy,
)
from .errors import DomainError, GenEntropyError, RegionError

__all__ = [
    "CheckReport",
    "LimitPath",
    "DEFAULT_TS",
    "DEFAULT_SLOPES",
    "default_paths",
    "random_joint",
    "sample_simplex",
    "check_shannon_additivity",
    "check_maximality",
    "check_expandability",
    "check_continuity_probe",
    "check_shannon_limit",
    "check_normalizer_properties",
    "merge_reports",
    "axiom_suite",
]

ADDITIVITY_TOL = 1e-12
MAXIMALITY_TOL = 1e-12
SHANNON_LIMIT_TOL = 1e-6
PATH_LIMIT_TOL = 1e-6
NOISE_FLOOR = 1e-13

DEFAULT_TS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)
DEFAULT_SLOPES = (-2.0, -1.0, -0.5, 0.0, 0.5, 2.0)


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    max_residual: float
    failures: tuple[tuple[str, float], ...] = ()
    details: dict = field(default_factory=dict, compare=False)

    @property
    def verdict(self) -> str:
        return "pass" if not self.failures else "fail"

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "verdict": self.verdict,
            "failures": [{"input": d, "residual": r} for d, r in self.failures],
        }
        if self.details:
            out["details"] = self.details
        return out


def _fmt_pair(pair: ParamPair) -> str:
    return f"({pair.alpha!r}, {pair.beta!r})"


@dataclass(frozen=True)
class LimitPath:
    """A path t -> (alpha(t), beta(t)) into (1, 1), sampled at decreasing t."""

    label: str
    alpha_of: Callable[[float], float] = field(compare=False)
    beta_of: Callable[[float], float] = field(compare=False)
    ts: tuple[float, ...] = DEFAULT_TS

    def __post_init__(self):
        ts = tuple(float(t) for t in self.ts)
        object.__setattr__(self, "ts", ts)
        if not ts or any(not 0 < t <= 1 for t in ts):
            raise DomainError("path parameters t must lie in (0, 1]")
        if any(b >= a for a, b in zip(ts, ts[1:])):
            raise DomainError("path parameters t must be strictly decreasing")
        for pair in self.pairs():
            if pair.alpha == pair.beta:
                raise DomainError(f"path {self.label} touches the diagonal at {_fmt_pair(pair)}")
            if not region_contains(pair):
                raise RegionError(f"path {self.label} leaves the region at {_fmt_pair(pair)}")

    def pairs(self) -> list[ParamPair]:
        return [ParamPair(self.alpha_of(t), self.beta_of(t)) for t in self.ts]

    @classmethod
    def slope(cls, m: float, ts: Sequence[float] = DEFAULT_TS, side: int = 1) -> "LimitPath":
        """alpha = 1 + side*t, beta = 1 + side*m*t."""
        m = float(m)
        return cls(
            f"m={m!r}" + ("" if side > 0 else ",side=-1"),
            lambda t: 1.0 + side * t,
            lambda t: 1.0 + side * m * t,
            tuple(ts),
        )


def default_paths(
    slopes: Iterable[float] = DEFAULT_SLOPES, ts: Sequence[float] = DEFAULT_TS
) -> tuple[list[LimitPath], list[float]]:
    """Straight paths for each slope that fit in the region, plus the slopes dropped."""
    paths, skipped = [], []
    for m in slopes:
        try:
            paths.append(LimitPath.slope(m, ts, side=1))
            continue
        except (RegionError, DomainError):
            pass
        try:
            paths.append(LimitPath.slope(m, ts, side=-1))
        except (RegionError, DomainError):
            skipped.append(float(m))
    return paths, skipped


def sample_simplex(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """Uniform samples from the simplex via normalized exponential spacings."""
    x = rng.exponential(size=(size, n))
    return x / x.sum(axis=1, keepdims=True)


def random_joint(rng: np.random.Generator, max_n: int = 6, max_m: int = 6) -> JointDistribution:
    n = int(rng.integers(1, max_n + 1))
    sizes = rng.integers(1, max_m + 1, size=n)
    rows = [rng.exponential(size=int(m)) for m in sizes]
    total = math.fsum(x for r in rows for x in r)
    return JointDistribution(tuple(tuple(x / total for x in r) for r in rows))


def _pow0(p: float, x: float) -> float:
    return 0.0 if p == 0.0 else p**x


def check_shannon_additivity(joint: JointDistribution, pair: ParamPair, norm: Normalizer) -> CheckReport:
    """Both sides of the generalized Shannon additivity identity for one joint distribution."""
    c = _checked_c(pair, norm)
    a, b = pair.alpha, pair.beta

    def s(p: float) -> float:
        return _pow_diff(p, a, b) / c

    lhs = math.fsum(s(p) for row in joint.rows for p in row)
    rhs_terms = []
    for i, p_i in enumerate(joint.marginals()):
        if p_i <= 0:
            continue
        cond = joint.conditionals(i)
        rhs_terms.append(_pow0(p_i, a) * math.fsum(s(q) for q in cond))
        rhs_terms.append(s(p_i) * math.fsum(_pow0(q, b) for q in cond))
    rhs = math.fsum(rhs_terms)
    residual = abs(lhs - rhs) / max(1.0, abs(lhs))
    failures = () if residual <= ADDITIVITY_TOL else ((f"pair={_fmt_pair(pair)}", residual),)
    return CheckReport("tgsk3_additivity", 1, residual, failures, {"lhs": lhs, "rhs": rhs})


def check_maximality(pair: ParamPair, norm: Normalizer, n: int, trials: int, seed: int) -> CheckReport:
    """No simplex sample may beat the uniform distribution by more than 1e-12."""
    if n < 2:
        raise DomainError("maximality needs n >= 2")
    rng = np.random.default_rng(seed)
    samples = sample_simplex(rng, n, trials)
    top = entropy(Distribution.uniform(n), pair, norm)
    values = entropy_rows(samples, pair, norm)
    excess = values - top
    failures = tuple(
        (f"n={n} pair={_fmt_pair(pair)} sample#{i}", float(excess[i]))
        for i in np.flatnonzero(excess > MAXIMALITY_TOL)
    )
    worst = float(excess.max()) if trials else -math.inf
    return CheckReport(
        "tgsk2_maximality",
        trials,
        max(worst, 0.0),
        failures,
        {"uniform_entropy": top, "max_sample_entropy": float(values.max()) if trials else None},
    )


def check_expandability(dist: Distribution, pair: ParamPair, norm: Normalizer) -> CheckReport:
    residual = abs(entropy(dist.expand(), pair, norm) - entropy(dist, pair, norm))
    failures = () if residual == 0.0 else ((f"n={len(dist)} pair={_fmt_pair(pair)}", residual),)
    return CheckReport("tgsk4_expandability", 1, residual, failures)


def _probe_modulus(dist, norm, center, offsets, scale):
    values = []
    for du, dv in offsets:
        pair = ParamPair(center.alpha + scale * du, center.beta + scale * dv)
        values.append(entropy(dist, pair, norm))
    if center.alpha != center.beta and region_contains(center):
        ref = entropy(dist, center, norm)
        return max(abs(v - ref) for v in values)
    # No value at the center: the oscillation is what a limit would have to tame.
    return max(values) - min(values)


def _usable(center: ParamPair, du: float, dv: float, scales: Iterable[float]) -> bool:
    for s in scales:
        pair = ParamPair(center.alpha + s * du, center.beta + s * dv)
        if pair.alpha == pair.beta or not region_contains(pair):
            return False
    return True


def check_continuity_probe(
    dist: Distribution,
    norm: Normalizer,
    center: ParamPair,
    radius: float,
    samples: int = 64,
    seed: int = 0,
    max_ratio: float = 0.99,
) -> CheckReport:
    """Compare a sampled modulus of continuity at ``radius`` and ``radius / 2``.

    The same unit offsets are used at both radii.  At a center off the
    diagonal the modulus is max |S(pair) - S(center)|; on the diagonal, where
    S has no value, it is the oscillation max S - min S.  Passes when the
    modulus shrinks by at least ``max_ratio`` (or is zero at both radii).
    """
    if not radius > 0:
        raise DomainError("radius must be > 0")
    rng = np.random.default_rng(seed)
    offsets = []
    attempts = 0
    while len(offsets) < samples and attempts < 50 * samples:
        attempts += 1
        theta = rng.uniform(0.0, 2.0 * math.pi)
        rho = math.sqrt(rng.uniform(0.0, 1.0))
        du, dv = rho * math.cos(theta), rho * math.sin(theta)
        if _usable(center, du, dv, (radius, radius / 2)):
            offsets.append((du, dv))
    name = "tgsk1_continuity"
    if not offsets:
        return CheckReport(name, 0, math.inf, ((f"center={_fmt_pair(center)}", math.inf),),
                           {"reason": "no admissible perturbations"})
    try:
        wide = _probe_modulus(dist, norm, center, offsets, radius)
        narrow = _probe_modulus(dist, norm, center, offsets, radius / 2)
    except GenEntropyError as exc:
        return CheckReport(name, len(offsets), math.inf, ((f"center={_fmt_pair(center)}: {exc}", math.inf),))
    ratio = 0.0 if wide == 0.0 and narrow == 0.0 else (narrow / wide if wide > 0 else math.inf)
    ok = ratio <= max_ratio
    failures = () if ok else ((f"center={_fmt_pair(center)} radius={radius!r}", ratio),)
    return CheckReport(
        name,
        len(offsets),
        ratio,
        failures,
        {"center": [center.alpha, center.beta], "radius": radius, "modulus": wide,
         "modulus_half_radius": narrow, "ratio": ratio, "max_ratio": max_ratio},
    )


def _eventually_nonincreasing(errors: Sequence[float]) -> bool:
    start = len(errors) // 2
    return all(b <= a + NOISE_FLOOR for a, b in zip(errors[start:], errors[start + 1:]))


def check_shannon_limit(dist: Distribution, norm: Normalizer, path: LimitPath, k: float) -> CheckReport:
    """Distance from the Shannon entropy along a path into (1, 1)."""
    target = shannon_entropy(dist, k)
    values = [entropy(dist, pair, norm) for pair in path.pairs()]
    errors = [abs(v - target) for v in values]
    ok = errors[-1] <= SHANNON_LIMIT_TOL and _eventually_nonincreasing(errors)
    failures = () if ok else ((f"path {path.label}", errors[-1]),)
    return CheckReport(
        f"shannon_limit[{path.label}]",
        len(errors),
        errors[-1],
        failures,
        {"ts": list(path.ts), "entropies": values, "errors": errors, "shannon": target},
    )


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _axis_derivatives(norm: Normalizer, ts: Sequence[float]) -> dict:
    # Central differences of C along beta = 1 (d/dalpha) and alpha = 1 (d/dbeta).
    d_alpha, d_beta = [], []
    for t in ts:
        h = 1e-3 * t
        d_alpha.append((norm(1 + t + h, 1.0) - norm(1 + t - h, 1.0)) / (2 * h))
        d_beta.append((norm(1.0, 1 + t + h) - norm(1.0, 1 + t - h)) / (2 * h))
    return {"ts": list(ts), "dC_dalpha_on_beta_1": d_alpha, "dC_dbeta_on_alpha_1": d_beta}


def check_normalizer_properties(
    norm: Normalizer,
    grid: Sequence[ParamPair] = REGION_GRID,
    paths: Sequence[LimitPath] | None = None,
) -> CheckReport:
    """Properties I, II and III' of a normalizer; III and IV are reported for information.

    I:   sign C(a, b) = sign(b - a), and swapping the arguments flips the sign.
    II:  C != 0 off the diagonal.
    III': C / (alpha - beta) tends to -1/k along every path, with all paths agreeing.
    """
    if paths is None:
        paths, skipped = default_paths()
    else:
        skipped = []
    failures: list[tuple[str, float]] = []
    residuals: list[float] = []
    antisym = 0.0

    for pair in grid:
        a, b = pair.alpha, pair.beta
        c, c_swap = norm(a, b), norm(b, a)
        antisym = max(antisym, abs(c + c_swap))
        if a == b:
            continue
        if _sign(c) != _sign(b - a):
            failures.append((f"I: sign C{_fmt_pair(pair)} = {c!r} vs sign(beta - alpha)", 1.0))
        if _sign(c_swap) != -_sign(c):
            failures.append((f"I: C{_fmt_pair(pair.swapped())} = {c_swap!r} does not flip sign", 1.0))
        if c == 0.0:
            failures.append((f"II: C{_fmt_pair(pair)} = 0 off the diagonal", 1.0))

    target = -1.0 / norm.k
    path_limits = {}
    path_values = {}
    for path in paths:
        ratios = [norm(p.alpha, p.beta) / (p.alpha - p.beta) for p in path.pairs()]
        path_values[path.label] = ratios
        limit = ratios[-1]
        path_limits[path.label] = limit
        dev = abs(limit - target)
        residuals.append(dev)
        if dev > PATH_LIMIT_TOL:
            failures.append((f"III': path {path.label} limit {limit!r} != -1/k = {target!r}", dev))
    if path_limits:
        agreement = max(path_limits.values()) - min(path_limits.values())
        residuals.append(agreement)
        if agreement > PATH_LIMIT_TOL:
            failures.append(("III': per-path limits disagree", agreement))
    else:
        agreement = 0.0

    derivs = _axis_derivatives(norm, DEFAULT_TS[:5])
    lim_da = derivs["dC_dalpha_on_beta_1"][-1]
    lim_db = derivs["dC_dbeta_on_alpha_1"][-1]
    details = {
        "normalizer": norm.name,
        "k": norm.k,
        "grid_size": len(grid),
        "exact_antisymmetry_residual": antisym,
        "path_limits": path_limits,
        "path_values": path_values,
        "path_limit_spread": agreement,
        "skipped_slopes": skipped,
        "informational_III_IV": {
            **derivs,
            # IV asks for lim dC/dalpha = -1/k' and lim dC/dbeta = 1/k' with one k' > 0.
            "implied_k_from_dalpha": -1.0 / lim_da if lim_da else None,
            "implied_k_from_dbeta": 1.0 / lim_db if lim_db else None,
        },
    }
    worst = max(residuals + [r for _, r in failures], default=0.0)
    return CheckReport("normalizer_properties", len(grid) + len(paths), worst, tuple(failures), details)


def merge_reports(name: str, reports: Iterable[CheckReport]) -> CheckReport:
    """Fold many single-trial reports into one, keeping failures in trial order."""
    reports = list(reports)
    failures = tuple(f for r in reports for f in r.failures)
    return CheckReport(
        name,
        sum(r.trials for r in reports),
        max((r.max_residual for r in reports), default=0.0),
        failures,
    )


def _guarded(name: str, label: str, fn) -> CheckReport:
    try:
        return fn()
    except GenEntropyError as exc:
        return CheckReport(name, 1, math.inf, ((f"{label}: {exc}", math.inf),))


def axiom_suite(
    norm: Normalizer,
    seed: int = 42,
    grid: Sequence[ParamPair] = REGION_GRID,
    joints: int = 200,
    samples: int = 2000,
    sizes: Sequence[int] = (2, 4, 8),
    expand_dists: int = 100,
    dist: Distribution | None = None,
) -> list[CheckReport]:
    """Every check, in a fixed order, for one normalizer."""
    rng = np.random.default_rng(seed)
    dist = dist or Distribution((0.5, 0.3, 0.2))
    reports = []

    trials = []
    for j in range(joints):
        joint = random_joint(rng)
        for pair in grid:
            trials.append(_guarded("tgsk3_additivity", f"joint#{j} pair={_fmt_pair(pair)}",
                                   lambda: check_shannon_additivity(joint, pair, norm)))
    reports.append(merge_reports("tgsk3_additivity", trials))

    trials = []
    for i, n in enumerate(sizes):
        for g, pair in enumerate(grid):
            sub_seed = seed * 1_000_003 + i * 1_009 + g
            trials.append(_guarded("tgsk2_maximality", f"n={n} pair={_fmt_pair(pair)}",
                                   lambda: check_maximality(pair, norm, n, samples, sub_seed)))
    reports.append(merge_reports("tgsk2_maximality", trials))

    trials = []
    for i in range(expand_dists):
        d = Distribution.from_values(sample_simplex(rng, int(rng.integers(1, 9)), 1)[0], renormalize=True)
        for pair in grid:
            trials.append(_guarded("tgsk4_expandability", f"dist#{i} pair={_fmt_pair(pair)}",
                                   lambda: check_expandability(d, pair, norm)))
    reports.append(merge_reports("tgsk4_expandability", trials))

    interior = ParamPair(2.0, 0.5)
    reports.append(_guarded("tgsk1_continuity", "interior",
                            lambda: check_continuity_probe(dist, norm, interior, 1e-2, seed=seed)))
    reports.append(_renamed(_guarded("tgsk1_continuity", "at (1, 1)",
                            lambda: check_continuity_probe(dist, norm, ParamPair(1.0, 1.0), 1e-3, seed=seed)),
                            "tgsk1_continuity_at_1_1"))

    paths, _ = default_paths()
    for path in paths:
        reports.append(_guarded(f"shannon_limit[{path.label}]", path.label,
                                lambda: check_shannon_limit(dist, norm, path, norm.k)))
    reports.append(check_normalizer_properties(norm, grid, None))
    return reports


def _renamed(report: CheckReport, name: str) -> CheckReport:
    return CheckReport(name, report.trials, report.max_residual, report.failures, report.details)
