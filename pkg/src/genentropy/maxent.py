"""Maximum-entropy canonical distributions for the deformed-log entropy.

Maximizing S(p) = -sum p_i L(p_i) subject to sum p_i = 1 and
sum p_i e_i = U gives the stationarity condition

    mu(p_i) = g + l * e_i,        mu(p) = -L(p) - p L'(p),

where mu is the derivative of the summand -p L(p) and (g, l) are the
multipliers of the two constraints.  When mu is strictly decreasing on (0, 1]
(the summand is strictly concave) each p_i is recovered by inverting mu, and
the multipliers are found by a 2-D Newton iteration on the constraints.

This derivation is ours: it is the direct Lagrangian of the trace-form
entropy, and the generalized exponential enters only as "invert a monotone
map built from L".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _roots
from .core import Distribution
from .deformed_log import KappaPair, _require_distinct, deformed_entropy_values
from .errors import DomainError, NoConvergenceError, RangeError
from .verifier import CheckReport

__all__ = [
    "MaxentProblem",
    "CanonicalSolution",
    "stationarity_map",
    "stationarity_map_prime",
    "stationarity_inverse",
    "gibbs_solution",
    "solve_canonical",
    "verify_maximum",
]

STATIONARITY_RTOL = 1e-12
PIN_THRESHOLD = 1e-9
MAX_OUTER = 200
MAX_HALVINGS = 30
JACOBIAN_REL_STEP = 1e-7


@dataclass(frozen=True)
class MaxentProblem:
    energies: tuple[float, ...]
    target_mean: float
    kp: KappaPair
    tol: float = 1e-12

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "target_mean", float(self.target_mean))
        if len(energies) < 2:
            raise DomainError("maxent needs n >= 2 energy levels")
        if any(not math.isfinite(e) for e in energies) or not math.isfinite(self.target_mean):
            raise DomainError("energies and target_mean must be finite")
        lo, hi = min(energies), max(energies)
        if lo == hi:
            if self.target_mean != lo:
                raise DomainError(f"target_mean must equal the common energy {lo!r}")
        elif not lo < self.target_mean < hi:
            raise DomainError(
                f"target_mean must lie strictly between min and max energy ({lo!r}, {hi!r}); got {self.target_mean!r}"
            )
        if not self.tol > 0:
            raise DomainError("tol must be > 0")
        _require_distinct(self.kp)

    @classmethod
    def from_dict(cls, record: dict) -> "MaxentProblem":
        try:
            return cls(
                tuple(record["energies"]),
                record["target_mean"],
                KappaPair(record["kappa1"], record["kappa2"]),
                record.get("tol", 1e-12),
            )
        except KeyError as exc:
            raise DomainError(f"problem record is missing field {exc.args[0]!r}") from None

    @property
    def n(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class CanonicalSolution:
    dist: Distribution
    multiplier_energy: float
    multiplier_norm: float
    residuals: tuple[float, float]
    entropy_value: float
    iterations: int = 0
    method: str = "newton"

    def to_dict(self) -> dict:
        return {
            "p": list(self.dist.probs),
            "multipliers": {"energy": self.multiplier_energy, "norm": self.multiplier_norm},
            "residuals": {"norm": self.residuals[0], "energy": self.residuals[1]},
            "entropy": self.entropy_value,
            "iterations": self.iterations,
            "method": self.method,
        }


def stationarity_map(p: float, kp: KappaPair) -> float:
    """mu(p) = -L(p) - p L'(p) = -((1 + k1) p**k1 - (1 + k2) p**k2) / (k1 - k2)."""
    d = _require_distinct(kp)
    if not p > 0:
        raise DomainError(f"p must be > 0 (got {p!r})")
    lp = math.log(p)
    k1, k2 = kp.kappa1, kp.kappa2
    if d * lp > 0:
        # symmetric in (k1, k2); swap so the expm1 argument stays <= 0
        k1, k2, d = k2, k1, -d
    return -(p**k2) * ((1.0 + k1) * math.expm1(d * lp) / d + 1.0)


def stationarity_map_prime(p: float, kp: KappaPair) -> float:
    d = _require_distinct(kp)
    k1, k2 = kp.kappa1, kp.kappa2
    return -((1.0 + k1) * k1 * p ** (k1 - 1.0) - (1.0 + k2) * k2 * p ** (k2 - 1.0)) / d


def _stationarity_sup(kp: KappaPair) -> float:
    """lim_{p -> 0+} mu(p); +inf when every component stays interior."""
    d = kp.spread
    terms = [(-(1.0 + kp.kappa1) / d, kp.kappa1), ((1.0 + kp.kappa2) / d, kp.kappa2)]
    live = [(c, e) for c, e in terms if c != 0.0]
    divergent = [(c, e) for c, e in live if e < 0]
    if divergent:
        c, _ = min(divergent, key=lambda t: t[1])
        return math.copysign(math.inf, c)
    return math.fsum(c for c, e in live if e == 0)


def _check_concave(kp: KappaPair) -> None:
    _roots.check_monotone_on_grid(lambda p: stationarity_map_prime(p, kp), 1.0, -1, "the stationarity map")


def stationarity_inverse(y: float, kp: KappaPair) -> float:
    """The unique p in (0, 1] with mu(p) = y.

    Raises MonotonicityError when mu is not strictly decreasing on (0, 1] and
    RangeError when y is not attained there.
    """
    _require_distinct(kp)
    _check_concave(kp)
    return _invert(y, kp, strict=True)


def _invert(y: float, kp: KappaPair, strict: bool) -> float:
    scale = max(1.0, abs(y))
    return _roots.invert_on_unit_side(
        lambda p: stationarity_map(p, kp),
        lambda p: stationarity_map_prime(p, kp),
        y,
        1.0,
        sign=-1,
        tol=1e-15 * scale,
        strict=strict,
        accept=STATIONARITY_RTOL * scale,
    )


class _Levels:
    """p_i(g, l) for a fixed problem, extended smoothly outside (0, 1]."""

    def __init__(self, problem: MaxentProblem):
        self.kp = problem.kp
        self.energies = np.asarray(problem.energies)
        self.mu_one = stationarity_map(1.0, self.kp)
        self.slope_one = stationarity_map_prime(1.0, self.kp)
        self.sup = _stationarity_sup(self.kp)

    def p_of(self, y: float) -> float:
        if y >= self.sup:
            return 0.0
        if y <= self.mu_one:
            # Linear continuation past p = 1 keeps the Newton map monotone; a
            # feasible solution never lands here.
            return 1.0 + (y - self.mu_one) / self.slope_one
        try:
            return _invert(y, self.kp, strict=False)
        except RangeError:
            return 0.0

    def probs(self, g: float, l: float, active: np.ndarray) -> np.ndarray:
        p = np.zeros(len(self.energies))
        for i in np.flatnonzero(active):
            p[i] = self.p_of(g + l * self.energies[i])
        return p


def gibbs_solution(energies: Sequence[float], target_mean: float, iters: int = 400) -> tuple[np.ndarray, float]:
    """Classical maxent by bisection on the inverse temperature b: p_i ~ exp(-b e_i)."""
    e = np.asarray(energies, dtype=float)
    shift = e - e.min()

    def mean(b: float) -> float:
        w = np.exp(-b * shift)
        return float(np.dot(w, e) / w.sum())

    lo, hi = -1.0, 1.0
    while mean(lo) < target_mean:
        lo *= 2.0
    while mean(hi) > target_mean:
        hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mean(mid) > target_mean:
            lo = mid
        else:
            hi = mid
    b = 0.5 * (lo + hi)
    w = np.exp(-b * shift)
    return w / w.sum(), b


def _residuals(p: np.ndarray, problem: MaxentProblem) -> np.ndarray:
    return np.array([math.fsum(p) - 1.0, math.fsum(p * np.asarray(problem.energies)) - problem.target_mean])


def _newton(levels: _Levels, problem: MaxentProblem, g: float, l: float, active: np.ndarray, trace: list):
    def F(g_, l_):
        return _residuals(levels.probs(g_, l_, active), problem)

    r = F(g, l)
    for it in range(MAX_OUTER):
        norm_r = float(np.max(np.abs(r)))
        trace.append({"iter": it, "g": g, "l": l, "residual": norm_r})
        if norm_r <= problem.tol:
            return _polish(F, g, l, r, it)
        hg = JACOBIAN_REL_STEP * max(1.0, abs(g))
        hl = JACOBIAN_REL_STEP * max(1.0, abs(l))
        jac = np.column_stack([(F(g + hg, l) - F(g - hg, l)) / (2 * hg), (F(g, l + hl) - F(g, l - hl)) / (2 * hl)])
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam = 1.0
        for _ in range(MAX_HALVINGS):
            g_new, l_new = g + lam * step[0], l + lam * step[1]
            r_new = F(g_new, l_new)
            if np.max(np.abs(r_new)) < norm_r:
                break
            lam *= 0.5
        else:
            return None
        g, l, r = g_new, l_new, r_new
    return None


def _polish(F, g, l, r, it, steps: int = 3):
    # Extra undamped Newton steps once within tol, kept only while they help.
    for _ in range(steps):
        h = JACOBIAN_REL_STEP
        hg, hl = h * max(1.0, abs(g)), h * max(1.0, abs(l))
        jac = np.column_stack([(F(g + hg, l) - F(g - hg, l)) / (2 * hg), (F(g, l + hl) - F(g, l - hl)) / (2 * hl)])
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        r_new = F(g + step[0], l + step[1])
        if not np.max(np.abs(r_new)) < np.max(np.abs(r)):
            break
        g, l, r = g + step[0], l + step[1], r_new
    return g, l, it


def _bisect_decreasing(fn, lo: float, hi: float, iters: int = 200) -> float:
    """Root of a decreasing function; expands [lo, hi] until it brackets a sign change."""
    width = max(1.0, hi - lo)
    while fn(lo) < 0:
        lo -= width
        width *= 2
    width = max(1.0, hi - lo)
    while fn(hi) > 0:
        hi += width
        width *= 2
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if fn(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _nested_bisection(levels: _Levels, problem: MaxentProblem, g0: float, l0: float, active: np.ndarray):
    energies = np.asarray(problem.energies)

    def g_for(l: float) -> float:
        return _bisect_decreasing(lambda g: math.fsum(levels.probs(g, l, active)) - 1.0, g0 - 1.0, g0 + 1.0)

    def mean_gap(l: float) -> float:
        p = levels.probs(g_for(l), l, active)
        return math.fsum(p * energies) / math.fsum(p) - problem.target_mean

    l = _bisect_decreasing(mean_gap, l0 - 1.0, l0 + 1.0)
    return g_for(l), l


def solve_canonical(problem: MaxentProblem) -> CanonicalSolution:
    """Entropy-maximizing distribution under normalization and mean energy.

    Damped Newton on the multipliers, starting from the classical Gibbs
    solution, with nested bisection as a fallback.  Components that fall
    below 1e-9 are pinned to zero and the reduced problem is solved again.
    """
    kp = problem.kp
    _check_concave(kp)
    levels = _Levels(problem)
    energies = np.asarray(problem.energies)
    n = problem.n

    if energies.min() == energies.max():
        p = np.full(n, 1.0 / n)
        g = stationarity_map(1.0 / n, kp)
        return _finish(p, g, 0.0, problem, 0, "symmetric")

    gibbs_p, b = gibbs_solution(problem.energies, problem.target_mean)
    # Classical stationarity: -ln p - 1 = g + l e  with p = exp(-b e)/Z.
    shift = energies.min()
    z = float(np.sum(np.exp(-b * (energies - shift))))
    g, l = math.log(z) - 1.0 - b * shift, b

    active = np.ones(n, dtype=bool)
    trace: list = []
    method = "newton"
    while True:
        out = _newton(levels, problem, g, l, active, trace)
        if out is None:
            method = "nested-bisection"
            g, l = _nested_bisection(levels, problem, g, l, active)
            iters = len(trace)
        else:
            g, l, iters = out
        p = levels.probs(g, l, active)
        tiny = active & (p < PIN_THRESHOLD) & (p > 0)
        if not tiny.any() or tiny.sum() >= active.sum() - 1:
            break
        active &= ~tiny
    res = _residuals(p, problem)
    if np.max(np.abs(res)) > problem.tol:
        raise NoConvergenceError(
            f"maxent solver did not reach tol {problem.tol!r} (residuals {res.tolist()!r})", trace
        )
    return _finish(p, g, l, problem, iters, method)


def _finish(p, g, l, problem, iters, method) -> CanonicalSolution:
    res = _residuals(p, problem)
    dist = Distribution(tuple(float(x) for x in p), atol=max(problem.tol, 1e-12))
    return CanonicalSolution(
        dist=dist,
        multiplier_energy=float(l),
        multiplier_norm=float(g),
        residuals=(abs(float(res[0])), abs(float(res[1]))),
        entropy_value=deformed_entropy_values(dist.probs, problem.kp),
        iterations=iters,
        method=method,
    )


def _null_space(problem: MaxentProblem) -> np.ndarray:
    a = np.vstack([np.ones(problem.n), np.asarray(problem.energies)])
    _, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > 1e-12 * s[0]))
    return vt[rank:].T


def verify_maximum(
    solution: CanonicalSolution,
    problem: MaxentProblem,
    trials: int = 1000,
    step: float = 1e-3,
    seed: int = 0,
) -> CheckReport:
    """Random feasible perturbations must not raise the entropy by more than 1e-10.

    Directions are drawn from the null space of the two constraint gradients;
    the step is shortened where needed to keep every p_i >= 0.
    """
    basis = _null_space(problem)
    p = np.asarray(solution.dist.probs)
    base = deformed_entropy_values(p, problem.kp)
    if basis.shape[1] == 0:
        return CheckReport("maxent_local_maximum", 0, 0.0, (), {"reason": "feasible set is a single point"})
    rng = np.random.default_rng(seed)
    failures = []
    worst = -math.inf
    for i in range(trials):
        d = basis @ rng.standard_normal(basis.shape[1])
        d /= np.linalg.norm(d)
        s = step
        neg = d < 0
        if neg.any():
            s = min(s, float(np.min(p[neg] / -d[neg])))
        if s <= 0:
            continue
        q = np.clip(p + s * d, 0.0, None)
        gain = deformed_entropy_values(q, problem.kp) - base
        worst = max(worst, gain)
        if gain > 1e-10:
            failures.append((f"perturbation#{i} step={s!r}", float(gain)))
    return CheckReport(
        "maxent_local_maximum",
        trials,
        max(worst, 0.0),
        tuple(failures),
        {"entropy": base, "largest_gain": worst},
    )
