"""Bracketed bisection with safeguarded Newton steps for monotone maps on (0, inf).

The search runs in t = ln x, which keeps the bracket well conditioned when the
root sits many decades below 1.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import MonotonicityError, NoConvergenceError, RangeError

GRID_POINTS = 256
GRID_FLOOR = 1e-12
SEARCH_FLOOR = 1e-300


def check_monotone_on_grid(fprime: Callable[[float], float], x_max: float, sign: int, what: str) -> None:
    """Raise MonotonicityError unless ``sign * fprime > 0`` on a log grid over (1e-12, x_max]."""
    for x in np.geomspace(GRID_FLOOR, x_max, GRID_POINTS):
        d = fprime(float(x))
        if not (sign * d > 0):
            direction = "increasing" if sign > 0 else "decreasing"
            raise MonotonicityError(f"{what} is not strictly {direction}: derivative {d!r} at x = {x!r}")


def invert_on_unit_side(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    y: float,
    x_max: float,
    sign: int,
    tol: float,
    strict: bool = True,
    maxiter: int = 400,
    accept: float | None = None,
) -> float:
    """Solve f(x) = y for x in (0, x_max] where ``sign * f`` is increasing.

    The upper end of the bracket is x_max; the lower end is found by shrinking
    x geometrically until the target is crossed.  Iteration aims for ``tol``;
    if it stalls first, the best iterate is returned provided its residual is
    within ``accept`` (default ``tol``).  Otherwise, with ``strict``, it raises
    NoConvergenceError.
    """
    accept = tol if accept is None else accept
    # g(t) = sign * (f(e^t) - y) is increasing in t.
    def g(t: float) -> float:
        return sign * (f(math.exp(t)) - y)

    def dg(t: float) -> float:
        x = math.exp(t)
        return sign * x * fprime(x)

    t_hi = math.log(x_max)
    g_hi = g(t_hi)
    if abs(g_hi) <= tol:
        return x_max
    if g_hi < 0:
        if abs(g_hi) <= accept:
            return x_max
        raise RangeError(f"target {y!r} is beyond the value {f(x_max)!r} attained at x = {x_max!r}")

    t_lo = t_hi
    t_floor = math.log(SEARCH_FLOOR)
    while True:
        t_lo = max(t_lo - 2.0, t_floor)
        g_lo = g(t_lo)
        if not math.isfinite(g_lo):
            raise RangeError(f"map is not finite near x = {math.exp(t_lo)!r} while bracketing {y!r}")
        if g_lo <= 0:
            break
        if t_lo == t_floor:
            raise RangeError(f"target {y!r} is not attained on (0, {x_max!r}]")
    if abs(g_lo) <= tol:
        return math.exp(t_lo)

    t = 0.5 * (t_lo + t_hi)
    best_t, best_r = t, math.inf
    for _ in range(maxiter):
        r = g(t)
        if abs(r) < best_r:
            best_t, best_r = t, abs(r)
        if abs(r) <= tol:
            return math.exp(t)
        if r < 0:
            t_lo = t
        else:
            t_hi = t
        d = dg(t)
        t_new = t - r / d if d > 0 and math.isfinite(d) else math.nan
        if not (t_lo < t_new < t_hi):
            t_new = 0.5 * (t_lo + t_hi)
        if t_new == t or not (t_lo < t_new < t_hi):
            break
        t = t_new
    if strict and best_r > accept:
        raise NoConvergenceError(
            f"inversion for target {y!r} stalled with residual {best_r!r} > {accept!r}",
            trace=[(math.exp(best_t), best_r)],
        )
    return math.exp(best_t)
