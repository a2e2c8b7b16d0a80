import math
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from genentropy import KappaPair, MaxentProblem, solve_canonical, stationarity_inverse, verify_maximum
from genentropy.errors import DomainError, MonotonicityError, RangeError
from genentropy.maxent import (
    CanonicalSolution,
    gibbs_solution,
    stationarity_map,
    stationarity_map_prime,
)

NEAR_CLASSICAL = KappaPair(1e-6, -1e-6)
KP = KappaPair(0.3, -0.2)


def gibbs_oracle(energies, mean):
    # Independent classical solution: root of the mean in the inverse temperature.
    e = np.asarray(energies, float)

    def gap(b):
        w = np.exp(-b * (e - e.min()))
        return float(w @ e / w.sum()) - mean

    b = brentq(gap, -50, 50, xtol=1e-15, rtol=1e-15)
    w = np.exp(-b * (e - e.min()))
    return w / w.sum()


def test_stationarity_map_derivative_matches_finite_difference():
    for p in (0.01, 0.3, 0.9):
        h = 1e-6 * p
        fd = (stationarity_map(p + h, KP) - stationarity_map(p - h, KP)) / (2 * h)
        assert stationarity_map_prime(p, KP) == pytest.approx(fd, rel=1e-7)


def test_stationarity_map_classical_limit():
    # -ln p - 1 when both parameters vanish
    for p in (0.1, 0.5, 1.0):
        assert stationarity_map(p, NEAR_CLASSICAL) == pytest.approx(-math.log(p) - 1.0, abs=1e-5)


@settings(max_examples=100, deadline=None)
@given(st.floats(-9.0, 0.0))
def test_stationarity_inverse_round_trip(log10p):
    p = 10.0**log10p
    assert stationarity_inverse(stationarity_map(p, KP), KP) == pytest.approx(p, rel=1e-10)


def test_stationarity_inverse_errors():
    with pytest.raises(RangeError):
        stationarity_inverse(stationarity_map(1.0, KP) - 1.0, KP)
    with pytest.raises(MonotonicityError):
        stationarity_inverse(0.0, KappaPair(2.0, 1.5))


def test_problem_validation():
    with pytest.raises(DomainError):
        MaxentProblem((0.0,), 0.0, KP)
    with pytest.raises(DomainError):
        MaxentProblem((0.0, 1.0), 1.5, KP)
    with pytest.raises(DomainError):
        MaxentProblem((0.0, 1.0), 1.0, KP)
    with pytest.raises(DomainError):
        MaxentProblem.from_dict({"energies": [0, 1], "target_mean": 0.5, "kappa1": 0.1})


def test_two_level_forced_solution():
    prob = MaxentProblem((0.0, 1.0), 0.5, KP)
    sol = solve_canonical(prob)
    assert sol.dist.probs == pytest.approx((0.5, 0.5), abs=1e-12)
    assert max(sol.residuals) <= 1e-12


def test_equal_energies_give_uniform():
    sol = solve_canonical(MaxentProblem((2.0, 2.0, 2.0), 2.0, KP))
    assert sol.dist.probs == pytest.approx((1 / 3,) * 3, abs=1e-15)
    assert sol.method == "symmetric"


def test_symmetric_three_level_is_uniform():
    prob = MaxentProblem((0.0, 1.0, 2.0), 1.0, NEAR_CLASSICAL)
    sol = solve_canonical(prob)
    assert sol.dist.probs == pytest.approx((1 / 3,) * 3, abs=1e-5)
    assert sol.dist.probs == pytest.approx(tuple(gibbs_oracle((0, 1, 2), 1.0)), abs=1e-5)


@pytest.mark.parametrize("energies,mean", [((0.0, 1.0, 2.0), 0.7), ((0.0, 0.5, 3.0, 4.0), 2.2), ((-1.0, 2.0, 5.0), 0.0)])
def test_near_classical_matches_gibbs_oracle(energies, mean):
    sol = solve_canonical(MaxentProblem(energies, mean, NEAR_CLASSICAL))
    assert sol.dist.probs == pytest.approx(tuple(gibbs_oracle(energies, mean)), abs=1e-5)
    own, _ = gibbs_solution(energies, mean)
    assert own == pytest.approx(gibbs_oracle(energies, mean), abs=1e-12)


@pytest.mark.parametrize("kp", [KP, KappaPair(0.5, -0.5), KappaPair(-0.2, 0.1)])
@pytest.mark.parametrize("energies,mean", [((0.0, 1.0, 2.0), 0.7), ((0.0, 1.0, 3.0, 7.0), 2.0)])
def test_deformed_solution_is_feasible_local_maximum(kp, energies, mean):
    prob = MaxentProblem(energies, mean, kp)
    t0 = time.perf_counter()
    sol = solve_canonical(prob)
    assert time.perf_counter() - t0 < 5.0
    assert max(sol.residuals) <= 1e-12
    rep = verify_maximum(sol, prob, trials=1000)
    assert rep.passed, rep.failures[:3]


def test_verify_maximum_detects_non_maximum():
    prob = MaxentProblem((0.0, 1.0, 2.0), 1.0, KP)
    sol = solve_canonical(prob)
    # (0.4, 0.2, 0.4) is feasible but not the maximizer
    from genentropy import Distribution

    bad = CanonicalSolution(Distribution((0.4, 0.2, 0.4)), 0.0, 0.0, (0.0, 0.0), 0.0)
    assert verify_maximum(sol, prob).passed
    assert not verify_maximum(bad, prob, trials=200).passed


def test_solution_serialization_keys():
    sol = solve_canonical(MaxentProblem((0.0, 1.0), 0.25, KP))
    d = sol.to_dict()
    assert set(d) == {"p", "multipliers", "residuals", "entropy", "iterations", "method"}
    assert d["p"][0] > d["p"][1]
