import math
from fractions import Fraction
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genentropy import (
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
from genentropy.core import entropy_rows, uniform_entropy_closed_form
from genentropy.errors import DomainError, NondegenerateParamError, RegionError

CANON = canonical_normalizer()


@pytest.mark.parametrize(
    "alpha,beta,inside",
    [
        (2.0, 0.5, True),
        (1.0, 0.0, False),
        (0.0, 1.0, False),
        (1.0, 1.0, True),
        (0.5, 2.0, True),
        (2.0, 2.0, False),
        (0.5, 0.5, False),
        (3.0, 1.0, True),
        (1.5, -0.1, False),
        (-0.1, 1.5, False),
    ],
)
def test_region_membership(alpha, beta, inside):
    assert region_contains(ParamPair(alpha, beta)) is inside


def test_grid_has_twelve_pairs_in_region():
    assert len(REGION_GRID) == 12
    assert all(region_contains(p) and p.alpha != p.beta for p in REGION_GRID)


def test_distribution_validation():
    with pytest.raises(DomainError):
        Distribution.from_values([0.5, 0.6])
    with pytest.raises(DomainError):
        Distribution.from_values([1.2, -0.2])
    with pytest.raises(DomainError):
        Distribution.from_values([])
    d = Distribution.from_values([2, 2], renormalize=True)
    assert d.probs == (0.5, 0.5)


def test_summand_exact_rational():
    # (p^2 - p) / C with C = -1 at (2, 1), p = 1/2
    assert summand(0.5, ParamPair(2.0, 1.0), CANON) == 0.25


def test_entropy_quadratic_case():
    # alpha = 2, beta = 1 gives 1 - sum p^2
    d = Distribution.from_values([0.5, 0.5])
    assert entropy(d, ParamPair(2.0, 1.0), CANON) == 0.5
    d = Distribution.from_values([0.25, 0.25, 0.5])
    assert entropy(d, ParamPair(2.0, 1.0), CANON) == pytest.approx(1 - (1 / 16 + 1 / 16 + 1 / 4), abs=1e-16)


def test_certain_distribution_has_zero_entropy():
    assert entropy(Distribution.from_values([1.0]), ParamPair(2.0, 0.5), CANON) == 0.0


def test_zero_power_convention():
    # beta = 0: 0**0 would be 1, the convention keeps the zero outcome out
    d0 = Distribution.from_values([0.5, 0.5])
    d1 = Distribution.from_values([0.5, 0.5, 0.0])
    pair = ParamPair(1.5, 0.0)
    assert entropy(d0, pair, CANON) == entropy(d1, pair, CANON)


def test_degenerate_parameters_rejected():
    d = Distribution.from_values([0.5, 0.5])
    with pytest.raises(NondegenerateParamError):
        entropy(d, ParamPair(1.0, 1.0), CANON)
    with pytest.raises(RegionError):
        entropy(d, ParamPair(3.0, 2.0), CANON)


def test_normalizer_k_validation():
    with pytest.raises(DomainError):
        canonical_normalizer(0.0)
    with pytest.raises(DomainError):
        canonical_normalizer(-1.0)


def test_canonical_normalizer_ratio():
    n = canonical_normalizer(2.0)
    assert n(3.0, 1.0) / (3.0 - 1.0) == -0.5


def _exact_entropy(probs, alpha, beta, k=1):
    # Rational oracle for integer exponents.
    c = Fraction(beta - alpha, 1) / k
    return sum((p**alpha - p**beta) / c for p in probs if p > 0)


@pytest.mark.parametrize("alpha,beta", [(3, 1), (1, 3), (4, 0), (0, 4), (2, 1)])
def test_entropy_matches_rational_oracle(alpha, beta):
    fr = [Fraction(1, 8), Fraction(3, 8), Fraction(1, 2)]
    d = Distribution.from_values([float(x) for x in fr])
    got = entropy(d, ParamPair(alpha, beta), CANON)
    assert got == pytest.approx(float(_exact_entropy(fr, alpha, beta)), rel=1e-15, abs=1e-16)


def test_shannon_entropy():
    assert shannon_entropy(Distribution.uniform(2)) == pytest.approx(math.log(2), rel=1e-15)
    assert shannon_entropy(Distribution.uniform(4), k=2.0) == pytest.approx(2 * math.log(4), rel=1e-15)


@pytest.mark.parametrize("pair", REGION_GRID)
@pytest.mark.parametrize("n", [2, 3, 7])
def test_uniform_closed_form(pair, n):
    got = entropy(Distribution.uniform(n), pair, CANON)
    assert got == pytest.approx(uniform_entropy_closed_form(n, pair, CANON), rel=1e-13)


def test_entropy_rows_agrees_with_scalar():
    rng = np.random.default_rng(3)
    rows = rng.dirichlet(np.ones(5), size=20)
    for pair in REGION_GRID:
        vec = entropy_rows(rows, pair, CANON)
        for r, v in zip(rows, vec):
            p = Distribution.from_values(r, renormalize=True)
            assert v == pytest.approx(entropy(p, pair, CANON), rel=1e-12, abs=1e-15)


def test_joint_marginals_and_conditionals():
    j = JointDistribution([[0.1, 0.2], [0.3, 0.0, 0.4]])
    assert j.marginals() == pytest.approx((0.3, 0.7))
    assert j.conditionals(1) == pytest.approx((3 / 7, 0.0, 4 / 7))


def test_custom_normalizer_is_callable():
    n = Normalizer("half", lambda a, b: (b - a) / 2.0, k=2.0)
    assert n(2.0, 1.0) == -0.5


probs_st = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8).filter(lambda xs: sum(xs) > 1e-3)


@settings(max_examples=200, deadline=None)
@given(probs_st, st.sampled_from(REGION_GRID), st.randoms(use_true_random=False))
def test_permutation_symmetry(xs, pair, rnd):
    d = Distribution.from_values(xs, renormalize=True)
    shuffled = list(d.probs)
    rnd.shuffle(shuffled)
    d2 = Distribution(tuple(shuffled))
    assert entropy(d, pair, CANON) == entropy(d2, pair, CANON)


@settings(max_examples=200, deadline=None)
@given(probs_st, st.sampled_from(REGION_GRID))
def test_entropy_nonnegative_and_below_uniform(xs, pair):
    d = Distribution.from_values(xs, renormalize=True)
    s = entropy(d, pair, CANON)
    assert s >= -1e-15
    assert s <= entropy(Distribution.uniform(len(d)), pair, CANON) + 1e-12


@settings(max_examples=100, deadline=None)
@given(probs_st, st.sampled_from(REGION_GRID))
def test_expandability_exact(xs, pair):
    d = Distribution.from_values(xs, renormalize=True)
    assert entropy(d.expand(), pair, CANON) == entropy(d, pair, CANON)


@settings(max_examples=100, deadline=None)
@given(probs_st, st.sampled_from(REGION_GRID))
def test_swap_symmetry_of_canonical_family(xs, pair):
    # (p^a - p^b)/(b - a) is symmetric in (a, b)
    d = Distribution.from_values(xs, renormalize=True)
    a = entropy(d, pair, CANON)
    b = entropy(d, pair.swapped(), CANON)
    assert a == pytest.approx(b, rel=1e-13, abs=1e-15)
