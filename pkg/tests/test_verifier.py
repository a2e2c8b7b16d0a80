import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genentropy import (
    REGION_GRID,
    Distribution,
    JointDistribution,
    LimitPath,
    Normalizer,
    ParamPair,
    axiom_suite,
    canonical_normalizer,
    check_continuity_probe,
    check_expandability,
    check_maximality,
    check_normalizer_properties,
    check_shannon_additivity,
    check_shannon_limit,
    entropy,
    normalizer_a,
    normalizer_b,
)
from genentropy.errors import DomainError, RegionError
from genentropy.serialization import dumps
from genentropy.verifier import default_paths, random_joint, sample_simplex

CANON = canonical_normalizer()
HALF = Distribution((0.5, 0.5))


def _brute_additivity(joint, pair):
    # Both sides written out directly from the joint table, with 0**x = 0.
    a, b = pair.alpha, pair.beta
    c = b - a
    pw = lambda p, x: 0.0 if p == 0 else p**x
    s = lambda p: (pw(p, a) - pw(p, b)) / c
    lhs = sum(s(p) for row in joint.rows for p in row)
    rhs = 0.0
    for row in joint.rows:
        pi = sum(row)
        if pi == 0:
            continue
        q = [x / pi for x in row]
        rhs += pw(pi, a) * sum(s(x) for x in q) + s(pi) * sum(pw(x, b) for x in q)
    return lhs, rhs


@pytest.mark.parametrize("pair", REGION_GRID)
def test_additivity_against_brute_force(pair):
    rng = np.random.default_rng(7)
    for _ in range(20):
        joint = random_joint(rng)
        lhs, rhs = _brute_additivity(joint, pair)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-13)
        rep = check_shannon_additivity(joint, pair, CANON)
        assert rep.passed
        assert rep.details["lhs"] == pytest.approx(lhs, rel=1e-13, abs=1e-15)


def test_additivity_with_zero_row_and_zero_entries():
    joint = JointDistribution([[0.0, 0.0], [0.25, 0.0, 0.25], [0.5]])
    for pair in REGION_GRID:
        assert check_shannon_additivity(joint, pair, CANON).passed


def test_additivity_identity_is_independent_of_the_constant():
    # C only rescales both sides for a fixed pair, so any nonzero value works.
    odd = Normalizer("odd", lambda a, b: (b - a) * (1 + (a - 1) ** 2), 1.0)
    joint = random_joint(np.random.default_rng(0))
    for pair in REGION_GRID:
        assert check_shannon_additivity(joint, pair, odd).passed


def test_sample_simplex_rows_sum_to_one():
    x = sample_simplex(np.random.default_rng(1), 5, 100)
    assert x.shape == (100, 5)
    assert np.allclose(x.sum(axis=1), 1.0, atol=1e-15)
    assert (x >= 0).all()


def test_maximality_passes_and_detects():
    assert check_maximality(ParamPair(2.0, 0.5), CANON, 4, 500, 0).passed
    # flipping the sign of C turns the maximum into a minimum
    flipped = Normalizer("flipped", lambda a, b: a - b, 1.0)
    assert not check_maximality(ParamPair(2.0, 0.5), flipped, 4, 500, 0).passed
    with pytest.raises(DomainError):
        check_maximality(ParamPair(2.0, 0.5), CANON, 1, 10, 0)


def test_expandability_exact_zero():
    rep = check_expandability(Distribution((0.2, 0.3, 0.5)), ParamPair(0.0, 1.5), CANON)
    assert rep.max_residual == 0.0 and rep.passed


def test_limit_path_validation():
    with pytest.raises(RegionError):
        LimitPath.slope(0.5)
    with pytest.raises(DomainError):
        LimitPath("bad", lambda t: 1 + t, lambda t: 1 - t, (1e-2, 1e-1))
    with pytest.raises(DomainError):
        LimitPath.slope(1.0)
    paths, skipped = default_paths()
    assert skipped == [0.5, 2.0]
    assert [p.label for p in paths] == ["m=-2.0", "m=-1.0", "m=-0.5", "m=0.0"]


def test_shannon_limit_canonical():
    rep = check_shannon_limit(HALF, CANON, LimitPath.slope(-1.0), 1.0)
    assert rep.passed
    errors = rep.details["errors"]
    assert errors[-1] <= 1e-6
    assert all(b < a for a, b in zip(errors[:4], errors[1:4]))


def test_shannon_limit_fails_for_b():
    rep = check_shannon_limit(HALF, normalizer_b(), LimitPath.slope(0.0), 1.0)
    assert not rep.passed
    assert rep.max_residual == pytest.approx(math.log(2), rel=1e-4)


def test_continuity_probe():
    assert check_continuity_probe(HALF, CANON, ParamPair(2.0, 0.5), 1e-2).passed
    assert check_continuity_probe(HALF, CANON, ParamPair(1.0, 1.0), 1e-3).passed
    rep = check_continuity_probe(HALF, normalizer_b(), ParamPair(1.0, 1.0), 1e-3)
    assert not rep.passed
    assert rep.details["ratio"] == pytest.approx(1.0, abs=1e-2)
    with pytest.raises(DomainError):
        check_continuity_probe(HALF, CANON, ParamPair(2.0, 0.5), 0.0)


def test_normalizer_properties_canonical_pass():
    rep = check_normalizer_properties(CANON)
    assert rep.passed
    assert rep.details["exact_antisymmetry_residual"] == 0.0
    assert rep.details["skipped_slopes"] == [0.5, 2.0]


def test_normalizer_properties_b_fails_only_on_limit():
    rep = check_normalizer_properties(normalizer_b())
    assert not rep.passed
    assert all(d.startswith("III'") for d, _ in rep.failures)
    info = rep.details["informational_III_IV"]
    assert info["implied_k_from_dalpha"] == pytest.approx(2.0, rel=1e-6)
    assert info["implied_k_from_dbeta"] == pytest.approx(2.0, rel=1e-6)


def test_normalizer_properties_a_fails_on_zero_line_and_slopes():
    rep = check_normalizer_properties(normalizer_a())
    labels = [d for d, _ in rep.failures]
    assert any(d.startswith("II: C(1.0, 0.5)") for d in labels)
    assert any(d.startswith("III'") for d in labels)
    limits = rep.details["path_limits"]
    # slope m gives -1/(k (1 - m)) times the same alpha-only factor
    assert limits["m=-1.0"] == pytest.approx(limits["m=0.0"] / 2, rel=1e-6)


def test_axiom_suite_canonical_all_pass_and_deterministic():
    a = axiom_suite(CANON, seed=5, joints=30, samples=200)
    b = axiom_suite(CANON, seed=5, joints=30, samples=200)
    assert all(r.passed for r in a), [r.name for r in a if not r.passed]
    assert [r.name for r in a][:5] == [
        "tgsk3_additivity",
        "tgsk2_maximality",
        "tgsk4_expandability",
        "tgsk1_continuity",
        "tgsk1_continuity_at_1_1",
    ]
    assert dumps([r.to_dict() for r in a]) == dumps([r.to_dict() for r in b])


def test_report_dict_shape():
    rep = check_expandability(HALF, ParamPair(2.0, 0.5), CANON)
    assert rep.to_dict() == {
        "name": "tgsk4_expandability",
        "trials": 1,
        "max_residual": 0.0,
        "verdict": "pass",
        "failures": [],
    }


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(REGION_GRID))
def test_additivity_property(seed, pair):
    joint = random_joint(np.random.default_rng(seed))
    assert check_shannon_additivity(joint, pair, canonical_normalizer(1.7)).passed
