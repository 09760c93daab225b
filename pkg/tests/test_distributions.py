from __future__ import annotations

import random
from fractions import Fraction

import pytest

from hrdc.constructions import construct
from hrdc.distributions import (
    CodeSet, FpSpan, analyze, design_strength, dual_code, dual_distribution, inner_distribution, min_distance,
    pairwise_inner_distribution, thm33_distribution, whole_space,
)
from hrdc.eigen import q_explicit
from hrdc.errors import CapExceeded, InvariantViolation
from hrdc.field_tower import tower_for_q
from hrdc.hermitian import HermitianMatrix, iter_hermitian, pairing


def test_fp_span():
    S = FpSpan(3)
    assert S.insert([1, 2, 0])
    assert not S.insert([2, 1, 0])
    assert S.insert([0, 0, 1])
    assert S.dim == 2
    assert not any(S.reduce([1, 2, 2]))


def test_whole_space_distributions():
    t = tower_for_q(2, 2)
    X = whole_space(2, t)
    assert X.is_additive
    assert inner_distribution(X) == (1, 5, 10)
    assert dual_distribution(inner_distribution(X), q_explicit(2, 2)) == (16, 0, 0)
    assert design_strength((16, 0, 0)) == 2
    assert min_distance(inner_distribution(X)) == 1


def test_singleton():
    t = tower_for_q(2, 2)
    Y = CodeSet([HermitianMatrix.identity(2, t)], t)
    D = inner_distribution(Y)
    assert D == (1, 0, 0)
    assert min_distance(D) == 3
    assert not Y.is_additive


def test_additivity_detection():
    t = tower_for_q(2, 2)
    X = list(iter_hermitian(2, t))
    Y = construct("zero-diag", 2, 2, 2)
    assert Y.is_additive and len(Y.generators) == 2
    # translate away from zero, and a set of the right size that is not a group
    Z = CodeSet([A + HermitianMatrix.identity(2, t) for A in Y], t)
    assert not Z.is_additive
    W = CodeSet([X[0], X[1], X[2], X[7]], t)
    assert not W.is_additive


def test_census_equals_pairwise_for_additive_codes():
    for fam, n, q, d in [("thm41", 3, 2, 2), ("zero-diag", 3, 2, 2), ("sym-dn", 2, 3, 2)]:
        Y = construct(fam, n, q, d)
        assert inner_distribution(Y) == pairwise_inner_distribution(Y)


def test_pairwise_oracle_on_random_subset():
    t = tower_for_q(3, 2)
    X = list(iter_hermitian(2, t))
    S = random.Random(3).sample(X, 12)
    Y = CodeSet(S, t)
    counts = [0, 0, 0]
    for A in S:
        for B in S:
            counts[(A - B).rank()] += 1
    assert inner_distribution(Y) == tuple(Fraction(c, 12) for c in counts)
    Dp = dual_distribution(inner_distribution(Y), q_explicit(2, 3))
    assert Dp[0] == 12
    assert all(x >= 0 for x in Dp)


def test_negative_dual_entry_raises():
    with pytest.raises(InvariantViolation):
        dual_distribution((1, 3, 0), q_explicit(2, 2))


def test_dual_code_duality():
    Y = construct("zero-diag", 2, 2, 2)
    Yp = dual_code(Y)
    assert len(Y) * len(Yp) == 16
    for A in Y:
        for B in Yp:
            assert pairing(A, B) == 0
    Dp = dual_distribution(inner_distribution(Y), q_explicit(2, 2))
    assert inner_distribution(Yp) == tuple(x / len(Y) for x in Dp)
    assert dual_code(Yp) == Y


def test_dual_code_needs_additive_and_cap():
    t = tower_for_q(2, 2)
    with pytest.raises(ValueError):
        dual_code(CodeSet([HermitianMatrix.identity(2, t)], t))
    with pytest.raises(CapExceeded):
        dual_code(construct("thm41", 3, 2, 2), cap=100)


@pytest.mark.parametrize("n,d,q,size", [(3, 3, 2, 8), (3, 1, 2, 512), (5, 3, 2, 32768), (3, 3, 3, 27)])
def test_forced_distribution_sums_and_is_nonnegative(n, d, q, size):
    D = thm33_distribution(n, d, q, size)
    assert sum(D) == size
    assert D[0] == 1 and all(x == 0 for x in D[1:d])


def test_forced_distribution_examples():
    assert thm33_distribution(3, 3, 2, 8) == (1, 0, 0, 7)
    with pytest.raises(ValueError):
        thm33_distribution(4, 3, 2, 4)


def test_analyze_keys():
    rep = analyze(construct("thm42", 3, 2, 3))
    assert rep["inner"] == [1, 0, 0, 7]
    assert rep["min_distance"] == 3 and rep["design_strength"] >= 1 and rep["additive"]
