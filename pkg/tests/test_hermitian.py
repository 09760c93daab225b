from __future__ import annotations

import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from hrdc.constructions import thm41_form, thm42_form
from hrdc.field_tower import subfield_fqn, tower_for_q
from hrdc.hermitian import (
    CyclotomicInteger, HermitianForm, HermitianMatrix, char_sum, form_to_matrix, hermitian_count,
    iter_hermitian, pairing, radical_dim,
)


def kernel_rank(A: HermitianMatrix) -> int:
    """Rank from the number of solutions of A x = 0, by brute force."""
    F = A.tower.fq2
    n = A.n
    zeros = 0
    for x in itertools.product(range(F.order), repeat=n):
        if all(_dot(r, x, F) == 0 for r in A.rows):
            zeros += 1
    dim = 0
    while F.order**dim < zeros:
        dim += 1
    assert F.order**dim == zeros
    return n - dim


def _dot(r, x, F):
    s = 0
    for a, b in zip(r, x):
        s = F.add_table[s][F.mul_table[a][b]]
    return s


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)])
def test_iter_hermitian_is_the_whole_space(n, q):
    t = tower_for_q(q, n)
    mats = list(iter_hermitian(n, t))
    assert len(mats) == len(set(mats)) == hermitian_count(n, q) == q ** (n * n)
    for A in mats[:: max(1, len(mats) // 50)]:
        HermitianMatrix(A.rows, t)  # validates A* = A


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_rank_matches_kernel_count(n, q):
    t = tower_for_q(q, n)
    mats = list(iter_hermitian(n, t))
    for A in random.Random(0).sample(mats, min(60, len(mats))):
        assert A.rank() == kernel_rank(A)


def test_rank_one_count_in_x22():
    t = tower_for_q(2, 2)
    assert Counter(A.rank() for A in iter_hermitian(2, t)) == {0: 1, 1: 5, 2: 10}


def test_non_hermitian_rejected():
    t = tower_for_q(2, 2)
    with pytest.raises(ValueError):
        HermitianMatrix(((0, 1), (0, 0)), t)
    with pytest.raises(ValueError):
        HermitianMatrix(((2, 0), (0, 0)), t)  # diagonal outside F_q


def test_scale_needs_fq_scalar():
    t = tower_for_q(2, 2)
    with pytest.raises(ValueError):
        HermitianMatrix.identity(2, t).scale(2)


def test_json_roundtrip():
    t = tower_for_q(4, 2)
    for A in itertools.islice(iter_hermitian(2, t), 0, 4096, 97):
        assert HermitianMatrix.from_json(A.to_json(), t) == A


def test_congruence_preserves_rank():
    t = tower_for_q(3, 2)
    P = ((1, 4), (0, 2))
    for A in itertools.islice(iter_hermitian(2, t), 0, 81, 5):
        B = A.congruent(P)
        HermitianMatrix(B.rows, t)
        assert B.rank() == A.rank()


def _random_top(t, rng):
    return t.from_index_raw(rng.randrange(t.top_order))


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_form_rank_equals_n_minus_radical(n, q):
    t = tower_for_q(q, n)
    rng = random.Random(n * 10 + q)
    for _ in range(25):
        count = rng.randint(1, max(1, n // 2))
        H = thm41_form(t, [_random_top(t, rng) for _ in range(count)])
        A = form_to_matrix(H)
        assert A.rank() == n - radical_dim(H)


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3)])
def test_thm42_form_is_hermitian(n, q):
    t = tower_for_q(q, n)
    rng = random.Random(5)
    sub = [x.value for x in subfield_fqn(t)]
    for _ in range(10):
        H = thm42_form(t, rng.choice(sub), [_random_top(t, rng)])
        A = form_to_matrix(H)
        assert A.rank() == n - radical_dim(H)


def test_non_hermitian_form_is_reported():
    t = tower_for_q(2, 2)
    # x y^q with a non-subfield coefficient is not Hermitian in general
    H = HermitianForm(((t.basis[1], 0, 1),), t)
    with pytest.raises(ValueError):
        form_to_matrix(H)


def test_cyclotomic_integer_arithmetic():
    z = CyclotomicInteger((3, 1, 1))
    assert z.to_int() == 2
    assert z == z.shift(4)
    assert hash(z) == hash(z.shift(-1))
    assert (z + CyclotomicInteger((0, 2, 2))).to_int() == 0
    with pytest.raises(ValueError):
        CyclotomicInteger((1, 0, 2)).to_int()


def test_character_sum_over_whole_space_is_a_delta():
    t = tower_for_q(3, 2)
    X = list(iter_hermitian(2, t))
    zero = HermitianMatrix.zero(2, t)
    assert char_sum(X, zero).to_int() == len(X)
    for B in X[1:20]:
        assert char_sum(X, B).to_int() == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_pairing_is_bi_additive(i, j, k):
    t = tower_for_q(3, 2)
    X = list(itertools.islice(iter_hermitian(2, t), 81))
    A, B, C = X[i], X[j], X[k]
    assert pairing(A + B, C) == (pairing(A, C) + pairing(B, C)) % 3
    assert pairing(A, B) == pairing(B, A)
