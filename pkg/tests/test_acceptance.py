"""Acceptance criteria, one test per criterion, each with its time budget.

Every criterion records a PASS/FAIL line that ``conftest.py`` prints in the
terminal summary.  Running this file as a script prints the same lines.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter

import pytest

from hrdc.bounds import bound_additive, bound_even_d, max_code_search
from hrdc.constructions import construct, construct_thm43
from hrdc.distributions import (
    design_strength, dual_code, dual_distribution, inner_distribution, min_distance, thm33_distribution,
)
from hrdc.eigen import count_rank, q_direct, q_explicit, q_recurrence, verify_identities
from hrdc.field_tower import tower_for_q
from hrdc.hermitian import iter_hermitian

RESULTS: dict[str, tuple[bool, str]] = {}


def record(key: str, fn) -> None:
    start = time.perf_counter()
    try:
        detail = fn() or ""
    except AssertionError as exc:
        RESULTS[key] = (False, f"{str(exc).splitlines()[0]} ({time.perf_counter() - start:.2f}s)")
        raise
    RESULTS[key] = (True, f"{detail} ({time.perf_counter() - start:.2f}s)".strip())


def within(start: float, budget: float) -> None:
    took = time.perf_counter() - start
    assert took < budget, f"took {took:.2f}s, budget {budget}s"


# ---------------------------------------------------------------------------


def c1_eigenvalue_agreement():
    start = time.perf_counter()
    for n in range(1, 7):
        for q in (2, 3, 4, 5):
            assert q_explicit(n, q).rows == q_recurrence(n, q).rows, (n, q)
    for n, q in ((1, 2), (1, 3), (2, 2), (2, 3)):
        assert q_direct(n, q).rows == q_explicit(n, q).rows, (n, q)
    within(start, 10)
    return "24 explicit/recurrence pairs, 4 direct tables"


def c2_identity_suite():
    start = time.perf_counter()
    needed = {"inversion_system", "delta_inversion", "q_binomial_theorem", "pascal"}
    for n in range(1, 7):
        for q in (2, 3, 4, 5):
            rep = verify_identities(n, q)
            assert rep.ok, rep.to_json()
            assert needed <= set(rep.checked)
    within(start, 10)


def c3_rank_counts():
    start = time.perf_counter()
    for n, q in ((1, 2), (2, 2), (2, 3), (3, 2)):
        census = Counter(A.rank() for A in iter_hermitian(n, tower_for_q(q, n)))
        assert [census[k] for k in range(n + 1)] == [count_rank(n, q, k) for k in range(n + 1)], (n, q)
    assert [count_rank(2, 2, k) for k in range(3)] == [1, 5, 10]
    assert sum(count_rank(3, 2, k) for k in range(4)) == 512
    within(start, 5)


def c4_construction_sizes():
    start = time.perf_counter()
    cases = [("thm41", 3, 2, 2), ("thm41", 4, 3, 2), ("thm42", 3, 3, 2), ("thm42", 5, 3, 2),
             ("zero-diag", 3, 2, 2), ("sym-dn", 4, 4, 2)]
    for family, n, d, q in cases:
        Y = construct(family, n, q, d)
        assert len(Y) == q ** (n * (n - d + 1)), (family, n, d, q, len(Y))
        assert Y.is_additive, family
        assert min_distance(inner_distribution(Y)) >= d, family
    within(start, 120)


def c5_x32_listed_distributions():
    start = time.perf_counter()
    listed = {(1, 0, 21, 42), (1, 0, 29, 34), (1, 0, 37, 26), (1, 0, 45, 18)}
    D = tuple(int(x) for x in inner_distribution(construct("thm41", 3, 2, 2)))
    assert D in listed, D
    within(start, 5)
    return f"inner distribution {D}"


def c6_odd_d_rigidity():
    start = time.perf_counter()
    Y = construct("thm42", 3, 2, 3)
    assert len(Y) == bound_additive(3, 3, 2) == 8
    D = inner_distribution(Y)
    assert design_strength(dual_distribution(D, q_explicit(3, 2))) >= 1
    assert D == thm33_distribution(3, 3, 2, 8) == (1, 0, 0, 7)
    within(start, 1)


def c7_nonadditive_exceedance():
    start = time.perf_counter()
    Y = construct_thm43(2, 2)
    assert len(Y) == 5 > bound_additive(2, 2, 2) == 4
    assert all((A - B).rank() == 2 for A, B in itertools.combinations(Y, 2))
    Y = construct_thm43(4, 2)
    assert len(Y) == 17 > bound_additive(4, 4, 2) == 16
    assert min((A - B).rank() for A, B in itertools.combinations(Y, 2)) == 4
    within(start, 5)


def c8_search_optimum():
    start = time.perf_counter()
    res = max_code_search(2, 2, 2)
    assert res.optimal and res.size == 5
    within(start, 1)


def c8_extended_search_q3():
    start = time.perf_counter()
    res = max_code_search(2, 3, 2, time_cap=600)
    assert res.optimal, "search did not finish"
    within(start, 600)
    assert res.size == 16, f"proved maximum is {res.size}, expected 16"


def c9_even_d_closed_form():
    start = time.perf_counter()
    for q in (2, 3, 4, 5, 7):
        val, _ = bound_even_d(2, 2, q)
        assert val == q**3 - q**2 + q, q
    within(start, 1)


def c10_duality():
    start = time.perf_counter()
    Y = construct("zero-diag", 2, 2, 2)
    Yp = dual_code(Y)
    assert len(Y) * len(Yp) == 16
    Dp = dual_distribution(inner_distribution(Y), q_explicit(2, 2))
    assert inner_distribution(Yp) == tuple(x / len(Y) for x in Dp)
    within(start, 1)


CRITERIA = [
    ("1 eigenvalue triple agreement", c1_eigenvalue_agreement),
    ("2 identity suite", c2_identity_suite),
    ("3 rank-class counts", c3_rank_counts),
    ("4 construction sizes and distances", c4_construction_sizes),
    ("5 X(3,2) distribution membership", c5_x32_listed_distributions),
    ("6 odd-d rigidity", c6_odd_d_rigidity),
    ("7 non-additive exceedance", c7_nonadditive_exceedance),
    ("8 search optimum X(2,2)", c8_search_optimum),
    ("9 even-d closed form", c9_even_d_closed_form),
    ("10 duality suite", c10_duality),
]
EXTENDED = ("8x search optimum X(2,3) = 16 (extended)", c8_extended_search_q3)


@pytest.mark.parametrize("key,fn", CRITERIA, ids=[k.split()[0] for k, _ in CRITERIA])
def test_criterion(key, fn):
    record(key, fn)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="exhaustive search proves the maximum 2-code in X(2,3) has 15 "
                                       "elements, which also equals the partial-spread bound q(q^2+1)/2")
def test_criterion_8_extended():
    record(*EXTENDED)


def test_x23_maximum_agrees_with_independent_clique_solver():
    """The value the extended criterion actually yields, against networkx."""
    import networkx as nx

    t = tower_for_q(3, 2)
    X = list(iter_hermitian(2, t))
    G = nx.Graph()
    G.add_nodes_from(range(len(X)))
    G.add_edges_from((a, b) for a, b in itertools.combinations(range(len(X)), 2) if (X[a] - X[b]).rank() == 2)
    _, size = nx.max_weight_clique(G, weight=None)
    res = max_code_search(2, 3, 2)
    assert res.optimal and res.size == size == 15
    assert all((A - B).rank() == 2 for A, B in itertools.combinations(res.witness, 2))


def summary_lines() -> list[str]:
    out = []
    for key, _ in CRITERIA + [EXTENDED]:
        if key in RESULTS:
            ok, detail = RESULTS[key]
            out.append(f"criterion {key}: {'PASS' if ok else 'FAIL'} {detail}")
        else:
            out.append(f"criterion {key}: NOT RUN")
    return out


if __name__ == "__main__":
    for key, fn in CRITERIA + [EXTENDED]:
        try:
            record(key, fn)
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
