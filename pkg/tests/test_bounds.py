from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import pytest

from hrdc.bounds import (
    all_bounds, bound_additive, bound_even_d, bound_external, check_code, max_code_search,
)
from hrdc.constructions import construct
from hrdc.distributions import CodeSet
from hrdc.errors import CapExceeded
from hrdc.field_tower import tower_for_q
from hrdc.hermitian import HermitianMatrix, iter_hermitian


def clique_oracle(n: int, q: int, d: int) -> int:
    t = tower_for_q(q, n)
    X = list(iter_hermitian(n, t))
    G = nx.Graph()
    G.add_nodes_from(range(len(X)))
    G.add_edges_from((a, b) for a, b in itertools.combinations(range(len(X)), 2) if (X[a] - X[b]).rank() >= d)
    _, size = nx.max_weight_clique(G, weight=None)
    return size


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_even_d_closed_form_at_n2(q):
    val, fl = bound_even_d(2, 2, q)
    assert val == q**3 - q**2 + q and fl == val


@pytest.mark.parametrize("n,d,q", [(4, 2, 2), (4, 4, 3), (6, 4, 2), (3, 2, 2)])
def test_even_d_is_rational_and_above_additive(n, d, q):
    val, fl = bound_even_d(n, d, q)
    assert isinstance(val, Fraction)
    assert fl >= bound_additive(n, d, q)


def test_even_d_rejects_odd_d():
    with pytest.raises(ValueError):
        bound_even_d(3, 3, 2)


def test_external_bounds():
    names = [e.name for e in bound_external(2, 2, 3).entries]
    assert names == ["de-beule-klein-metsch-storme", "ihringer"]
    assert bound_external(2, 2, 3).entries[0].value == 15
    assert [e.name for e in bound_external(3, 3, 2).entries] == ["vanhove", "ihringer"]
    assert bound_external(3, 2, 2).entries == []
    assert bound_external(1, 1, 3).entries == []


def test_report_json_flags_reported_maximum():
    rep = all_bounds(2, 2, 3).to_json()
    assert rep["reported_maximum"] == 16
    assert rep["bounds_below_reported_maximum"] == ["de-beule-klein-metsch-storme"]
    assert all_bounds(2, 2, 2).to_json()["bounds_below_reported_maximum"] == []


def test_best_bound():
    rep = all_bounds(2, 2, 2)
    assert rep.best(additive=True) == 4
    assert rep.best(additive=False) == 5


@pytest.mark.parametrize("n,q,d", [(1, 2, 1), (1, 3, 1), (2, 2, 1), (2, 2, 2), (2, 3, 2)])
def test_search_matches_networkx(n, q, d):
    res = max_code_search(n, q, d)
    assert res.optimal
    assert res.size == clique_oracle(n, q, d)
    assert check_code(res.witness, d)["min_distance"] >= d


def test_search_x22_and_x32():
    assert max_code_search(2, 2, 2).size == 5
    r = max_code_search(2, 3, 2)
    assert r.size == 15 and r.optimal


def test_search_caps():
    with pytest.raises(CapExceeded):
        max_code_search(3, 3, 3)
    res = max_code_search(2, 3, 2, node_cap=3)
    assert not res.optimal


def test_check_code_forced_distribution():
    rep = check_code(construct("thm42", 3, 2, 3), 3)
    assert rep["ok"] and rep["meets_additive_bound"] and rep["forced_distribution_match"]


def test_check_code_flags_distance_and_notes_nonadditive_excess():
    rep = check_code(construct("thm43", 2, 2), 2)
    assert rep["ok"] and not rep["additive"]
    assert any("additive" in note for note in rep["notes"])
    t = tower_for_q(2, 2)
    bad = CodeSet([HermitianMatrix.zero(2, t), HermitianMatrix.diagonal_rank(2, 1, t)], t)
    assert not check_code(bad, 2)["ok"]
