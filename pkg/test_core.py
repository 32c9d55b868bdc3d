#!/usr/bin/env python3
"""
Core Tests for pfgr

Instances, generators, decomposition validation and the brute-force oracles,
with networkx as an independent reference for distances.
"""

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfgr.exceptions import InfiniteDiameterError, RefusalError
from pfgr.generators import gen_cnf, gen_ov, gen_partial_ktree
from pfgr.instances import CNFInstance, Label, LabeledGraph, OVInstance, TreeDecomposition
from pfgr.models import RoleKind, TDProperty
from pfgr.oracles import count_orthogonal_pairs, diameter_brute, ov_brute, sat_brute, shortest_paths
from pfgr.utils.validators import validate_td


def to_networkx(graph: LabeledGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.vertex_count))
    for (u, v), w in graph.edges.items():
        g.add_edge(u, v, weight=w)
    return g


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


# --- Instances ---


def test_ov_instance_rejects_bad_shapes():
    """Test that dimensions, empty sets and ragged vectors are rejected."""
    with pytest.raises(ValueError):
        OVInstance(0, ((1,),), ((0,),))
    with pytest.raises(ValueError):
        OVInstance(2, (), ((0, 1),))
    with pytest.raises(ValueError):
        OVInstance(2, ((1, 0),), ((0,),))


def test_cnf_instance_rejects_out_of_range_literals():
    with pytest.raises(ValueError):
        CNFInstance(2, (frozenset({3}),))
    with pytest.raises(ValueError):
        CNFInstance(2, (frozenset(),))


def test_labeled_graph_keeps_lighter_parallel_edge():
    graph = LabeledGraph.from_edges(3, [(0, 1, 5), (1, 0, 2), (1, 2)])
    assert graph.edges == {(0, 1): 2, (1, 2): 1}
    assert not graph.is_unit_weight
    assert graph.adjacency[1] == {0: 2, 2: 1}


def test_labeled_graph_rejects_loops_and_duplicate_unique_roles():
    with pytest.raises(ValueError):
        LabeledGraph.from_edges(2, [(1, 1)])
    with pytest.raises(ValueError):
        LabeledGraph.from_edges(2, [(0, 1)], {0: Label(RoleKind.X), 1: Label(RoleKind.X)})


def test_label_tokens():
    assert Label(RoleKind.A, 0).token == "A1"
    assert Label.parse("c3") == Label(RoleKind.C, 2)
    assert Label.parse("X").token == "X"
    with pytest.raises(ValueError):
        Label.parse("Q1")


# --- Generators ---


def test_gen_ov_is_deterministic_per_seed():
    assert gen_ov(30, 5, seed=7) == gen_ov(30, 5, seed=7)
    assert gen_ov(30, 5, seed=7) != gen_ov(30, 5, seed=8)


@pytest.mark.parametrize("seed", range(10))
def test_gen_ov_planting_forces_a_pair(seed):
    instance = gen_ov(25, 8, plant=True, seed=seed)
    assert instance.n_a == instance.n_b == 25
    assert instance.d == 8
    assert ov_brute(instance) is not None


def test_gen_cnf_shapes():
    cnf = gen_cnf(10, 25, k=3, seed=4)
    assert cnf.num_vars == 10 and cnf.num_clauses == 25
    assert all(len(clause) == 3 for clause in cnf.clauses)
    assert gen_cnf(10, 25, seed=4) == cnf


@pytest.mark.parametrize("seed", range(8))
def test_partial_ktree_is_connected_and_decomposition_valid(seed):
    graph, td = gen_partial_ktree(40, 3, keep_prob=0.3, seed=seed)
    assert nx.is_connected(to_networkx(graph))
    report = validate_td(graph, td)
    assert report.ok, report.summary()
    assert td.width == 3


def test_full_ktree_edge_count():
    graph, _ = gen_partial_ktree(20, 2, keep_prob=1.0, seed=0)
    # (k+1 choose 2) for the start clique plus k edges per later vertex.
    assert graph.edge_count == 3 + 2 * 17


# --- Decomposition validation ---


def test_validate_path_decomposition():
    graph = path_graph(4)
    td = TreeDecomposition((frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})), frozenset({(0, 1), (1, 2)}))
    report = validate_td(graph, td)
    assert report.ok
    assert report.width == 1


def test_validate_reports_each_broken_property():
    graph = path_graph(4)
    missing_edge = TreeDecomposition((frozenset({0, 1}), frozenset({2, 3})), frozenset({(0, 1)}))
    assert set(validate_td(graph, missing_edge).failures()) == {TDProperty.EDGE_COVERAGE}

    missing_vertex = TreeDecomposition((frozenset({0, 1}), frozenset({1, 2})), frozenset({(0, 1)}))
    failures = validate_td(graph, missing_vertex).failures()
    assert TDProperty.VERTEX_COVERAGE in failures

    split = TreeDecomposition(
        (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3}), frozenset({0, 3})),
        frozenset({(0, 1), (1, 2), (2, 3)}),
    )
    assert TDProperty.CONNECTIVITY in validate_td(graph, split).failures()

    forest = TreeDecomposition((frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})), frozenset({(0, 1)}))
    assert TDProperty.TREE in validate_td(graph, forest).failures()


def test_validate_rejects_cycle_in_bag_tree():
    graph = path_graph(3)
    td = TreeDecomposition(
        (frozenset({0, 1}), frozenset({1, 2}), frozenset({1})), frozenset({(0, 1), (1, 2), (0, 2)})
    )
    assert TDProperty.TREE in validate_td(graph, td).failures()


# --- Oracles ---


def test_ov_brute_returns_least_pair():
    instance = OVInstance(2, ((1, 1), (1, 0)), ((1, 0), (0, 1)))
    assert ov_brute(instance) == (1, 1)
    assert count_orthogonal_pairs(instance) == 1
    assert ov_brute(OVInstance(1, ((1,),), ((1,),))) is None


@given(
    d=st.integers(min_value=1, max_value=130),
    n_a=st.integers(min_value=1, max_value=6),
    n_b=st.integers(min_value=1, max_value=6),
    data=st.data(),
)
def test_orthogonal_pair_count_matches_pairwise_scan(d, n_a, n_b, data):
    """Test the packed scan across word boundaries and block sizes against a direct count."""
    vector = st.lists(st.sampled_from([0, 0, 0, 1]), min_size=d, max_size=d).map(tuple)
    set_a = data.draw(st.lists(vector, min_size=n_a, max_size=n_a))
    set_b = data.draw(st.lists(vector, min_size=n_b, max_size=n_b))
    instance = OVInstance(d, tuple(set_a), tuple(set_b))
    expected = sum(1 for a in set_a for b in set_b if not any(x and y for x, y in zip(a, b)))
    assert count_orthogonal_pairs(instance) == expected
    assert count_orthogonal_pairs(instance, block_pairs=1) == expected


def test_sat_brute_order_and_cap(monkeypatch):
    cnf = CNFInstance(2, (frozenset({1, 2}),))
    assert sat_brute(cnf) == (False, True)
    assert sat_brute(CNFInstance(1, (frozenset({1}), frozenset({-1})))) is None

    from pfgr import config

    monkeypatch.setattr(config, "SAT_VAR_CAP", 3)
    with pytest.raises(RefusalError):
        sat_brute(CNFInstance(4, (frozenset({1}),)))


def test_diameter_brute_basic_shapes():
    assert diameter_brute(path_graph(4)) == 3
    assert diameter_brute(LabeledGraph(1)) == 0
    cycle = LabeledGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert diameter_brute(cycle) == 3
    with pytest.raises(InfiniteDiameterError):
        diameter_brute(LabeledGraph.from_edges(3, [(0, 1)]))


@given(
    n=st.integers(min_value=2, max_value=14),
    data=st.data(),
)
def test_shortest_paths_match_networkx(n, data):
    """Test BFS/Dijkstra distances against networkx on random weighted graphs."""
    edges = data.draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, 4)).filter(lambda e: e[0] != e[1]),
            max_size=3 * n,
        )
    )
    graph = LabeledGraph.from_edges(n, edges)
    reference = dict(nx.all_pairs_dijkstra_path_length(to_networkx(graph)))
    table = shortest_paths(graph, range(n), workers=2)
    for s in range(n):
        for v in range(n):
            expected = reference[s].get(v, float("inf"))
            assert table[s][v] == expected
