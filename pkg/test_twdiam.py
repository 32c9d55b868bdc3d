#!/usr/bin/env python3
"""
Treewidth Diameter Tests for pfgr

Centroid choice, the cross-component maximization and the full recursion,
checked against the all-pairs oracle on random partial k-trees and on the OV
reduction graph.
"""

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfgr import config
from pfgr.bench import run_ov_scaling, scaling_slope
from pfgr.dominance import satisfies
from pfgr.exceptions import InfiniteDiameterError, InvalidDecompositionError, RefusalError
from pfgr.generators import gen_ov, gen_partial_ktree
from pfgr.instances import LabeledGraph, OVInstance, TreeDecomposition
from pfgr.oracles import diameter_brute, ov_brute, shortest_paths, single_source_distances
from pfgr.reductions import ov_graph_decomposition, ov_to_diameter
from pfgr.twdiam import (
    SolveStats,
    _naive_cross_max,
    centroid_bag,
    cross_pair_max,
    diameter_td,
    minimizer_points,
    minimizer_thresholds,
    solve_ov_via_diameter,
)


@pytest.fixture
def deep_recursion(monkeypatch):
    """Small base cases and no crossover, so every level of the engine runs."""
    monkeypatch.setattr(config, "BASE_CASE_MIN", 1)
    monkeypatch.setattr(config, "CROSSOVER_PAIRS", 0)


def path_decomposition(n: int) -> TreeDecomposition:
    return TreeDecomposition(
        tuple(frozenset({i, i + 1}) for i in range(n - 1)), frozenset((i, i + 1) for i in range(n - 2))
    )


def reweighted(graph: LabeledGraph, seed: int) -> LabeledGraph:
    rng = np.random.default_rng(seed)
    weights = rng.integers(1, 6, size=graph.edge_count)
    return LabeledGraph.from_edges(
        graph.vertex_count, [(u, v, int(w)) for (u, v), w in zip(sorted(graph.edges), weights)]
    )


# --- Centroid ---


def test_centroid_of_path_is_middle_bag():
    td = path_decomposition(4)
    assert centroid_bag(td, range(3)) == 1
    assert centroid_bag(td, {2}) == 2


def test_centroid_of_star_is_center():
    td = TreeDecomposition(tuple(frozenset({i}) for i in range(5)), frozenset((i, 4) for i in range(4)))
    assert centroid_bag(td, range(5)) == 4


def test_centroid_balances_random_tree():
    rng = np.random.default_rng(5)
    tree_edges = frozenset((int(rng.integers(0, i)), i) for i in range(1, 31))
    td = TreeDecomposition(tuple(frozenset({i}) for i in range(31)), tree_edges)
    center = centroid_bag(td, range(31))

    seen = {center}
    for start in td.bag_neighbors[center]:
        component, stack = {start}, [start]
        while stack:
            for j in td.bag_neighbors[stack.pop()]:
                if j not in seen and j not in component:
                    component.add(j)
                    stack.append(j)
        seen |= component
        assert len(component) <= 31 // 2


def test_centroid_rejects_empty_or_disconnected_active_set():
    td = path_decomposition(5)
    with pytest.raises(ValueError):
        centroid_bag(td, [])
    with pytest.raises(ValueError):
        centroid_bag(td, [0, 2])


# --- Cross-component maximization ---


def test_cross_pair_max_example():
    assert cross_pair_max([(1, 5)], [(4, 1)]) == 5
    assert cross_pair_max([(1, 5)], [(4, 1)], crossover=0) == 5
    assert cross_pair_max([], [(4, 1)]) == 0
    assert cross_pair_max([(2,), (7,)], [(1,), (3,)]) == 10


@given(data=st.data())
def test_cross_pair_max_matches_naive_loop(data):
    width = data.draw(st.integers(min_value=2, max_value=5))
    row = st.tuples(*[st.integers(min_value=0, max_value=12)] * width)
    left = data.draw(st.lists(row, min_size=1, max_size=40))
    right = data.draw(st.lists(row, min_size=1, max_size=40))
    stats = SolveStats()
    assert cross_pair_max(left, right, crossover=0, stats=stats) == _naive_cross_max(left, right)
    assert stats.dominance_queries > 0


def test_cross_pair_max_falls_back_on_wide_separators():
    stats = SolveStats()
    left, right = [(1, 2, 3, 4)], [(4, 3, 2, 1)]
    assert cross_pair_max(left, right, dimension_cap=2, crossover=0, stats=stats) == 5
    assert stats.fallback_dimension == 1
    assert cross_pair_max(left, right, stats=stats) == 5
    assert stats.fallback_crossover == 1


@given(
    u=st.tuples(*[st.integers(0, 6)] * 4),
    v=st.tuples(*[st.integers(0, 6)] * 4),
)
def test_each_pair_has_exactly_one_minimizer_class(u, v):
    classes = []
    for i in range(4):
        (coords, _), = minimizer_points([v], i)
        thresholds, strict = minimizer_thresholds(u, i)
        if satisfies(coords, thresholds, strict):
            classes.append(i)
    sums = [a + b for a, b in zip(u, v)]
    assert classes == [sums.index(min(sums))]


# --- Full recursion ---


def test_path_diameter():
    graph = LabeledGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert diameter_td(graph, path_decomposition(4)) == 3


def test_single_vertex_has_diameter_zero():
    graph = LabeledGraph(1)
    assert diameter_td(graph, TreeDecomposition((frozenset({0}),))) == 0


def test_long_path_with_deep_recursion(deep_recursion):
    graph = LabeledGraph.from_edges(40, [(i, i + 1) for i in range(39)])
    stats = SolveStats()
    assert diameter_td(graph, path_decomposition(40), stats=stats) == 39
    assert stats.recursion_nodes > 1
    assert stats.max_separator >= 2


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_ktrees_match_brute_force(deep_recursion, seed, k):
    graph, td = gen_partial_ktree(45, k, keep_prob=0.4, seed=seed)
    assert diameter_td(graph, td) == diameter_brute(graph)


@pytest.mark.parametrize("seed", range(4))
def test_weighted_ktrees_match_brute_force(deep_recursion, seed):
    graph, td = gen_partial_ktree(40, 2, keep_prob=0.7, seed=seed)
    weighted = reweighted(graph, seed)
    assert diameter_td(weighted, td, workers=2) == diameter_brute(weighted)


@pytest.mark.parametrize("seed", range(500))
def test_random_partial_ktrees_match_brute_force(monkeypatch, seed):
    """k up to 4, n up to 120, random keep probability; odd seeds recurse to single bags."""
    rng = np.random.default_rng(10_000 + seed)
    k = int(rng.integers(1, 5))
    n = int(rng.integers(k + 1, 121))
    graph, td = gen_partial_ktree(n, k, keep_prob=float(rng.random()), seed=seed)
    if seed % 2:
        monkeypatch.setattr(config, "BASE_CASE_MIN", 1)
        monkeypatch.setattr(config, "CROSSOVER_PAIRS", 0)
    assert diameter_td(graph, td) == diameter_brute(graph)


def test_reference_ktree_fixture():
    graph, td = gen_partial_ktree(60, 3, keep_prob=0.6, seed=11)
    expected = nx.diameter(nx.Graph(list(graph.edges)))
    assert diameter_brute(graph) == expected
    assert diameter_td(graph, td) == expected


@pytest.mark.parametrize("seed", range(200))
def test_ov_reduction_graphs_match_brute_force(random_ov, seed):
    instance = random_ov(seed, max_n=50, max_d=8)
    graph, _ = ov_to_diameter(instance)
    assert diameter_td(graph, ov_graph_decomposition(instance)) == diameter_brute(graph)


def test_default_settings_match_brute_force():
    graph, td = gen_partial_ktree(120, 2, keep_prob=0.5, seed=11)
    assert diameter_td(graph, td) == diameter_brute(graph)


def test_every_recursion_node_keeps_true_distances(deep_recursion):
    graph, td = gen_partial_ktree(30, 2, keep_prob=0.5, seed=3)
    truth = shortest_paths(graph, range(graph.vertex_count))
    nodes = []
    diameter_td(graph, td, observer=nodes.append)

    assert len(nodes) > 1
    for node in nodes:
        assert node.portals <= node.vertices
        for u in node.vertices:
            local = single_source_distances(node.adjacency, u, node.unit_weight)
            assert all(local[v] == truth[u][v] for v in node.vertices)


def test_invalid_decomposition_is_rejected():
    graph = LabeledGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    broken = TreeDecomposition((frozenset({0, 1}), frozenset({2, 3})), frozenset({(0, 1)}))
    with pytest.raises(InvalidDecompositionError) as excinfo:
        diameter_td(graph, broken)
    assert "edge_coverage" in str(excinfo.value)


def test_disconnected_graph_has_infinite_diameter():
    graph = LabeledGraph.from_edges(4, [(0, 1), (2, 3)])
    td = TreeDecomposition((frozenset({0, 1}), frozenset({2, 3})), frozenset({(0, 1)}))
    with pytest.raises(InfiniteDiameterError):
        diameter_td(graph, td)


# --- OV through the diameter engine ---


def test_planted_instance_has_pair():
    report = solve_ov_via_diameter(gen_ov(200, 4, plant=True, seed=1))
    assert report.has_orthogonal_pair
    assert report.diameter == 3
    assert report.total_ms == pytest.approx(report.reduction_ms + report.solve_ms)


def test_single_overlapping_pair_has_none():
    report = solve_ov_via_diameter(OVInstance(1, ((1,),), ((1,),)))
    assert not report.has_orthogonal_pair
    assert report.diameter == 2


def test_dimension_above_cap_is_refused():
    with pytest.raises(RefusalError):
        solve_ov_via_diameter(gen_ov(5, 4, seed=0), max_d=3)


@pytest.mark.parametrize("seed", range(200))
def test_diameter_engine_agrees_with_exhaustive_search(random_ov, seed):
    instance = random_ov(seed, max_n=400, max_d=5)
    report = solve_ov_via_diameter(instance)
    assert report.has_orthogonal_pair == (ov_brute(instance) is not None)


@pytest.mark.slow
def test_diameter_engine_scales_below_quadratic():
    rows = run_ov_scaling(3, [2**10, 2**11, 2**12, 2**13, 2**14], reps=3, seed=0)
    assert scaling_slope(rows, "diam") <= 1.6
    assert scaling_slope(rows, "brute") >= 1.8
    assert all(row["answer"] for row in rows)
