# FILE: pfgr/generators.py
# ==============================================================================
# Seeded instance generators. Each generator draws from its own
# numpy Generator, so identical arguments always give identical instances.
# ==============================================================================
import logging
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from .instances import CNFInstance, LabeledGraph, OVInstance, TreeDecomposition, edge_key


def gen_ov(n: int, d: int, plant: bool = False, seed: int = 0) -> OVInstance:
    """Uniform random OV instance with |A| = |B| = n; `plant` forces one orthogonal pair.

    Planting zeroes the bits of one B-vector on the support of one A-vector, so
    n and d are preserved exactly.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    rng = np.random.default_rng(seed)
    set_a = rng.integers(0, 2, size=(n, d), dtype=np.int8)
    set_b = rng.integers(0, 2, size=(n, d), dtype=np.int8)
    if plant:
        i, j = (int(x) for x in rng.integers(0, n, size=2))
        set_b[j] &= 1 - set_a[i]
        logging.debug(f"GEN: planted orthogonal pair (a{i}, b{j})")
    return OVInstance(d, tuple(map(tuple, set_a.tolist())), tuple(map(tuple, set_b.tolist())))


def gen_cnf(n: int, m: int, k: int = 3, seed: int = 0) -> CNFInstance:
    """Random k-CNF over n variables: each clause picks k distinct variables and random signs."""
    if n < 1 or m < 0 or not 1 <= k <= n:
        raise ValueError("need n >= 1, m >= 0 and 1 <= k <= n")
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(m):
        variables = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        signs = rng.choice(np.array([-1, 1]), size=k)
        clauses.append(frozenset(int(v) * int(s) for v, s in zip(variables, signs)))
    return CNFInstance(n, tuple(clauses))


def gen_partial_ktree(
    n: int, k: int, keep_prob: float = 1.0, seed: int = 0
) -> Tuple[LabeledGraph, TreeDecomposition]:
    """Random partial k-tree on n vertices together with its width-k decomposition.

    Vertices 0..k form the starting clique; every later vertex attaches to a
    uniformly chosen k-clique and gets the bag clique + itself, hung below a
    bag already holding that clique. Edges outside the spanning construction
    skeleton survive with probability `keep_prob`.
    """
    if k < 1 or n < k + 1:
        raise ValueError("need k >= 1 and n >= k + 1")
    if not 0.0 <= keep_prob <= 1.0:
        raise ValueError("keep_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)

    bags: List[frozenset] = [frozenset(range(k + 1))]
    tree_edges: List[Tuple[int, int]] = []
    cliques: List[Tuple[Tuple[int, ...], int]] = [(c, 0) for c in combinations(range(k + 1), k)]
    edges: Dict[Tuple[int, int], bool] = {}
    for u, v in combinations(range(k + 1), 2):
        edges[(u, v)] = v == u + 1  # the path 0-1-..-k is skeleton

    for v in range(k + 1, n):
        clique, holder = cliques[int(rng.integers(0, len(cliques)))]
        anchor = clique[0]
        for u in clique:
            edges[edge_key(u, v)] = u == anchor
        bag_index = len(bags)
        bags.append(frozenset(clique) | {v})
        tree_edges.append((holder, bag_index))
        for dropped in clique:
            rest = tuple(u for u in clique if u != dropped) + (v,)
            cliques.append((tuple(sorted(rest)), bag_index))

    kept = []
    for key in sorted(edges):
        if edges[key] or rng.random() < keep_prob:
            kept.append(key)
    graph = LabeledGraph.from_edges(n, kept)
    return graph, TreeDecomposition(tuple(bags), frozenset(tree_edges))
