# FILE: pfgr/oracles.py
# ==============================================================================
# Brute-force ground truth: exhaustive OV and SAT, single- and multi-source
# shortest paths, and all-pairs diameter.
# ==============================================================================
import heapq
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from . import config
from .exceptions import InfiniteDiameterError, RefusalError
from .instances import CNFInstance, LabeledGraph, OVInstance

INFINITY = math.inf

Adjacency = Mapping[int, Mapping[int, int]]


def ov_brute(instance: OVInstance) -> Optional[Tuple[int, int]]:
    """Lexicographically least (i, j) with A[i] . B[j] = 0, or None."""
    for i, a in enumerate(instance.set_a):
        for j, b in enumerate(instance.set_b):
            if not any(x and y for x, y in zip(a, b)):
                return i, j
    return None


_WORD_BITS = 64
_BIT_WEIGHTS = np.left_shift(np.uint64(1), np.arange(_WORD_BITS, dtype=np.uint64))


def pack_vectors(vectors, d: int) -> np.ndarray:
    """Packs 0/1 vectors into an (n, ceil(d/64)) array of uint64 bitmasks."""
    words = max(1, -(-d // _WORD_BITS))
    bits = np.zeros((len(vectors), words * _WORD_BITS), dtype=np.uint64)
    bits[:, :d] = np.asarray(vectors, dtype=np.uint64).reshape(len(vectors), d)
    return (bits.reshape(len(vectors), words, _WORD_BITS) * _BIT_WEIGHTS).sum(axis=2, dtype=np.uint64)


def count_orthogonal_pairs(instance: OVInstance, block_pairs: int = 1 << 18) -> int:
    """Number of orthogonal (a, b) pairs, always scanning all nA * nB pairs.

    Rows of A are taken in blocks of about `block_pairs` pairs and ANDed
    against every mask of B at once.
    """
    masks_a = pack_vectors(instance.set_a, instance.d)
    masks_b = pack_vectors(instance.set_b, instance.d)
    rows = max(1, block_pairs // max(1, len(masks_b)))
    total = 0
    for start in range(0, len(masks_a), rows):
        chunk = masks_a[start:start + rows]
        overlap = np.bitwise_and.outer(chunk[:, 0], masks_b[:, 0]) != 0
        for word in range(1, masks_a.shape[1]):
            overlap |= np.bitwise_and.outer(chunk[:, word], masks_b[:, word]) != 0
        total += overlap.size - int(np.count_nonzero(overlap))
    return total


def sat_brute(cnf: CNFInstance) -> Optional[Tuple[bool, ...]]:
    """First satisfying assignment in increasing binary order, x1 as the most significant bit."""
    if cnf.num_vars > config.SAT_VAR_CAP:
        raise RefusalError(
            f"refusing exhaustive search over {cnf.num_vars} variables (cap {config.SAT_VAR_CAP})"
        )
    n = cnf.num_vars
    for mask in range(1 << n):
        assignment = tuple(bool((mask >> (n - 1 - i)) & 1) for i in range(n))
        if cnf.satisfied_by(assignment):
            return assignment
    return None


def single_source_distances(adjacency: Adjacency, source: int, unit_weight: bool = False) -> Dict[int, float]:
    """Distances from `source` to every vertex it reaches; BFS for unit weights, Dijkstra otherwise."""
    dist = {source: 0}
    if unit_weight:
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in adjacency[u]:
                if v not in dist:
                    dist[v] = du
                    queue.append(v)
        return dist

    heap = [(0, source)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for v, w in adjacency[u].items():
            dv = du + w
            if dv < dist.get(v, INFINITY):
                dist[v] = dv
                heapq.heappush(heap, (dv, v))
    return dist


def shortest_paths(
    graph: LabeledGraph, sources: Iterable[int], workers: Optional[int] = None
) -> Dict[int, Dict[int, float]]:
    """Exact distance table distance[s][v]; unreachable entries are INFINITY."""
    sources = sorted(set(sources))
    unit = graph.is_unit_weight
    adjacency = graph.adjacency
    workers = workers or config.WORKERS

    def run(s: int) -> Dict[int, float]:
        reached = single_source_distances(adjacency, s, unit)
        return {v: reached.get(v, INFINITY) for v in range(graph.vertex_count)}

    if workers > 1 and len(sources) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, sources))
    else:
        rows = [run(s) for s in sources]
    return dict(zip(sources, rows))


def diameter_brute(graph: LabeledGraph) -> int:
    """Exact diameter from all-sources shortest paths."""
    if graph.vertex_count < 1:
        raise ValueError("diameter of the empty graph is undefined")
    table = shortest_paths(graph, range(graph.vertex_count))
    best = max(max(row.values()) for row in table.values())
    if best == INFINITY:
        raise InfiniteDiameterError()
    return int(best)
