# FILE: pfgr/twdiam.py
# ==============================================================================
# Exact diameter from a supplied tree decomposition. Each recursion node splits
# on a centroid bag plus its portals, measures distances from that separator,
# maximizes over pairs in different components with dominance queries and then
# recurses into every component with the separator attached as a weighted
# clique of true distances.
# ==============================================================================
import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import config
from .dominance import DominanceIndex, dominance_max_query
from .exceptions import DimensionMismatchError, InfiniteDiameterError, InvalidDecompositionError, RefusalError
from .instances import LabeledGraph, OVInstance, TreeDecomposition
from .oracles import single_source_distances
from .reductions import ov_graph_decomposition, ov_to_diameter
from .utils.validators import validate_td

Row = Tuple[int, ...]


@dataclass
class SolveStats:
    separator_sizes: List[int] = field(default_factory=list)
    recursion_nodes: int = 0
    base_cases: int = 0
    dominance_queries: int = 0
    fallback_dimension: int = 0
    fallback_crossover: int = 0

    @property
    def max_separator(self) -> int:
        return max(self.separator_sizes, default=0)

    def to_dict(self) -> Dict[str, object]:
        return {
            "separator_sizes": sorted(set(self.separator_sizes)),
            "max_separator": self.max_separator,
            "recursion_nodes": self.recursion_nodes,
            "base_cases": self.base_cases,
            "dominance_queries": self.dominance_queries,
            "fallback_dimension": self.fallback_dimension,
            "fallback_crossover": self.fallback_crossover,
        }


@dataclass(frozen=True)
class RecursionNode:
    """One subproblem: vertices C + P, portals P, and the weighted graph H over them."""

    depth: int
    vertices: FrozenSet[int]
    portals: FrozenSet[int]
    adjacency: Dict[int, Dict[int, int]]
    bags: Dict[int, FrozenSet[int]]
    unit_weight: bool = True

    @property
    def active(self) -> FrozenSet[int]:
        return frozenset(self.bags)


# --- Centroid ---


def centroid_bag(td: TreeDecomposition, active: Iterable[int]) -> int:
    """Bag whose removal leaves components of at most half the active bags; ties go to the smallest index."""
    active = set(active)
    if not active:
        raise ValueError("no active bags to choose a centroid from")
    root = min(active)
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        i = stack.pop()
        for j in td.bag_neighbors.get(i, ()):
            if j in active and j not in parent:
                parent[j] = i
                order.append(j)
                stack.append(j)
    if len(order) != len(active):
        raise ValueError("active bags do not induce a connected subtree")

    total = len(active)
    below = dict.fromkeys(order, 1)
    largest_child = dict.fromkeys(order, 0)
    for i in reversed(order):
        p = parent[i]
        if p is not None:
            below[p] += below[i]
            largest_child[p] = max(largest_child[p], below[i])
    return min(order, key=lambda i: (max(largest_child[i], total - below[i]), i))


# --- Cross-component maximization ---


def minimizer_points(d_right: Sequence[Row], i: int) -> List[Tuple[Row, int]]:
    """Points for separator index i: coordinates dR[v][j] - dR[v][i] for j != i, value dR[v][i]."""
    return [(tuple(row[j] - row[i] for j in range(len(row)) if j != i), row[i]) for row in d_right]


def minimizer_thresholds(row_left: Row, i: int) -> Tuple[Row, Tuple[bool, ...]]:
    """Thresholds dL[u][i] - dL[u][j] for j != i; strict below i so ties go to the smallest index."""
    others = [j for j in range(len(row_left)) if j != i]
    return tuple(row_left[i] - row_left[j] for j in others), tuple(j < i for j in others)


def _naive_cross_max(d_left: Sequence[Row], d_right: Sequence[Row]) -> int:
    return max(min(a + b for a, b in zip(u, v)) for u in d_left for v in d_right)


def cross_pair_max(
    d_left: Sequence[Sequence[int]],
    d_right: Sequence[Sequence[int]],
    *,
    dimension_cap: Optional[int] = None,
    crossover: Optional[int] = None,
    stats: Optional[SolveStats] = None,
) -> int:
    """max over u in L, v in R of min over s of dL[u][s] + dR[v][s]; an empty side contributes 0."""
    left = sorted({tuple(int(x) for x in row) for row in d_left})
    right = sorted({tuple(int(x) for x in row) for row in d_right})
    if not left or not right:
        return 0
    width = len(left[0])
    if any(len(row) != width for row in left + right):
        raise DimensionMismatchError("distance rows disagree on the separator size")
    if width == 0:
        raise DimensionMismatchError("distance rows over an empty separator")
    if width == 1:
        return left[-1][0] + right[-1][0]

    dimension_cap = config.DOMINANCE_DIM_CAP if dimension_cap is None else dimension_cap
    crossover = config.CROSSOVER_PAIRS if crossover is None else crossover
    if width - 1 > dimension_cap:
        if stats is not None:
            stats.fallback_dimension += 1
        return _naive_cross_max(left, right)
    if len(left) * len(right) < crossover:
        if stats is not None:
            stats.fallback_crossover += 1
        return _naive_cross_max(left, right)

    best = 0
    for i in range(width):
        index = DominanceIndex(minimizer_points(right, i), width - 1)
        for row in left:
            thresholds, strict = minimizer_thresholds(row, i)
            value = dominance_max_query(index, thresholds, strict)
            if value is not None:
                best = max(best, row[i] + value)
        if stats is not None:
            stats.dominance_queries += len(left)
    return best


# --- Recursion ---


def _components(adjacency: Dict[int, Dict[int, int]], vertices: Iterable[int], separator: Set[int]) -> List[List[int]]:
    seen: Set[int] = set()
    components = []
    for start in sorted(vertices):
        if start in separator or start in seen:
            continue
        seen.add(start)
        component = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if v not in separator and v not in seen:
                    seen.add(v)
                    component.append(v)
                    queue.append(v)
        components.append(component)
    return components


class _Solver:
    def __init__(self, td: TreeDecomposition, threshold: int, stats: SolveStats, observer, workers: int):
        self.occurrences = td.occurrences()
        self.td = td
        self.threshold = threshold
        self.stats = stats
        self.observer = observer
        self.workers = workers

    def _distances(self, node: RecursionNode, sources: Sequence[int]) -> Dict[int, Dict[int, int]]:
        def run(s: int) -> Dict[int, int]:
            return single_source_distances(node.adjacency, s, node.unit_weight)

        if self.workers > 1 and len(sources) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                return dict(zip(sources, pool.map(run, sources)))
        return {s: run(s) for s in sources}

    def solve(self, root: RecursionNode) -> int:
        answer = 0
        # Sibling order only changes which node reports first; the maximum is order independent.
        pending = [root]
        while pending:
            node = pending.pop()
            self.stats.recursion_nodes += 1
            if self.observer is not None:
                self.observer(node)
            if len(node.vertices) <= self.threshold:
                answer = max(answer, self._base_case(node))
                continue
            best, children = self._split(node)
            answer = max(answer, best)
            pending.extend(reversed(children))
        return answer

    def _base_case(self, node: RecursionNode) -> int:
        # Distances from the portals were already maximized by the parent.
        self.stats.base_cases += 1
        sources = sorted(node.vertices - node.portals)
        rows = self._distances(node, sources)
        return max((max(row.values()) for row in rows.values()), default=0)

    def _split(self, node: RecursionNode) -> Tuple[int, List[RecursionNode]]:
        center = centroid_bag(self.td, node.bags)
        separator = sorted(node.bags[center] | node.portals)
        separator_set = set(separator)
        self.stats.separator_sizes.append(len(separator))

        dist = self._distances(node, separator)
        best = max(max(row.values()) for row in dist.values())

        components = _components(node.adjacency, node.vertices, separator_set)
        rows = {v: tuple(dist[s][v] for s in separator) for component in components for v in component}
        best = max(best, self._cross_components(components, rows))

        children = [self._child(node, component, separator, dist) for component in components]
        return best, children

    def _cross_components(self, components: List[List[int]], rows: Dict[int, Row]) -> int:
        """Every pair of distinct components is split at exactly one level of a balanced halving."""
        best = 0
        groups = [components]
        while groups:
            group = groups.pop()
            if len(group) < 2:
                continue
            mid = len(group) // 2
            left = [rows[v] for component in group[:mid] for v in component]
            right = [rows[v] for component in group[mid:] for v in component]
            best = max(best, cross_pair_max(left, right, stats=self.stats))
            groups.append(group[:mid])
            groups.append(group[mid:])
        return best

    def _child(
        self, node: RecursionNode, component: List[int], separator: List[int], dist: Dict[int, Dict[int, int]]
    ) -> RecursionNode:
        inside = set(component)
        portals = frozenset(separator)
        kept = inside | portals

        adjacency: Dict[int, Dict[int, int]] = {v: {} for v in kept}
        for s in separator:
            for t in separator:
                if s != t:
                    adjacency[s][t] = dist[s][t]
        # Neighbors of C all lie in C + S, so the portal side is filled from C.
        for v in component:
            for w, weight in node.adjacency[v].items():
                adjacency[v][w] = weight
                if w in portals:
                    adjacency[w][v] = weight

        active = {b for v in component for b in self.occurrences[v] if b in node.bags}
        bags = {b: (node.bags[b] & kept) | portals for b in active}
        unit = node.unit_weight and all(dist[s][t] == 1 for s in separator for t in separator if s != t)
        return RecursionNode(node.depth + 1, frozenset(kept), portals, adjacency, bags, unit)


def _check_connected(graph: LabeledGraph) -> None:
    if graph.vertex_count == 0:
        return
    reached = single_source_distances(graph.adjacency, 0, unit_weight=True)
    if len(reached) != graph.vertex_count:
        raise InfiniteDiameterError()


def diameter_td(
    graph: LabeledGraph,
    td: TreeDecomposition,
    *,
    stats: Optional[SolveStats] = None,
    observer: Optional[Callable[[RecursionNode], None]] = None,
    workers: Optional[int] = None,
) -> int:
    """Exact diameter of `graph` using the decomposition `td`.

    `observer`, when given, sees every recursion node before it is processed.
    """
    report = validate_td(graph, td)
    if not report.ok:
        raise InvalidDecompositionError(report)
    _check_connected(graph)
    stats = stats if stats is not None else SolveStats()

    threshold = max(2 * (td.width + 1), config.BASE_CASE_MIN)
    adjacency = {v: dict(neighbors) for v, neighbors in graph.adjacency.items()}
    root = RecursionNode(
        depth=0,
        vertices=frozenset(range(graph.vertex_count)),
        portals=frozenset(),
        adjacency=adjacency,
        bags=dict(enumerate(td.bags)),
        unit_weight=graph.is_unit_weight,
    )
    solver = _Solver(td, threshold, stats, observer, workers or config.WORKERS)
    answer = solver.solve(root)
    if stats.fallback_dimension:
        logging.warning(
            f"TWDIAM: {stats.fallback_dimension} separator splits exceeded the dominance cap "
            f"({config.DOMINANCE_DIM_CAP}) and used the pairwise scan"
        )
    logging.debug(
        f"TWDIAM: diameter {answer} after {stats.recursion_nodes} nodes, largest separator {stats.max_separator}"
    )
    return answer


# --- OV pipeline ---


@dataclass
class OVSolveReport:
    has_orthogonal_pair: bool
    diameter: int
    reduction_ms: float
    solve_ms: float
    stats: SolveStats

    @property
    def total_ms(self) -> float:
        return self.reduction_ms + self.solve_ms


def solve_ov_via_diameter(instance: OVInstance, max_d: Optional[int] = None, workers: Optional[int] = None) -> OVSolveReport:
    """Decides OV as "diameter == 3" on the reduction graph; reduction and solve are timed separately."""
    cap = config.MAX_D if max_d is None else max_d
    if instance.d > cap:
        raise RefusalError(
            f"dimension {instance.d} exceeds the cap {cap}: the engine's log^d factor makes this impractical "
            f"(raise it with --max-d or PFGR_MAX_D)"
        )
    started = time.perf_counter()
    graph, _ = ov_to_diameter(instance)
    td = ov_graph_decomposition(instance)
    reduced = time.perf_counter()
    stats = SolveStats()
    diameter = diameter_td(graph, td, stats=stats, workers=workers)
    finished = time.perf_counter()
    logging.info(f"TWDIAM: OV instance n={instance.n_a}+{instance.n_b}, d={instance.d} has diameter {diameter}")
    return OVSolveReport(
        has_orthogonal_pair=diameter == 3,
        diameter=diameter,
        reduction_ms=(reduced - started) * 1000.0,
        solve_ms=(finished - reduced) * 1000.0,
        stats=stats,
    )
