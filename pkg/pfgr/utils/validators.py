# FILE: pfgr/utils/validators.py
# ==============================================================================
# Checks a tree decomposition against a graph, property by property, so that a
# failing decomposition comes back with a witness for every broken property.
# ==============================================================================
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Optional

from ..instances import LabeledGraph, TreeDecomposition
from ..models import TDProperty


@dataclass(frozen=True)
class PropertyCheck:
    passed: bool
    witness: Optional[str] = None


@dataclass
class ValidationReport:
    checks: Dict[TDProperty, PropertyCheck] = field(default_factory=dict)
    width: int = -1

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks.values())

    def failures(self) -> Dict[TDProperty, str]:
        return {prop: check.witness for prop, check in self.checks.items() if not check.passed}

    def summary(self) -> str:
        if self.ok:
            return f"all properties hold, width {self.width}"
        return "; ".join(f"{prop.value} failed ({witness})" for prop, witness in self.failures().items())


def _check_tree(td: TreeDecomposition) -> PropertyCheck:
    count = len(td.bags)
    if count == 0:
        return PropertyCheck(False, "decomposition has no bags")
    for i, j in sorted(td.tree_edges):
        if i == j:
            return PropertyCheck(False, f"tree edge ({i}, {j}) is a loop")
        if not (0 <= i < count and 0 <= j < count):
            return PropertyCheck(False, f"tree edge ({i}, {j}) references a missing bag")
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in td.bag_neighbors[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    if len(seen) != count:
        missing = min(set(range(count)) - seen)
        return PropertyCheck(False, f"bag {missing} is not connected to bag 0")
    if len(td.tree_edges) != count - 1:
        return PropertyCheck(False, f"{len(td.tree_edges)} tree edges over {count} bags form a cycle")
    return PropertyCheck(True)


def _check_vertex_coverage(graph: LabeledGraph, td: TreeDecomposition) -> PropertyCheck:
    covered = set().union(*td.bags) if td.bags else set()
    for i, bag in enumerate(td.bags):
        stray = sorted(v for v in bag if not 0 <= v < graph.vertex_count)
        if stray:
            return PropertyCheck(False, f"bag {i} contains vertex {stray[0]} not in the graph")
    for v in range(graph.vertex_count):
        if v not in covered:
            return PropertyCheck(False, f"vertex {v} is in no bag")
    return PropertyCheck(True)


def _check_edge_coverage(graph: LabeledGraph, td: TreeDecomposition) -> PropertyCheck:
    where = {v: set(holders) for v, holders in td.occurrences().items()}
    for u, v in sorted(graph.edges):
        small, large = sorted((where.get(u, set()), where.get(v, set())), key=len)
        if not any(i in large for i in small):
            return PropertyCheck(False, f"edge ({u}, {v}) lies in no bag")
    return PropertyCheck(True)


def _check_connectivity(td: TreeDecomposition) -> PropertyCheck:
    for v, holders in sorted(td.occurrences().items()):
        allowed = set(holders)
        seen = {holders[0]}
        queue = deque([holders[0]])
        while queue:
            i = queue.popleft()
            for j in td.bag_neighbors.get(i, ()):
                if j in allowed and j not in seen:
                    seen.add(j)
                    queue.append(j)
        if len(seen) != len(allowed):
            return PropertyCheck(False, f"bags {sorted(allowed)} holding vertex {v} are not connected")
    return PropertyCheck(True)


def validate_td(graph: LabeledGraph, td: TreeDecomposition) -> ValidationReport:
    """Reports tree-ness, vertex coverage, edge coverage and connectivity of `td` for `graph`."""
    report = ValidationReport(width=td.width)
    report.checks[TDProperty.TREE] = _check_tree(td)
    report.checks[TDProperty.VERTEX_COVERAGE] = _check_vertex_coverage(graph, td)
    report.checks[TDProperty.EDGE_COVERAGE] = _check_edge_coverage(graph, td)
    report.checks[TDProperty.CONNECTIVITY] = _check_connectivity(td)
    return report
