# FILE: pfgr/instances.py
# ==============================================================================
# Problem instances, labeled graphs and tree decompositions. All types are
# immutable after construction; vertices and bags are 0-indexed in memory and
# 1-indexed in the text formats.
# ==============================================================================
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

from .models import RoleKind

BitVector = Tuple[int, ...]


def _as_bitvector(bits: Iterable) -> BitVector:
    vector = tuple(int(bool(b)) for b in bits)
    return vector


@dataclass(frozen=True)
class OVInstance:
    d: int
    set_a: Tuple[BitVector, ...]
    set_b: Tuple[BitVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "set_a", tuple(_as_bitvector(v) for v in self.set_a))
        object.__setattr__(self, "set_b", tuple(_as_bitvector(v) for v in self.set_b))
        if self.d < 1:
            raise ValueError(f"dimension must be positive, got {self.d}")
        if not self.set_a or not self.set_b:
            raise ValueError("both vector sets must be nonempty")
        for name, vectors in (("A", self.set_a), ("B", self.set_b)):
            for i, vector in enumerate(vectors):
                if len(vector) != self.d:
                    raise ValueError(
                        f"vector {i} of set {name} has length {len(vector)}, expected {self.d}"
                    )

    @property
    def n_a(self) -> int:
        return len(self.set_a)

    @property
    def n_b(self) -> int:
        return len(self.set_b)

    def ones(self) -> Tuple[int, int]:
        """Number of 1-bits in set A and in set B."""
        return sum(map(sum, self.set_a)), sum(map(sum, self.set_b))


@dataclass(frozen=True)
class CNFInstance:
    num_vars: int
    clauses: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(frozenset(c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError(f"number of variables must be positive, got {self.num_vars}")
        for j, clause in enumerate(self.clauses):
            if not clause:
                raise ValueError(f"clause {j} is empty")
            for literal in clause:
                if literal == 0 or abs(literal) > self.num_vars:
                    raise ValueError(f"clause {j} has literal {literal} outside [-{self.num_vars}, {self.num_vars}]")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """`assignment[i]` is the value of variable i+1."""
        return all(
            any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in self.clauses
        )


@dataclass(frozen=True, order=True)
class Label:
    kind: RoleKind
    index: int = 0

    @property
    def token(self) -> str:
        if self.kind in (RoleKind.A, RoleKind.B, RoleKind.C):
            return f"{self.kind.value}{self.index + 1}"
        return self.kind.value

    @classmethod
    def parse(cls, token: str) -> "Label":
        token = token.strip().upper()
        if token in (RoleKind.X.value, RoleKind.Y.value, RoleKind.PLAIN.value):
            return cls(RoleKind(token))
        kind, digits = token[:1], token[1:]
        if kind not in ("A", "B", "C") or not digits.isdigit() or int(digits) < 1:
            raise ValueError(f"unknown role '{token}'")
        return cls(RoleKind(kind), int(digits) - 1)


PLAIN = Label(RoleKind.PLAIN)

Edge = Tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabeledGraph:
    """Undirected graph with positive integer weights and vertex roles.

    `edges` maps each unordered pair, stored as (smaller, larger), to its
    weight. Vertices without an entry in `labels` are PLAIN.
    """

    vertex_count: int
    edges: Mapping[Edge, int] = field(default_factory=dict)
    labels: Mapping[int, Label] = field(default_factory=dict)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex count must be nonnegative")
        normalized: Dict[Edge, int] = {}
        for (u, v), weight in self.edges.items():
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside [0, {self.vertex_count})")
            if int(weight) != weight or weight < 1:
                raise ValueError(f"edge ({u}, {v}) has weight {weight}; weights must be integers >= 1")
            key = edge_key(u, v)
            normalized[key] = min(int(weight), normalized.get(key, int(weight)))
        object.__setattr__(self, "edges", normalized)

        labels = {v: lab for v, lab in self.labels.items() if lab.kind != RoleKind.PLAIN}
        for v in labels:
            if not 0 <= v < self.vertex_count:
                raise ValueError(f"label on vertex {v} outside the graph")
        for unique in (RoleKind.X, RoleKind.Y):
            if sum(1 for lab in labels.values() if lab.kind == unique) > 1:
                raise ValueError(f"role {unique.value} appears on more than one vertex")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[Tuple[int, int]] | Iterable[Tuple[int, int, int]],
        labels: Optional[Mapping[int, Label]] = None,
    ) -> "LabeledGraph":
        """Builds a graph from (u, v) or (u, v, weight) tuples; parallel edges keep the lighter weight."""
        weights: Dict[Edge, int] = {}
        for item in edges:
            u, v = item[0], item[1]
            w = item[2] if len(item) > 2 else 1
            key = edge_key(u, v)
            weights[key] = min(w, weights.get(key, w))
        return cls(vertex_count, weights, dict(labels or {}))

    @cached_property
    def adjacency(self) -> Dict[int, Dict[int, int]]:
        adjacency: Dict[int, Dict[int, int]] = {v: {} for v in range(self.vertex_count)}
        for (u, v), w in self.edges.items():
            adjacency[u][v] = w
            adjacency[v][u] = w
        return adjacency

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def is_unit_weight(self) -> bool:
        return all(w == 1 for w in self.edges.values())

    def label_of(self, v: int) -> Label:
        return self.labels.get(v, PLAIN)

    def vertex_with(self, label: Label) -> Optional[int]:
        for v, lab in self.labels.items():
            if lab == label:
                return v
        return None


@dataclass(frozen=True)
class TreeDecomposition:
    bags: Tuple[FrozenSet[int], ...]
    tree_edges: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "tree_edges", frozenset(edge_key(i, j) for i, j in self.tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def max_bag_size(self) -> int:
        return max((len(b) for b in self.bags), default=0)

    @cached_property
    def bag_neighbors(self) -> Dict[int, FrozenSet[int]]:
        neighbors: Dict[int, set] = {i: set() for i in range(len(self.bags))}
        for i, j in self.tree_edges:
            neighbors.setdefault(i, set()).add(j)
            neighbors.setdefault(j, set()).add(i)
        return {i: frozenset(js) for i, js in neighbors.items()}

    def occurrences(self) -> Dict[int, list]:
        """Maps each vertex to the sorted indices of the bags containing it."""
        where: Dict[int, list] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                where.setdefault(v, []).append(i)
        return where
