# FILE: pfgr/reductions.py
# ==============================================================================
# Executable reductions (OV -> diameter with its width d+1 decomposition,
# CNF-SAT -> OV by split-and-list) and the parameter mappings they realize.
# ==============================================================================
import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from . import config
from .closure import load_default_ledger
from .exceptions import RefusalError, UnknownReductionError
from .expressions import evaluate
from .instances import CNFInstance, Label, LabeledGraph, OVInstance, TreeDecomposition
from .models import RoleKind

OV2DIAM = "ov2diam"
SAT2OV = "sat2ov"


@dataclass(frozen=True)
class MappingRecord:
    """Source parameters, the target parameters they map to, and the formulas relating them."""

    reduction_id: str
    source_params: Dict[str, int]
    target_params: Dict[str, int]
    call_count: int = 1
    formulas: Dict[str, str] = field(default_factory=dict)

    @property
    def formula_text(self) -> str:
        return "; ".join(f"{name} = {formula}" for name, formula in self.formulas.items())

    def reevaluate(self) -> Dict[str, Optional[int]]:
        """Recomputes every target parameter from the stored formulas."""
        return {name: _as_count(evaluate(formula, self.source_params)) for name, formula in self.formulas.items()}


def _as_count(value) -> Optional[int]:
    if value is None:
        return None
    rounded = int(value)
    # Non-integral sizes (cube roots and the like) are reported as their ceiling.
    return rounded if rounded == value else rounded + 1


# --- OV -> Diameter ---

_OV2DIAM_EXACT = {
    "nodes": "nA + nB + d + 2",
    "edges": "onesA + onesB + nA + nB + 2*d + 1",
    "treewidthBound": "d + 1",
}
_OV2DIAM_SIZES = {
    "nodes": "nA + nB + d + 2",
    "edgesMax": "nA*d + nB*d + nA + nB + 2*d + 1",
    "treewidthBound": "d + 1",
}


def ov_graph_vertices(instance: OVInstance) -> Dict[str, object]:
    """Vertex numbering of the reduction graph: a_i, b_j, c_k, then x and y."""
    base_b = instance.n_a
    base_c = base_b + instance.n_b
    x = base_c + instance.d
    return {
        "a": range(0, base_b),
        "b": range(base_b, base_c),
        "c": range(base_c, x),
        "x": x,
        "y": x + 1,
    }


def ov_to_diameter(instance: OVInstance) -> Tuple[LabeledGraph, MappingRecord]:
    """Builds the graph whose diameter is 3 iff the instance has an orthogonal pair, else 2."""
    ids = ov_graph_vertices(instance)
    a_ids, b_ids, c_ids, x, y = ids["a"], ids["b"], ids["c"], ids["x"], ids["y"]

    edges = []
    for i, vector in enumerate(instance.set_a):
        edges.extend((a_ids[i], c_ids[k]) for k, bit in enumerate(vector) if bit)
    for j, vector in enumerate(instance.set_b):
        edges.extend((b_ids[j], c_ids[k]) for k, bit in enumerate(vector) if bit)
    edges.extend((x, a) for a in a_ids)
    edges.extend((y, b) for b in b_ids)
    edges.extend((x, c) for c in c_ids)
    edges.extend((y, c) for c in c_ids)
    edges.append((x, y))

    labels = {a: Label(RoleKind.A, i) for i, a in enumerate(a_ids)}
    labels.update({b: Label(RoleKind.B, j) for j, b in enumerate(b_ids)})
    labels.update({c: Label(RoleKind.C, k) for k, c in enumerate(c_ids)})
    labels[x] = Label(RoleKind.X)
    labels[y] = Label(RoleKind.Y)
    graph = LabeledGraph.from_edges(y + 1, edges, labels)

    ones_a, ones_b = instance.ones()
    source = {"nA": instance.n_a, "nB": instance.n_b, "d": instance.d, "onesA": ones_a, "onesB": ones_b}
    record = MappingRecord(
        OV2DIAM,
        source,
        {"nodes": graph.vertex_count, "edges": graph.edge_count, "treewidthBound": instance.d + 1},
        call_count=1,
        formulas=dict(_OV2DIAM_EXACT),
    )
    logging.info(f"REDUCE: ov2diam built {graph.vertex_count} nodes and {graph.edge_count} edges")
    return graph, record


def ov_graph_decomposition(instance: OVInstance) -> TreeDecomposition:
    """Star decomposition of width d+1: one bag per A- and B-vertex around the bag {x, y} + C."""
    ids = ov_graph_vertices(instance)
    shared = frozenset(ids["c"])
    bags = [shared | {a, ids["x"]} for a in ids["a"]]
    bags.extend(shared | {b, ids["y"]} for b in ids["b"])
    center = len(bags)
    bags.append(shared | {ids["x"], ids["y"]})
    return TreeDecomposition(tuple(bags), frozenset((i, center) for i in range(center)))


# --- CNF-SAT -> OV ---


def _half_vectors(cnf: CNFInstance, variables: range) -> Tuple[Tuple[int, ...], ...]:
    width = len(variables)
    owned = set(variables)
    restricted = [[lit for lit in clause if abs(lit) in owned] for clause in cnf.clauses]
    vectors = []
    for mask in range(1 << width):
        value = {var: bool((mask >> (width - 1 - pos)) & 1) for pos, var in enumerate(variables)}
        vectors.append(
            tuple(0 if any(value[abs(lit)] == (lit > 0) for lit in lits) else 1 for lits in restricted)
        )
    return tuple(vectors)


def sat_to_ov(cnf: CNFInstance) -> Tuple[OVInstance, MappingRecord]:
    """Split-and-list: an orthogonal pair exists iff the formula is satisfiable."""
    if cnf.num_vars > config.SAT_VAR_CAP:
        raise RefusalError(
            f"refusing to list 2^{(cnf.num_vars + 1) // 2} half-assignments for {cnf.num_vars} variables "
            f"(cap {config.SAT_VAR_CAP})"
        )
    if cnf.num_clauses == 0:
        raise ValueError("formula has no clauses, so the OV dimension would be 0")
    first = (cnf.num_vars + 1) // 2
    set_a = _half_vectors(cnf, range(1, first + 1))
    set_b = _half_vectors(cnf, range(first + 1, cnf.num_vars + 1))
    instance = OVInstance(cnf.num_clauses, set_a, set_b)
    record = _sat2ov_record({"n": cnf.num_vars, "m": cnf.num_clauses})
    logging.info(f"REDUCE: sat2ov listed {instance.n_a} + {instance.n_b} vectors of dimension {instance.d}")
    return instance, record


_SAT2OV_SIZES = {"nA": "2^ceiling(n/2)", "nB": "2^floor(n/2)", "d": "m"}


def _sat2ov_record(source: Mapping[str, int]) -> MappingRecord:
    return _evaluated_record(SAT2OV, source, _SAT2OV_SIZES, "1")


def _evaluated_record(reduction_id: str, source: Mapping[str, int], formulas: Mapping[str, str], calls: str) -> MappingRecord:
    targets = {}
    for name, formula in formulas.items():
        value = _as_count(evaluate(formula, source))
        if value is not None:
            targets[name] = value
    call_count = _as_count(evaluate(calls, source))
    return MappingRecord(reduction_id, dict(source), targets, call_count or 1, dict(formulas))


def mapping_report(reduction_id: str, source_params: Mapping[str, int], ledger=None) -> MappingRecord:
    """Evaluates a reduction's parameter mapping at concrete source parameters.

    `ov2diam` and `sat2ov` use their executable closed forms; any other ledger
    row has its size and parameter formulas echoed and evaluated where every
    symbol is bound.
    """
    source = dict(source_params)
    if reduction_id == OV2DIAM:
        if "n" in source:
            n = source.pop("n")
            source.setdefault("nA", n)
            source.setdefault("nB", n)
        return _evaluated_record(OV2DIAM, source, _OV2DIAM_SIZES, "1")
    if reduction_id == SAT2OV:
        return _sat2ov_record(source)

    for descriptor in ledger if ledger is not None else load_default_ledger():
        if descriptor.name == reduction_id:
            formulas = dict(descriptor.query_size)
            formulas.update(descriptor.param_map)
            values = {name: evaluate(text, {}) for name, text in descriptor.bindings.items()}
            values.update(source)
            return _evaluated_record(reduction_id, values, formulas, descriptor.query_count)
    raise UnknownReductionError(reduction_id)
