# FILE: pfgr/formats.py
# ==============================================================================
# Text formats: OV files, DIMACS CNF, PACE-style graphs (with weight and label
# extensions) and PACE .td tree decompositions. Parsers raise FormatError with
# the offending line number; writers emit the canonical form.
# ==============================================================================
from pathlib import Path
from typing import Dict, List, Set, Tuple, Union

from .exceptions import FormatError
from .instances import CNFInstance, Label, LabeledGraph, OVInstance, TreeDecomposition, edge_key

PathLike = Union[str, Path]


def _ints(parts: List[str], line_number: int, what: str) -> List[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"non-integer value in {what}", line_number) from None


# --- OV files ---


def parse_ov(text: str) -> OVInstance:
    """Parses the OV format: header "nA nB d", then nA vectors of A, then nB of B."""
    if not text.endswith("\n"):
        raise FormatError("file must end with a newline", text.count("\n") + 1)
    lines = text[:-1].split("\n")
    header = lines[0].split(" ")
    if len(header) != 3 or not all(p.isdigit() for p in header):
        raise FormatError("malformed header, expected 'nA nB d'", 1)
    n_a, n_b, d = (int(p) for p in header)
    if n_a < 1 or n_b < 1 or d < 1:
        raise FormatError("set sizes and dimension must be positive", 1)
    if len(lines) - 1 != n_a + n_b:
        raise FormatError(f"expected {n_a + n_b} vector lines, found {len(lines) - 1}", len(lines))

    vectors = []
    for line_number, line in enumerate(lines[1:], start=2):
        if len(line) != d:
            raise FormatError(f"vector has length {len(line)}, expected {d}", line_number)
        for ch in line:
            if ch not in "01":
                raise FormatError(f"non-binary character '{ch}'", line_number)
        vectors.append(tuple(int(ch) for ch in line))
    return OVInstance(d, tuple(vectors[:n_a]), tuple(vectors[n_a:]))


def write_ov(instance: OVInstance) -> str:
    lines = [f"{instance.n_a} {instance.n_b} {instance.d}"]
    lines.extend("".join(map(str, v)) for v in instance.set_a)
    lines.extend("".join(map(str, v)) for v in instance.set_b)
    return "\n".join(lines) + "\n"


# --- DIMACS CNF ---


def parse_dimacs(text: str) -> CNFInstance:
    num_vars = None
    declared_clauses = 0
    clauses: List[List[int]] = []
    pending: List[int] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise FormatError("duplicate problem line", line_number)
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"invalid problem line: {line}", line_number)
            num_vars, declared_clauses = _ints(parts[2:], line_number, "problem line")
            continue
        if num_vars is None:
            raise FormatError("clause before the 'p cnf' header", line_number)
        # Clauses may span lines; a 0 closes the current one.
        for literal in _ints(line.split(), line_number, "clause"):
            if literal == 0:
                if not pending:
                    raise FormatError("empty clause", line_number)
                clauses.append(pending)
                pending = []
            elif abs(literal) > num_vars:
                raise FormatError(f"literal {literal} exceeds {num_vars} variables", line_number)
            else:
                pending.append(literal)
    if num_vars is None:
        raise FormatError("missing 'p cnf' header", 1)
    if pending:
        clauses.append(pending)
    if len(clauses) != declared_clauses:
        raise FormatError(f"header declares {declared_clauses} clauses, found {len(clauses)}", 1)
    return CNFInstance(num_vars, tuple(frozenset(c) for c in clauses))


def write_dimacs(cnf: CNFInstance) -> str:
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    for clause in cnf.clauses:
        ordered = sorted(clause, key=lambda lit: (abs(lit), lit))
        lines.append(" ".join(map(str, ordered)) + " 0")
    return "\n".join(lines) + "\n"


# --- Graphs ---


def parse_graph(text: str) -> LabeledGraph:
    """Parses "p tw n m" graphs; "u v" and "w u v weight" are edges, "l v role" labels."""
    n = None
    declared_edges = 0
    weights: Dict[Tuple[int, int], int] = {}
    labels: Dict[int, Label] = {}
    edge_lines = 0

    def vertex(token: str, line_number: int) -> int:
        v = _ints([token], line_number, "vertex")[0]
        if not 1 <= v <= n:
            raise FormatError(f"vertex {v} outside 1..{n}", line_number)
        return v - 1

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise FormatError("duplicate problem line", line_number)
            if len(parts) != 4 or parts[1] != "tw":
                raise FormatError("malformed header, expected 'p tw n m'", line_number)
            n, declared_edges = _ints(parts[2:], line_number, "header")
            continue
        if n is None:
            raise FormatError("data before the 'p tw' header", line_number)
        if parts[0] == "l":
            if len(parts) != 3:
                raise FormatError("label line must be 'l v role'", line_number)
            try:
                labels[vertex(parts[1], line_number)] = Label.parse(parts[2])
            except ValueError as e:
                raise FormatError(str(e), line_number) from None
            continue
        if parts[0] == "w":
            if len(parts) != 4:
                raise FormatError("weighted edge must be 'w u v weight'", line_number)
            u, v = vertex(parts[1], line_number), vertex(parts[2], line_number)
            w = _ints(parts[3:], line_number, "weight")[0]
        elif len(parts) == 2:
            u, v = vertex(parts[0], line_number), vertex(parts[1], line_number)
            w = 1
        else:
            raise FormatError(f"unrecognized line: {line}", line_number)
        if u == v or w < 1:
            raise FormatError("self-loops and weights below 1 are not allowed", line_number)
        key = edge_key(u, v)
        weights[key] = min(w, weights.get(key, w))
        edge_lines += 1
    if n is None:
        raise FormatError("missing 'p tw' header", 1)
    if edge_lines != declared_edges:
        raise FormatError(f"header declares {declared_edges} edges, found {edge_lines}", 1)
    try:
        return LabeledGraph(n, weights, labels)
    except ValueError as e:
        raise FormatError(str(e)) from None


def write_graph(graph: LabeledGraph) -> str:
    lines = [f"p tw {graph.vertex_count} {graph.edge_count}"]
    for (u, v), w in sorted(graph.edges.items()):
        lines.append(f"{u + 1} {v + 1}" if w == 1 else f"w {u + 1} {v + 1} {w}")
    for v, label in sorted(graph.labels.items()):
        lines.append(f"l {v + 1} {label.token}")
    return "\n".join(lines) + "\n"


# --- Tree decompositions ---


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: Dict[int, Set[int]] = {}
    tree_edges: List[Tuple[int, int]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise FormatError("duplicate 's td' line", line_number)
            if len(parts) != 5 or parts[1] != "td":
                raise FormatError("malformed 's td numBags maxBagSize n' line", line_number)
            header = _ints(parts[2:], line_number, "solution line")
            continue
        if header is None:
            raise FormatError("data before the 's td' line", line_number)
        if parts[0] == "b":
            values = _ints(parts[1:], line_number, "bag line")
            if not values:
                raise FormatError("bag line without an id", line_number)
            bag_id = values[0]
            if not 1 <= bag_id <= header[0]:
                raise FormatError(f"bag id {bag_id} outside 1..{header[0]}", line_number)
            if bag_id in bags:
                raise FormatError(f"duplicate bag {bag_id}", line_number)
            bags[bag_id] = {v - 1 for v in values[1:]}
        else:
            values = _ints(parts, line_number, "tree edge")
            if len(values) != 2:
                raise FormatError("tree edge must name two bags", line_number)
            tree_edges.append((values[0] - 1, values[1] - 1))
    if header is None:
        raise FormatError("missing 's td' line", 1)
    num_bags = header[0]
    if len(bags) != num_bags:
        raise FormatError(f"header declares {num_bags} bags, found {len(bags)}", 1)
    return TreeDecomposition(tuple(frozenset(bags[i]) for i in range(1, num_bags + 1)), frozenset(tree_edges))


def write_td(td: TreeDecomposition, vertex_count: int) -> str:
    lines = [f"s td {len(td.bags)} {td.max_bag_size} {vertex_count}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i), *(str(v + 1) for v in sorted(bag))]))
    for i, j in sorted(td.tree_edges):
        lines.append(f"{i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


def read_text(path: PathLike) -> str:
    return Path(path).read_text()
