# FILE: pfgr/closure.py
# ==============================================================================
# FPI claims, reduction descriptors and their composition: given a reduction
# A -> B and an improved algorithm for B, derive the improved bound for A.
# Also loads the reduction ledger and claim files shipped under pfgr/data.
# ==============================================================================
import csv
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from dotenv import dotenv_values
from sympy.core.function import AppliedUndef

from .exceptions import FormatError, PFGRError, UnmappedParameterError, UnsupportedFormError
from .expressions import RuntimeExpr, canonicalize, parse_expression, symbol

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_LEDGER = DATA_DIR / "table1_ledger.psv"
DEFAULT_CLAIM = DATA_DIR / "diameter_claim.env"

LEDGER_FIELDS = (
    "name",
    "source",
    "target",
    "source_params",
    "target_params",
    "query_size",
    "param_map",
    "calls",
    "reduction_time",
    "bindings",
    "base_bound",
    "slack",
    "executable",
    "citation",
)


@dataclass(frozen=True)
class Slack:
    """The improvement exponent: a^{1-value} beats a. Kept symbolic when no value is known."""

    name: str = "epsilon"
    value: Optional[float] = None

    def __post_init__(self):
        if self.value is not None and not self.value > 0:
            raise ValueError(f"improvement exponent {self.name} must be positive, got {self.value}")

    def render(self) -> str:
        return self.name if self.value is None else f"{self.name}={self.value:g}"

    @classmethod
    def parse(cls, text: str) -> "Slack":
        name, _, value = text.partition("=")
        return cls(name.strip() or "epsilon", float(value) if value.strip() else None)


@dataclass(frozen=True)
class FPIClaim:
    problem: str
    bound: RuntimeExpr
    parameters: FrozenSet[str] = frozenset()
    size_variables: Tuple[str, ...] = ("n",)
    improvement: Slack = field(default_factory=Slack)
    base_bound: Optional[RuntimeExpr] = None

    @property
    def param_factor(self) -> RuntimeExpr:
        return self.bound.param_factor()

    def render(self) -> str:
        params = ", ".join(sorted(self.parameters))
        return f"FPI({self.problem}, {{{params}}}): {self.bound.render()}"

    def to_record(self) -> Dict[str, object]:
        return {
            "problem": self.problem,
            "bound": self.bound.render(),
            "parameters": sorted(self.parameters),
            "size_variables": list(self.size_variables),
            "param_factor": self.param_factor.render(),
            "improvement": self.improvement.render(),
            "base_bound": self.base_bound.render() if self.base_bound is not None else None,
        }


@dataclass(frozen=True)
class ReductionDescriptor:
    """One row of the ledger. Expressions are kept as text and parsed on use.

    `query_size` maps each target size variable to its size in source terms;
    `param_map` maps each target parameter to an expression over source
    parameters; `bindings` fixes free constants such as k = 2. `base_bound`
    and `slack` describe the source side: its conjectured running time and
    the improvement exponent a derived claim is stated with.
    """

    name: str
    source: str
    target: str
    query_size: Dict[str, str]
    param_map: Dict[str, str] = field(default_factory=dict)
    query_count: str = "1"
    reduction_time: str = "0"
    source_params: Tuple[str, ...] = ()
    target_params: Tuple[str, ...] = ()
    bindings: Dict[str, str] = field(default_factory=dict)
    base_bound: str = ""
    slack: Slack = field(default_factory=lambda: Slack("delta"))
    citation: str = ""
    executable: bool = False

    def _bound(self, text: str) -> sympy.Expr:
        expr = parse_expression(text)
        return expr.subs({symbol(k): parse_expression(v) for k, v in self.bindings.items()})

    def mapped(self) -> Dict[str, sympy.Expr]:
        return {name: self._bound(text) for name, text in self.param_map.items()}

    def sizes(self) -> Dict[str, sympy.Expr]:
        return {name: self._bound(text) for name, text in self.query_size.items()}

    def source_size_variables(self) -> Tuple[str, ...]:
        names = set()
        for expr in self.sizes().values():
            names |= {s.name for s in expr.free_symbols}
        return tuple(sorted(names - set(self.source_params)))


# --- Minimum necessary set ---


def minimum_necessary_set(
    param_map: Mapping[str, Union[str, sympy.Expr]], target_params: Iterable[str], exclude: Iterable[str] = ()
) -> FrozenSet[str]:
    """Source parameters appearing in the images of `target_params`."""
    excluded = set(exclude)
    support = set()
    for param in sorted(target_params):
        if param not in param_map:
            raise UnmappedParameterError(param)
        image = param_map[param]
        if isinstance(image, str):
            image = parse_expression(image)
        support |= {s.name for s in sympy.sympify(image).free_symbols}
    return frozenset(support - excluded)


# --- Composition ---


def _fresh_name(name: str, taken: Iterable[str]) -> str:
    stem, _, suffix = name.rpartition("_")
    index = int(suffix) + 1 if stem and suffix.isdigit() else 1
    base = stem if stem and suffix.isdigit() else name
    taken = set(taken)
    while f"{base}_{index}" in taken:
        index += 1
    return f"{base}_{index}"


def compose_closure(red: ReductionDescriptor, claim: FPIClaim) -> FPIClaim:
    """Bound for red.source: reduction time + calls * claim bound at the query sizes and mapped parameters."""
    if claim.problem != red.target:
        raise ValueError(f"reduction '{red.name}' targets {red.target}, claim is for {claim.problem}")
    mapped = red.mapped()
    for param in sorted(claim.parameters):
        if param not in mapped:
            raise UnmappedParameterError(param)
    sizes = red.sizes()
    for var in claim.size_variables:
        if var not in sizes:
            raise UnsupportedFormError(f"reduction '{red.name}' gives no size for {red.target}'s '{var}'")

    substitution = {symbol(p): mapped[p] for p in claim.parameters}
    substitution.update({symbol(v): sizes[v] for v in claim.size_variables})

    bound = claim.bound.to_sympy()
    # Opaque factors whose arguments change become fresh factors over the new support.
    calls = sorted(bound.atoms(AppliedUndef), key=str)
    taken = {c.func.__name__ for c in calls}
    placeholders, renamed = {}, {}
    for i, call in enumerate(calls):
        args = [arg.subs(substitution, simultaneous=True) for arg in call.args]
        if list(call.args) == args:
            continue
        support = sorted({s for arg in args for s in arg.free_symbols}, key=lambda s: s.name)
        name = _fresh_name(call.func.__name__, taken)
        taken.add(name)
        placeholder = sympy.Dummy(f"opaque{i}", positive=True)
        placeholders[call] = placeholder
        renamed[placeholder] = sympy.Function(name)(*support)
    substituted = bound.xreplace(placeholders).subs(substitution, simultaneous=True).xreplace(renamed)

    total = red._bound(red.reduction_time) + red._bound(red.query_count) * substituted
    parameters = minimum_necessary_set(mapped, claim.parameters, exclude=red.source_size_variables())
    known = set(red.source_params) | parameters
    derived = canonicalize(total, known)
    base = canonicalize(red._bound(red.base_bound), known) if red.base_bound else None
    logging.info(f"CLOSURE: {red.name} turns {claim.render()} into {derived.render()}")
    return FPIClaim(
        problem=red.source,
        bound=derived,
        parameters=parameters,
        size_variables=red.source_size_variables(),
        improvement=red.slack,
        base_bound=base,
    )


def _reachable(ledger: Sequence[ReductionDescriptor], claim: FPIClaim) -> List[ReductionDescriptor]:
    return [
        red
        for red in ledger
        if red.target == claim.problem
        and all(p in red.param_map for p in claim.parameters)
        and all(v in red.query_size for v in claim.size_variables)
    ]


def derive_chain(
    ledger: Sequence[ReductionDescriptor], claim: FPIClaim, via: Optional[Sequence[str]] = None
) -> List[Tuple[ReductionDescriptor, FPIClaim]]:
    """Composes reductions transitively, in ledger order, or along the named reductions in `via`."""
    steps: List[Tuple[ReductionDescriptor, FPIClaim]] = []
    if via:
        by_name = {red.name: red for red in ledger}
        current = claim
        for name in via:
            if name not in by_name:
                raise FormatError(f"no ledger row named '{name}'")
            current = compose_closure(by_name[name], current)
            steps.append((by_name[name], current))
        return steps

    seen = {claim.problem}
    frontier = [claim]
    while frontier:
        current = frontier.pop(0)
        for red in _reachable(ledger, current):
            if red.source in seen:
                continue
            derived = compose_closure(red, current)
            seen.add(red.source)
            steps.append((red, derived))
            frontier.append(derived)
    return steps


# --- Ledger and claim files ---


def _pairs(text: str, line_number: int, what: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    for item in filter(None, (part.strip() for part in text.split(";"))):
        name, sep, value = item.partition("=")
        if not sep or not name.strip() or not value.strip():
            raise FormatError(f"{what} entry '{item}' must be 'name=expression'", line_number)
        pairs[name.strip()] = value.strip()
    return pairs


def _names(text: str) -> Tuple[str, ...]:
    return tuple(name.strip() for name in text.split(",") if name.strip())


def _row_descriptor(row: Dict[str, str], line_number: int) -> ReductionDescriptor:
    name = (row.get("name") or "").strip()
    label = f"row '{name}'" if name else "unnamed row"
    if None in row or any(row.get(f) is None for f in LEDGER_FIELDS):
        raise FormatError(f"{label} must have exactly {len(LEDGER_FIELDS)} '|'-separated fields", line_number)
    for required in ("name", "source", "target", "query_size", "calls"):
        if not row[required].strip():
            raise FormatError(f"{label} has an empty '{required}' field", line_number)
    executable = row["executable"].strip().lower()
    if executable not in ("yes", "no"):
        raise FormatError(f"{label}: executable must be 'yes' or 'no'", line_number)
    try:
        slack = Slack.parse(row["slack"].strip() or "delta")
    except ValueError as e:
        raise FormatError(f"{label}: slack {e}", line_number) from None

    descriptor = ReductionDescriptor(
        name=name,
        source=row["source"].strip(),
        target=row["target"].strip(),
        query_size=_pairs(row["query_size"], line_number, "query_size"),
        param_map=_pairs(row["param_map"], line_number, "param_map"),
        query_count=row["calls"].strip(),
        reduction_time=row["reduction_time"].strip() or "0",
        source_params=_names(row["source_params"]),
        target_params=_names(row["target_params"]),
        bindings=_pairs(row["bindings"], line_number, "bindings"),
        base_bound=row["base_bound"].strip(),
        slack=slack,
        citation=row["citation"].strip(),
        executable=executable == "yes",
    )
    # Every expression in the row must stay inside the running-time grammar.
    expressions = [descriptor.query_count, descriptor.reduction_time]
    if descriptor.base_bound:
        expressions.append(descriptor.base_bound)
    expressions += list(descriptor.query_size.values()) + list(descriptor.param_map.values())
    for text in expressions:
        try:
            canonicalize(descriptor._bound(text), descriptor.source_params)
        except PFGRError as e:
            raise FormatError(f"{label}: {e}", line_number) from None
    return descriptor


def parse_ledger(text: str) -> List[ReductionDescriptor]:
    """Parses the '|'-separated ledger; '#' lines are comments and the first data line is the header."""
    numbered = [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise FormatError("ledger is empty", 1)
    header_number, header = numbered[0]
    fields = [f.strip() for f in header.split("|")]
    if tuple(fields) != LEDGER_FIELDS:
        raise FormatError(f"ledger header must be '{'|'.join(LEDGER_FIELDS)}'", header_number)

    reader = csv.DictReader((line for _, line in numbered[1:]), fieldnames=fields, delimiter="|", quoting=csv.QUOTE_NONE)
    descriptors = [_row_descriptor(row, number) for (number, _), row in zip(numbered[1:], reader)]
    names = [d.name for d in descriptors]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise FormatError(f"duplicate ledger rows: {', '.join(duplicates)}")
    return descriptors


@lru_cache(maxsize=1)
def _default_ledger() -> Tuple[ReductionDescriptor, ...]:
    return tuple(parse_ledger(DEFAULT_LEDGER.read_text()))


def load_default_ledger() -> List[ReductionDescriptor]:
    return list(_default_ledger())


def load_ledger(path: Optional[Union[str, Path]] = None) -> List[ReductionDescriptor]:
    if path is None:
        return load_default_ledger()
    return parse_ledger(Path(path).read_text())


def claim_from_values(values: Mapping[str, Optional[str]]) -> FPIClaim:
    """Builds a claim from PROBLEM, PARAMETERS, SIZE, BOUND, BASE_BOUND and IMPROVEMENT entries."""
    values = {k.upper(): (v or "").strip() for k, v in values.items()}
    for required in ("PROBLEM", "BOUND"):
        if not values.get(required):
            raise FormatError(f"claim is missing {required}")
    parameters = _names(values.get("PARAMETERS", ""))
    bound = canonicalize(values["BOUND"], parameters)
    base = canonicalize(values["BASE_BOUND"], parameters) if values.get("BASE_BOUND") else None
    sizes = _names(values.get("SIZE", "")) or bound.size_variables() or ("n",)
    return FPIClaim(
        problem=values["PROBLEM"],
        bound=bound,
        parameters=frozenset(parameters),
        size_variables=tuple(sizes),
        improvement=Slack.parse(values.get("IMPROVEMENT") or "epsilon"),
        base_bound=base,
    )


def load_claim(path: Optional[Union[str, Path]] = None) -> FPIClaim:
    path = Path(path) if path is not None else DEFAULT_CLAIM
    if not path.is_file():
        raise FormatError(f"claim file '{path}' not found")
    return claim_from_values(dotenv_values(path))
