# FILE: pfgr/expressions.py
# ==============================================================================
# Running-time expressions: parsing text into sympy, the canonical atom form
# used by the closure calculus, rendering, and asymptotic comparison.
#
# Symbols listed as parameters are fixed constants; every other symbol is a
# size variable tending to infinity. A canonical expression is a sum of terms,
# each a product of atoms:
#   ParamPoly  k^c              Opaque    f(k1, ...) or any other k-only factor
#   ExpLin     2^{c*n}          PolyN     n^c
#   SumPower   (t1 + t2 ...)^c  PolyLog   log^c(t1 + ...)
# ==============================================================================
import re
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import sympy
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .exceptions import UnsupportedFormError
from .models import Comparison

ExprLike = Union[str, sympy.Expr, int]

ZERO = sympy.Integer(0)
Levels = Tuple[sympy.Expr, sympy.Expr, sympy.Expr]  # exponential, polynomial, logarithmic
Growth = Dict[str, Levels]
NO_GROWTH: Levels = (ZERO, ZERO, ZERO)


def symbol(name: str) -> sympy.Symbol:
    return sympy.Symbol(name, positive=True)


# --- Parsing ---

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_LOG_BRACED = re.compile(r"log\^\{([^{}]*)\}\s*\(")
_LOG_PLAIN = re.compile(r"log\^([A-Za-z0-9_.]+)\s*\(")
_TRANSFORMS = standard_transformations + (convert_xor,)


def _prepare(text: str) -> str:
    text = text.replace("·", "*").replace("×", "*").replace("−", "-")
    text = _LOG_BRACED.sub(r"logpow((\1),", text)
    text = _LOG_PLAIN.sub(r"logpow((\1),", text)
    return text.replace("{", "(").replace("}", ")")


def _functions(exact: bool) -> Dict[str, object]:
    if exact:
        # Sizes and call counts are evaluated with binary logarithms and real rounding.
        log = lambda x: sympy.log(x, 2)  # noqa: E731
        return {
            "log": log,
            "logpow": lambda e, x: log(x) ** e,
            "ceiling": sympy.ceiling,
            "floor": sympy.floor,
            "sqrt": sympy.sqrt,
        }
    # Rounding and the base of the logarithm are constant factors.
    return {
        "log": lambda x: sympy.log(x),
        "logpow": lambda e, x: sympy.log(x) ** e,
        "ceiling": lambda x: x,
        "floor": lambda x: x,
        "sqrt": sympy.sqrt,
    }


def parse_expression(text: str, exact: bool = False) -> sympy.Expr:
    """Parses `d^2*(n+d)*log^d(n+d)`-style text. Unknown called names become opaque functions.

    With `exact`, ceiling/floor round and log is base 2, for evaluating concrete sizes.
    """
    prepared = _prepare(text)
    local: Dict[str, object] = dict(_functions(exact))
    for match in _IDENT.finditer(prepared):
        name = match.group(0)
        if name in local:
            continue
        called = prepared[match.end():].lstrip().startswith("(")
        local[name] = sympy.Function(name) if called else symbol(name)
    try:
        return sympy.sympify(parse_expr(prepared, local_dict=local, transformations=_TRANSFORMS))
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as e:
        raise UnsupportedFormError(f"cannot parse expression '{text}': {e}") from None


def evaluate(expr: ExprLike, values: Mapping[str, object]) -> Optional[Union[int, float]]:
    """Numeric value at the given symbol values, or None while any symbol stays unbound."""
    if isinstance(expr, str):
        expr = parse_expression(expr, exact=True)
    expr = sympy.sympify(expr)
    result = expr.subs({symbol(name): sympy.sympify(value) for name, value in values.items()})
    if result.free_symbols or not result.is_number:
        return None
    if result.is_Integer:
        return int(result)
    return float(result)


# --- Canonical atoms ---


def _exponent_text(exp: sympy.Expr) -> str:
    text = str(exp).replace(" ", "").replace("**", "^")
    return text if re.fullmatch(r"[A-Za-z0-9_]+", text) else "{" + text + "}"


def _power(text: str, exp: sympy.Expr) -> str:
    return text if exp == 1 else f"{text}^{_exponent_text(exp)}"


def _is_zero(value: sympy.Expr) -> bool:
    return sympy.simplify(value) == 0


def _scale(growth: Optional[Growth], factor: sympy.Expr) -> Optional[Growth]:
    if growth is None:
        return None
    return {var: tuple(level * factor for level in levels) for var, levels in growth.items()}


def _combine(a: Optional[Growth], b: Optional[Growth]) -> Optional[Growth]:
    if a is None or b is None:
        return None
    merged = dict(a)
    for var, levels in b.items():
        base = merged.get(var, NO_GROWTH)
        merged[var] = tuple(x + y for x, y in zip(base, levels))
    return merged


@dataclass(frozen=True)
class ParamPoly:
    param: str
    exp: sympy.Expr = sympy.Integer(1)
    kind = 0

    @property
    def key(self):
        return (self.kind, self.param)

    @property
    def power(self):
        return self.exp

    def with_power(self, value):
        return replace(self, exp=value)

    @property
    def param_only(self) -> bool:
        return True

    def growth(self) -> Optional[Growth]:
        return {}

    def render(self) -> str:
        return _power(self.param, self.exp)

    def to_sympy(self) -> sympy.Expr:
        return symbol(self.param) ** self.exp


@dataclass(frozen=True)
class Opaque:
    """A parameter-only factor outside the polynomial forms, e.g. f(k1, k2) or 2^d."""

    call: sympy.Expr
    exp: sympy.Expr = sympy.Integer(1)
    kind = 1

    @property
    def key(self):
        return (self.kind, str(self.call))

    @property
    def name(self) -> str:
        return self.call.func.__name__ if isinstance(self.call, AppliedUndef) else str(self.call)

    @property
    def power(self):
        return self.exp

    def with_power(self, value):
        return replace(self, exp=value)

    @property
    def param_only(self) -> bool:
        return True

    def growth(self) -> Optional[Growth]:
        return {}

    def render(self) -> str:
        text = str(self.call).replace(" ", "").replace("**", "^")
        if not isinstance(self.call, AppliedUndef) and self.exp != 1:
            text = f"({text})"
        return _power(text, self.exp)

    def to_sympy(self) -> sympy.Expr:
        return self.call ** self.exp


@dataclass(frozen=True)
class ExpLin:
    """2^{coefficient * var}."""

    var: str
    coefficient: sympy.Expr
    kind = 2

    @property
    def key(self):
        return (self.kind, self.var)

    @property
    def power(self):
        return self.coefficient

    def with_power(self, value):
        return replace(self, coefficient=value)

    @property
    def param_only(self) -> bool:
        return False

    def growth(self) -> Optional[Growth]:
        return {self.var: (self.coefficient, ZERO, ZERO)}

    def render(self) -> str:
        return "2^" + _exponent_text(self.coefficient * symbol(self.var))

    def to_sympy(self) -> sympy.Expr:
        return sympy.Integer(2) ** (self.coefficient * symbol(self.var))


@dataclass(frozen=True)
class PolyN:
    var: str
    exp: sympy.Expr = sympy.Integer(1)
    kind = 3

    @property
    def key(self):
        return (self.kind, self.var)

    @property
    def power(self):
        return self.exp

    def with_power(self, value):
        return replace(self, exp=value)

    @property
    def param_only(self) -> bool:
        return False

    def growth(self) -> Optional[Growth]:
        return {self.var: (ZERO, self.exp, ZERO)}

    def render(self) -> str:
        return _power(self.var, self.exp)

    def to_sympy(self) -> sympy.Expr:
        return symbol(self.var) ** self.exp


@dataclass(frozen=True)
class SumPower:
    terms: Tuple["Term", ...]
    exp: sympy.Expr = sympy.Integer(1)
    kind = 4

    @property
    def key(self):
        return (self.kind, self.terms)

    @property
    def power(self):
        return self.exp

    def with_power(self, value):
        return replace(self, exp=value)

    @property
    def param_only(self) -> bool:
        return all(t.param_only for t in self.terms)

    def growth(self) -> Optional[Growth]:
        return _scale(_max_growth([t.growth() for t in self.terms]), self.exp)

    def render(self) -> str:
        return _power("(" + "+".join(t.render() for t in self.terms) + ")", self.exp)

    def to_sympy(self) -> sympy.Expr:
        return sympy.Add(*(t.to_sympy() for t in self.terms)) ** self.exp


@dataclass(frozen=True)
class PolyLog:
    base: Tuple["Term", ...]
    exp: sympy.Expr = sympy.Integer(1)
    kind = 5

    @property
    def key(self):
        return (self.kind, self.base)

    @property
    def power(self):
        return self.exp

    def with_power(self, value):
        return replace(self, exp=value)

    @property
    def param_only(self) -> bool:
        return all(t.param_only for t in self.base)

    def growth(self) -> Optional[Growth]:
        inner = _max_growth([t.growth() for t in self.base])
        if inner is None:
            return None
        growth: Growth = {}
        for var, (e, p, l) in inner.items():
            if not _is_zero(e):
                growth[var] = (ZERO, self.exp, ZERO)
            elif not _is_zero(p):
                growth[var] = (ZERO, ZERO, self.exp)
            elif not _is_zero(l):
                return None  # iterated logarithms are outside the grammar
        return growth

    def render(self) -> str:
        head = "log" if self.exp == 1 else f"log^{_exponent_text(self.exp)}"
        return head + "(" + "+".join(t.render() for t in self.base) + ")"

    def to_sympy(self) -> sympy.Expr:
        return sympy.log(sympy.Add(*(t.to_sympy() for t in self.base))) ** self.exp


Atom = Union[ParamPoly, Opaque, ExpLin, PolyN, SumPower, PolyLog]


def _atom_order(atom: Atom):
    return (atom.kind, str(atom.key[1]), str(atom.power))


@dataclass(frozen=True)
class Term:
    atoms: Tuple[Atom, ...] = ()

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> "Term":
        merged: Dict[object, Atom] = {}
        for atom in atoms:
            if atom.key in merged:
                current = merged[atom.key]
                merged[atom.key] = current.with_power(current.power + atom.power)
            else:
                merged[atom.key] = atom
        kept = [a for a in merged.values() if not _is_zero(a.power)]
        return cls(tuple(sorted(kept, key=_atom_order)))

    @property
    def is_constant(self) -> bool:
        return not self.atoms

    @property
    def param_only(self) -> bool:
        return all(a.param_only for a in self.atoms)

    def growth(self) -> Optional[Growth]:
        growth: Optional[Growth] = {}
        for atom in self.atoms:
            growth = _combine(growth, atom.growth())
        return growth

    def render(self) -> str:
        return "·".join(a.render() for a in self.atoms) if self.atoms else "1"

    def to_sympy(self) -> sympy.Expr:
        return sympy.Mul(*(a.to_sympy() for a in self.atoms))


def _term_order(term: Term):
    return (term.param_only, term.render())


@dataclass(frozen=True)
class RuntimeExpr:
    """Canonical sum of terms.

    Parameters are taken to be at least 1, so constants and terms that differ
    from another only by a smaller parameter factor are absorbed: (d+1)·n and
    d·n + n share the form d·n. Terms of incomparable growth stay side by side.
    """

    terms: Tuple[Term, ...] = ()

    def render(self) -> str:
        return " + ".join(t.render() for t in self.terms) if self.terms else "0"

    def __str__(self) -> str:
        return self.render()

    def to_sympy(self) -> sympy.Expr:
        return sympy.Add(*(t.to_sympy() for t in self.terms))

    @property
    def param_only(self) -> bool:
        return all(t.param_only for t in self.terms)

    def size_variables(self) -> Tuple[str, ...]:
        growth = self.growth() or {}
        return tuple(sorted(growth))

    def growth(self) -> Optional[Growth]:
        return _max_growth([t.growth() for t in self.terms])

    def param_factor(self) -> "RuntimeExpr":
        """Parameter-only atoms of the leading term."""
        if not self.terms:
            return RuntimeExpr((Term(),))
        return RuntimeExpr((Term(tuple(a for a in self.terms[0].atoms if a.param_only)),))


# --- Conversion from sympy ---


def _exponent(exp: sympy.Expr, parameters: frozenset) -> sympy.Expr:
    if exp.has(sympy.Float):
        exp = sympy.nsimplify(exp, rational=True)
    if any(s.name not in parameters for s in exp.free_symbols):
        raise UnsupportedFormError(f"size variable in exponent '{exp}'")
    return exp


def _has_size(expr: sympy.Expr, parameters: frozenset) -> bool:
    return any(s.name not in parameters for s in expr.free_symbols)


def _terms(expr: sympy.Expr, parameters: frozenset) -> List[Term]:
    if expr.is_number:
        return [Term()] if expr.is_positive else []
    if expr.is_Add:
        collected: List[Term] = []
        for arg in expr.args:
            if not arg.is_number and arg.could_extract_minus_sign():
                raise UnsupportedFormError(f"negative term '{arg}' in '{expr}'")
            collected.extend(_terms(arg, parameters))
        return collected
    return [Term.of(_atoms(expr, parameters))]


def _inner_sum(expr: sympy.Expr, parameters: frozenset) -> Tuple[Term, ...]:
    """Terms of a sum that stays a base: constants drop out, nothing is absorbed."""
    return _normalize(_terms(expr, parameters), absorb=False)


def _atoms(expr: sympy.Expr, parameters: frozenset) -> List[Atom]:
    if expr.is_number:
        return []
    if expr.is_Symbol:
        return [ParamPoly(expr.name)] if expr.name in parameters else [PolyN(expr.name)]
    if expr.is_Mul:
        coefficient, rest = expr.as_coeff_Mul()
        if coefficient.is_negative:
            raise UnsupportedFormError(f"negative factor in '{expr}'")
        atoms: List[Atom] = []
        for factor in sympy.Mul.make_args(rest):
            atoms.extend(_atoms(factor, parameters))
        return atoms
    if expr.is_Add:
        terms = _inner_sum(expr, parameters)
        if len(terms) == 1:
            return list(terms[0].atoms)
        return [SumPower(terms)] if terms else []
    if expr.is_Pow:
        base, exp = expr.base, expr.exp
        if base.is_number:
            if not _has_size(exp, parameters):
                return [Opaque(expr)] if expr.free_symbols else []
            return [_exp_lin(base, exp, parameters)]
        exp = _exponent(exp, parameters)
        return [atom.with_power(atom.power * exp) for atom in _atoms(base, parameters)]
    if isinstance(expr, sympy.log):
        terms = _inner_sum(expr.args[0], parameters)
        if not terms or all(t.is_constant for t in terms):
            return []
        return [PolyLog(terms)]
    if isinstance(expr, AppliedUndef):
        if _has_size(expr, parameters):
            raise UnsupportedFormError(f"opaque factor '{expr}' depends on a size variable")
        return [Opaque(expr)]
    if not _has_size(expr, parameters):
        return [Opaque(expr)]
    raise UnsupportedFormError(f"'{expr}' is outside the running-time grammar")


def _exp_lin(base: sympy.Expr, exp: sympy.Expr, parameters: frozenset) -> ExpLin:
    sizes = [s for s in exp.free_symbols if s.name not in parameters]
    if len(sizes) != 1 or not base.is_positive or base <= 1:
        raise UnsupportedFormError(f"exponential '{base}^({exp})' is outside the grammar")
    var = sizes[0]
    _, dependent = exp.as_independent(var, as_Add=True)
    coefficient = sympy.simplify(dependent / var)
    if coefficient.has(var):
        raise UnsupportedFormError(f"exponent '{exp}' is not linear in {var}")
    if base != 2:
        coefficient = sympy.simplify(coefficient * sympy.log(base, 2))
    return ExpLin(var.name, _exponent(coefficient, parameters))


def _param_divides(small: Term, large: Term) -> bool:
    """Same size atoms, and every parameter atom of `small` appears in `large` with no larger power."""
    if [a for a in small.atoms if not a.param_only] != [a for a in large.atoms if not a.param_only]:
        return False
    powers = {a.key: a.power for a in large.atoms if a.param_only}
    for atom in small.atoms:
        if not atom.param_only:
            continue
        if atom.key not in powers or sympy.sympify(powers[atom.key] - atom.power).is_nonnegative is not True:
            return False
    return True


def _normalize(terms: List[Term], absorb: bool) -> Tuple[Term, ...]:
    flat: List[Term] = []
    for term in terms:
        # A lone first-power sum is just more terms of the enclosing sum.
        if len(term.atoms) == 1 and isinstance(term.atoms[0], SumPower) and term.atoms[0].exp == 1:
            flat.extend(term.atoms[0].terms)
        else:
            flat.append(term)
    if any(not t.is_constant for t in flat):
        flat = [t for t in flat if not t.is_constant]
    unique = sorted(set(flat), key=_term_order)
    unique = [t for t in unique if not any(o is not t and _param_divides(t, o) for o in unique)]
    if absorb and len(unique) > 1:
        growths = [t.growth() for t in unique]
        unique = [
            t
            for i, t in enumerate(unique)
            if not any(j != i and _compare_growth(growths[j], growths[i]) == Comparison.DOMINATES for j in range(len(unique)))
        ]
    return tuple(unique)


def canonicalize(expr: ExprLike, parameters: Iterable[str] = ()) -> RuntimeExpr:
    """Canonical form of `expr`; top-level terms dominated by another term are absorbed."""
    if isinstance(expr, str):
        expr = parse_expression(expr)
    expr = sympy.sympify(expr)
    return RuntimeExpr(_normalize(_terms(expr, frozenset(parameters)), absorb=True))


# --- Comparison ---


def _sign(value: sympy.Expr) -> Optional[int]:
    if value.is_positive:
        return 1
    if value.is_negative:
        return -1
    return None


def _compare_levels(a: Levels, b: Levels) -> Comparison:
    diffs = [sympy.simplify(x - y) for x, y in zip(a, b)]
    for i, diff in enumerate(diffs):
        if diff == 0:
            continue
        sign = _sign(diff)
        if sign is None:
            return Comparison.INCOMPARABLE
        # A parameter-dependent lower level pulling the other way is not decided.
        for lower in diffs[i + 1:]:
            if lower != 0 and lower.free_symbols and _sign(lower) != sign:
                return Comparison.INCOMPARABLE
        return Comparison.DOMINATES if sign > 0 else Comparison.DOMINATED
    return Comparison.EQUAL


def _compare_growth(a: Optional[Growth], b: Optional[Growth]) -> Comparison:
    if a is None or b is None:
        return Comparison.INCOMPARABLE
    verdicts = set()
    for var in sorted(set(a) | set(b)):
        verdict = _compare_levels(a.get(var, NO_GROWTH), b.get(var, NO_GROWTH))
        if verdict == Comparison.INCOMPARABLE:
            return verdict
        verdicts.add(verdict)
    verdicts.discard(Comparison.EQUAL)
    if not verdicts:
        return Comparison.EQUAL
    return verdicts.pop() if len(verdicts) == 1 else Comparison.INCOMPARABLE


def _max_growth(growths: List[Optional[Growth]]) -> Optional[Growth]:
    if any(g is None for g in growths):
        return None
    if not growths:
        return {}
    best = growths[0]
    for growth in growths[1:]:
        verdict = _compare_growth(growth, best)
        if verdict == Comparison.INCOMPARABLE:
            return None
        if verdict == Comparison.DOMINATES:
            best = growth
    return best


def expr_compare(first: RuntimeExpr, second: RuntimeExpr) -> Comparison:
    """Asymptotic order with parameters fixed and size variables tending to infinity."""
    if first == second:
        return Comparison.EQUAL
    return _compare_growth(first.growth(), second.growth())


def parse_runtime(text: str, parameters: Iterable[str] = ()) -> RuntimeExpr:
    return canonicalize(parse_expression(text), parameters)
