#!/usr/bin/env python3
"""
Format Tests for pfgr

Parsers must reject malformed input with the offending line number, and every
writer must produce text its parser reads back to the same object.
"""

import pytest

from pfgr.exceptions import FormatError
from pfgr.formats import parse_dimacs, parse_graph, parse_ov, parse_td, write_dimacs, write_graph, write_ov, write_td
from pfgr.generators import gen_cnf, gen_ov, gen_partial_ktree
from pfgr.instances import Label
from pfgr.models import RoleKind
from pfgr.reductions import ov_graph_decomposition, ov_to_diameter


# --- OV files ---


def test_parse_ov_example():
    instance = parse_ov("2 1 3\n101\n010\n010\n")
    assert instance.n_a == 2 and instance.n_b == 1 and instance.d == 3
    assert instance.set_a == ((1, 0, 1), (0, 1, 0))
    assert instance.set_b == ((0, 1, 0),)


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("1 1 2\n10\n01", 3),  # no trailing newline
        ("1 1\n10\n01\n", 1),  # short header
        ("1 1 2\n10\n", 2),  # missing vector
        ("1 1 2\n10\n011\n", 3),  # wrong length
        ("1 1 2\n1x\n01\n", 2),  # non-binary
        ("0 1 2\n01\n", 1),  # empty set
    ],
)
def test_parse_ov_errors_carry_line_numbers(text, line_number):
    with pytest.raises(FormatError) as excinfo:
        parse_ov(text)
    assert excinfo.value.line_number == line_number
    assert str(excinfo.value).startswith(f"line {line_number}:")


def test_write_ov_is_read_back():
    instance = gen_ov(7, 5, plant=True, seed=3)
    assert parse_ov(write_ov(instance)) == instance


# --- DIMACS ---


def test_parse_dimacs_with_comments_and_split_clauses():
    text = "c example\np cnf 3 2\n1 -2\n0 2 3 0\n"
    cnf = parse_dimacs(text)
    assert cnf.num_vars == 3
    assert cnf.clauses == (frozenset({1, -2}), frozenset({2, 3}))


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("1 2 0\n", 1),
        ("p cnf 2 1\n1 3 0\n", 2),
        ("p cnf 2 1\n1 a 0\n", 2),
        ("p cnf 2 2\n1 0\n", 1),
        ("p cnf 2 1\n0\n", 2),
        ("p sat 2 1\n1 0\n", 1),
    ],
)
def test_parse_dimacs_errors(text, line_number):
    with pytest.raises(FormatError) as excinfo:
        parse_dimacs(text)
    assert excinfo.value.line_number == line_number


def test_write_dimacs_is_read_back():
    cnf = gen_cnf(8, 20, seed=2)
    assert parse_dimacs(write_dimacs(cnf)) == cnf


# --- Graphs and decompositions ---


def test_parse_graph_with_weights_and_labels():
    text = "c g\np tw 3 2\n1 2\nw 2 3 4\nl 1 A1\nl 3 x\n"
    graph = parse_graph(text)
    assert graph.vertex_count == 3
    assert graph.edges == {(0, 1): 1, (1, 2): 4}
    assert graph.label_of(0) == Label(RoleKind.A, 0)
    assert graph.label_of(2) == Label(RoleKind.X)
    assert graph.label_of(1).kind == RoleKind.PLAIN


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("1 2\n", 1),
        ("p tw 2 1\n1 3\n", 2),
        ("p tw 2 1\n1 1\n", 2),
        ("p tw 2 1\n1 2\nl 1 Q\n", 3),
        ("p tw 2 2\n1 2\n", 1),
    ],
)
def test_parse_graph_errors(text, line_number):
    with pytest.raises(FormatError) as excinfo:
        parse_graph(text)
    assert excinfo.value.line_number == line_number


def test_reduction_graph_and_decomposition_are_read_back():
    instance = gen_ov(6, 3, seed=9)
    graph, _ = ov_to_diameter(instance)
    td = ov_graph_decomposition(instance)
    assert parse_graph(write_graph(graph)) == graph
    assert parse_td(write_td(td, graph.vertex_count)) == td


def test_parse_td_example():
    text = "c td\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"
    td = parse_td(text)
    assert td.bags == (frozenset({0, 1}), frozenset({1, 2}))
    assert td.tree_edges == frozenset({(0, 1)})
    assert td.width == 1


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("b 1 1\n", 1),
        ("s td 1 1 1\nb 2 1\n", 2),
        ("s td 2 1 2\nb 1 1\nb 1 2\n", 3),
        ("s td 2 1 2\nb 1 1\nb 2 2\n1 2 3\n", 4),
        ("s td 2 1 2\nb 1 1\n", 1),
    ],
)
def test_parse_td_errors(text, line_number):
    with pytest.raises(FormatError) as excinfo:
        parse_td(text)
    assert excinfo.value.line_number == line_number


def test_ktree_decomposition_text_keeps_width():
    graph, td = gen_partial_ktree(15, 2, keep_prob=0.5, seed=1)
    text = write_td(td, graph.vertex_count)
    assert text.splitlines()[0] == f"s td {len(td.bags)} 3 15"
    assert parse_td(text).width == 2
