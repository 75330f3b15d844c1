#!/usr/bin/env python

"""
syncrt/test_analysis.py

===============================================================================

    Copyright © 2020-2026 the syncrt authors.

    This file is part of syncrt, a compiler and schedule simulator for
    multi-periodic synchronous data-flow programs.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.

===============================================================================

**Tests for typing, causality, clocks and inlining.**

"""

from fractions import Fraction
from itertools import permutations

import pytest

from syncrt.analysis import causality_check, clock_calculus, type_check
from syncrt.clocks import PClock
from syncrt.exceptions import (
    CausalityError,
    ClockError,
    InlineError,
    TypeCheckError,
)
from syncrt.flatten import imported_applications, inline
from syncrt.frontend import parse, read_sample_program


def _program(name: str):
    return parse(read_sample_program(name))


def _clocks(source: str):
    program = parse(source)
    return clock_calculus(program, inline(program))


# =============================================================================
# Types
# =============================================================================

def test_fcs_type_signature() -> None:
    signatures = type_check(_program("fcs.mps"))
    assert str(signatures["FCS"]) == "(int*int*int*int)->int"
    assert str(signatures["acquisition"]) == "(int*int*int)->(int*int*int)"
    assert str(signatures["PL"]) == "(int*int*int)->int"


def test_untyped_imported_parameters_default_to_int() -> None:
    signatures = type_check(parse("""
        imported node F(a) returns (o) wcet 1;
        node M (i) returns (o) let o = F(i); tel
    """))
    assert str(signatures["M"]) == "int->int"


def test_boolean_operators() -> None:
    signatures = type_check(parse(
        "node M (i: int) returns (o) let o = not (i < 3) and true; tel"))
    assert str(signatures["M"]) == "int->bool"


@pytest.mark.parametrize("source", [
    "node M (i) returns (o) let o = true + 1; tel",
    "node M (i: int) returns (o) let o = i and true; tel",
    "node M (i: bool) returns (o: int) let o = i; tel",
    "node M (i: int) returns (o: int) let o = false fby i; tel",
    "imported node F(a: int) returns (o: int) wcet 1; "
    "node M (i: bool) returns (o) let o = F(i); tel",
    "imported node F(a, b) returns (o) wcet 1; "
    "node M (i) returns (o) let o = F(i); tel",
    "node M (i) returns (o, p) let (o, p) = i; tel",
])
def test_type_errors(source: str) -> None:
    with pytest.raises(TypeCheckError):
        type_check(parse(source))


# =============================================================================
# Causality
# =============================================================================

def test_self_dependency_rejected() -> None:
    with pytest.raises(CausalityError) as excinfo:
        causality_check(_program("bad_causality.mps"))
    assert "x" in excinfo.value.cycle


def test_fby_breaks_cycles() -> None:
    summaries = causality_check(parse(
        "node M (i) returns (o) let o = i + (0 fby o); tel"))
    assert summaries["M"] == [{0}]


def test_cycle_through_node_call() -> None:
    source = """
        node id (a, b) returns (o) let o = a; tel
        node M (i) returns (o) var x; let x = id(x, i); o = x; tel
    """
    with pytest.raises(CausalityError):
        causality_check(parse(source))
    # Only the second argument is ignored by the callee.
    causality_check(parse("""
        node id (a, b) returns (o) let o = a; tel
        node M (i) returns (o) var x; let x = id(i, x); o = x; tel
    """))


# =============================================================================
# Clocks
# =============================================================================

def test_fcs_clock_signature() -> None:
    program = _program("fcs.mps")
    clocked = clock_calculus(program, inline(program))
    assert clocked.signature() == "((120,0)*(10,0)*(10,0)*(10,0))->(40,0)"


def test_rate_declaration_phase() -> None:
    assert PClock.from_rate(10, Fraction(1, 2)).phase == 5
    assert str(PClock.from_rate(10, Fraction(1, 2))) == "(10,1/2)"


@pytest.mark.parametrize("expr, expected", [
    ("i /^ 3", "(30,0)"),
    ("i *^ 2", "(5,0)"),
    ("i ~> 1/2", "(10,1/2)"),
    ("i /^ 2 ~> 1", "(20,1)"),
    ("0 fby i", "(10,0)"),
])
def test_clock_transformations(expr: str, expected: str) -> None:
    clocked = _clocks(
        "node M (i: rate (10, 0)) returns (o) let o = {}; tel".format(expr))
    assert str(clocked.var_clocks["o"]) == expected


def test_clocks_solved_backwards_from_outputs() -> None:
    clocked = _clocks(
        "node M (i) returns (o: rate (40, 0)) let o = i /^ 4; tel")
    assert str(clocked.var_clocks["i"]) == "(10,0)"


_FCS_EQUATIONS = [
    "acc_r = navigation(pos_i/^12, pos_r);",
    "order = piloting(angle_r/^4, acc_i/^4, (0 fby acc_r)*^3);",
    "(pos_i, acc_i, angle_r) = acquisition(angle, pos, acc);",
]
_FCS_VARIABLES = ["pos_r", "angle", "pos", "acc", "order", "acc_i", "acc_r",
                  "angle_r", "pos_i"]


@pytest.mark.parametrize("order", list(permutations(range(3))))
def test_clocks_ignore_equation_order(order) -> None:
    head, _, _ = read_sample_program("fcs.mps").rpartition("let\n")
    source = head + "let\n" + "\n".join(
        _FCS_EQUATIONS[k] for k in order) + "\ntel\n"
    clocked = _clocks(source)
    assert clocked.signature() == "((120,0)*(10,0)*(10,0)*(10,0))->(40,0)"
    assert {v: str(clocked.var_clocks[v]) for v in _FCS_VARIABLES} == {
        "pos_r": "(120,0)", "angle": "(10,0)", "pos": "(10,0)",
        "acc": "(10,0)", "order": "(40,0)", "acc_i": "(10,0)",
        "acc_r": "(120,0)", "angle_r": "(10,0)", "pos_i": "(10,0)",
    }


def test_mismatched_arguments_rejected() -> None:
    program = _program("bad_clocks.mps")
    with pytest.raises(ClockError):
        clock_calculus(program, inline(program))


def test_underconstrained_rejected() -> None:
    with pytest.raises(ClockError):
        _clocks("node M (i) returns (o) let o = i; tel")


# =============================================================================
# Inlining
# =============================================================================

def test_fcs_labels() -> None:
    flat = inline(_program("fcs.mps"))
    labels = sorted(app.label for app in imported_applications(flat))
    assert labels == ["AA", "FL", "NF", "NL", "PA", "PF", "PL"]
    assert flat.input_names() == ["pos_r", "angle", "pos", "acc"]


def test_repeated_calls_get_numbered_labels() -> None:
    flat = inline(parse("""
        imported node F(a) returns (o) wcet 1;
        node twice (a) returns (o) let o = F(F(a)); tel
        node M (i) returns (o) let o = twice(i); tel
    """))
    labels = sorted(app.label for app in imported_applications(flat))
    assert labels == ["F_1", "F_2"]


def test_recursion_rejected() -> None:
    with pytest.raises(InlineError):
        inline(parse("""
            node A (i) returns (o) let o = B(i); tel
            node B (i) returns (o) let o = A(i); tel
        """))
