#!/usr/bin/env python

"""
syncrt/test_frontend.py

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

**Tests for the parser and the structural checks.**

"""

from fractions import Fraction

import pytest

from syncrt.exceptions import ParseError
from syncrt.frontend import parse, read_sample_program
from syncrt.syntax import (
    App,
    Const,
    Fby,
    Offset,
    Over,
    Pair,
    pretty_print,
    Under,
    Var,
)


def _rhs(source: str, name: str = "o"):
    program = parse(source)
    return program.main_node.definitions()[name][0].rhs


# =============================================================================
# Sample programs
# =============================================================================

def test_fcs_parses() -> None:
    program = parse(read_sample_program("fcs.mps"), filename="fcs.mps")
    assert program.main == "FCS"
    fcs = program.main_node
    assert fcs.input_names() == ["pos_r", "angle", "pos", "acc"]
    assert fcs.output_names() == ["order"]
    assert fcs.param("pos_r").rate == (120, Fraction(0))
    assert fcs.param("angle").rate is None
    assert fcs.param("order").due == 15
    assert program.node("NL").imported
    assert program.node("NL").wcet == 20
    assert program.node("PL").input_names() == ["i1", "i2", "i3"]


def test_fcs_tuple_equation() -> None:
    fcs = parse(read_sample_program("fcs.mps")).main_node
    eq, k = fcs.definitions()["acc_i"]
    assert eq.lhs == ("pos_i", "acc_i", "angle_r")
    assert k == 1
    assert isinstance(eq.rhs, App)
    assert eq.rhs.node == "acquisition"
    assert isinstance(eq.rhs.arg, Pair)
    assert len(eq.rhs.arg.items) == 3


def test_main_defaults_to_last_defined_node() -> None:
    source = """
        node A (i) returns (o) let o = i; tel
        node B (i) returns (o) let o = A(i); tel
    """
    assert parse(source).main == "B"
    assert parse(source, main="A").main == "A"


def test_pretty_print_reparses() -> None:
    program = parse(read_sample_program("fcs.mps"))
    again = parse(pretty_print(program))
    assert again.main == program.main
    assert [nd.name for nd in again.nodes] == [nd.name for nd in program.nodes]
    assert pretty_print(again) == pretty_print(program)


# =============================================================================
# Expressions
# =============================================================================

def test_postfix_binds_tighter_than_fby() -> None:
    rhs = _rhs("node M (i) returns (o) let o = 0 fby i *^ 2; tel")
    assert isinstance(rhs, Fby)
    assert rhs.init.value == 0
    assert isinstance(rhs.expr, Over)
    assert rhs.expr.k == 2
    assert isinstance(rhs.expr.expr, Var)


def test_negative_fby_init() -> None:
    rhs = _rhs("node M (i) returns (o) let o = -3 fby i; tel")
    assert isinstance(rhs, Fby)
    assert isinstance(rhs.init, Const)
    assert rhs.init.value == -3


def test_rate_operators_chain_left_to_right() -> None:
    rhs = _rhs("node M (i) returns (o) let o = i /^ 3 *^ 2 ~> 1/2; tel")
    assert isinstance(rhs, Offset)
    assert rhs.q == Fraction(1, 2)
    assert isinstance(rhs.expr, Over)
    assert isinstance(rhs.expr.expr, Under)
    assert rhs.expr.expr.k == 3


def test_rational_phase_in_rate() -> None:
    program = parse("node M (i: rate (10, 1/2)) returns (o) let o = i; tel")
    assert program.main_node.param("i").rate == (10, Fraction(1, 2))


def test_comments_are_ignored() -> None:
    rhs = _rhs("""
        -- a comment
        node M (i) returns (o)
        let
          o = i;  -- another
        tel
    """)
    assert isinstance(rhs, Var)
    assert rhs.name == "i"


# =============================================================================
# Rejections
# =============================================================================

def test_syntax_error_has_position() -> None:
    source = "node M (i) returns (o)\nlet\n  o = ;\ntel\n"
    with pytest.raises(ParseError) as excinfo:
        parse(source, filename="bad.mps")
    e = excinfo.value
    assert e.span.line == 3
    assert e.filename == "bad.mps"
    assert str(e).startswith("bad.mps:3:")


@pytest.mark.parametrize("source", [
    # unknown variable
    "node M (i) returns (o) let o = j; tel",
    # unknown node
    "node M (i) returns (o) let o = F(i); tel",
    # due on an input
    "node M (i: due 3) returns (o) let o = i; tel",
    # due not below the declared period
    "node M (i) returns (o: rate (10, 0) due 10) let o = i; tel",
    # output never defined
    "node M (i) returns (o, p) let o = i; tel",
    # input redefined
    "node M (i) returns (o) let i = 1; o = i; tel",
    # duplicate definition
    "node M (i) returns (o) let o = i; o = i; tel",
    # zero rate factor
    "node M (i) returns (o) let o = i /^ 0; tel",
    # duplicate node
    "imported node F(a) returns (o) wcet 1; "
    "imported node F(a) returns (o) wcet 2; "
    "node M (i) returns (o) let o = F(i); tel",
])
def test_structural_rejections(source: str) -> None:
    with pytest.raises(ParseError):
        parse(source)


def test_missing_main() -> None:
    with pytest.raises(ParseError):
        parse("imported node F(a) returns (o) wcet 1;")
    with pytest.raises(ParseError):
        parse("node M (i) returns (o) let o = i; tel", main="N")
