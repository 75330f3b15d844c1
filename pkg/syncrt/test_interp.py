#!/usr/bin/env python

"""
syncrt/test_interp.py

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

**Tests for the reference interpreter.**

"""

from fractions import Fraction
import logging
from typing import List, Tuple

import pytest

from syncrt.clocks import PClock
from syncrt.compiler import compile_sample, compile_source
from syncrt.interp import (
    Flow,
    fold,
    instance_count,
    Lit,
    Node,
    Op,
)


# =============================================================================
# Values and flows
# =============================================================================

def test_fold() -> None:
    assert fold("+", [Lit(1), Lit(2)]) == Lit(3)
    assert fold("<", [Lit(1), Lit(2)]) == Lit(True)
    assert fold("not", [Lit(True)]) == Lit(False)
    folded = fold("*", [Lit(2), Node("i", 3)])
    assert isinstance(folded, Op)
    assert folded == Op("*", (Lit(2), Node("i", 3)))


def test_node_identity_ignores_arguments() -> None:
    assert Node("F", 1, (Lit(0), )) == Node("F", 1)
    assert Node("F", 1) != Node("F", 2)
    assert Node("F", 1, port=1) != Node("F", 1)
    assert Node("F", 1, (Node("i", 1), )).short() == "F<1>"


def test_instance_count() -> None:
    assert instance_count(PClock(10), 240) == 24
    assert instance_count(PClock(10, 5), 20) == 2
    assert instance_count(PClock(10, 25), 20) == 0
    assert instance_count(PClock(Fraction(5, 2)), 5) == 2


def test_flow_lookup() -> None:
    f = Flow("x", PClock(10, 5), [Lit(k) for k in range(3)])
    assert f.tags == [5, 15, 25]
    assert f.value_at(Fraction(15)) == Lit(1)
    assert f.value_at(Fraction(20)) is None


# =============================================================================
# Programs
# =============================================================================

def test_dw_usefull() -> None:
    result = compile_sample("dw_usefull.mps").evaluate(16)
    assert len(result.flow("i")) == 4
    assert result.calls["A"] == [(Node("i", k), ) for k in range(4)]
    # Undersampling keeps every other value of A.
    assert result.calls["B"] == [(Node("A", 0), ), (Node("A", 2), )]
    assert result.flow("o").values == [Node("B", 0), Node("B", 1)]
    assert result.flow("o").tags == [0, 8]


def test_fcs_delayed_feedback() -> None:
    result = compile_sample("fcs.mps").evaluate(240)
    pl = result.calls["PL"]
    assert len(pl) == 6
    assert [args[2] for args in pl] == [
        Lit(0), Lit(0), Lit(0), Node("NL", 0), Node("NL", 0), Node("NL", 0)]
    assert [args[0] for args in pl] == [Node("FL", 4 * m) for m in range(6)]
    assert result.calls["NF"][1] == (Node("PA", 12), )
    assert result.calls["NL"][1] == (Node("NF", 1), Node("pos_r", 1))
    assert result.flow("order").values[5] == Node("PL", 5)


def test_offset_tags() -> None:
    result = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (10, 0)) returns (o) let o = F(i ~> 1/2); tel
    """).evaluate(20)
    assert result.flow("o").tags == [5, 15]
    assert result.calls["F"] == [(Node("i", 0), ), (Node("i", 1), )]


def _through_f(expr: str) -> Tuple[List, List]:
    result = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (10, 0)) returns (o) let o = F({}); tel
    """.format(expr)).evaluate(40)
    return result.flow("o").tags, result.calls["F"]


@pytest.mark.parametrize("expr, same_as", [
    ("i *^ 2 /^ 2", "i"),
    ("(i ~> 1/2) ~> 1/2", "i ~> 1"),
    ("i ~> 1/2 /^ 2", "i /^ 2 ~> 1/4"),
])
def test_operator_identities(expr: str, same_as: str) -> None:
    assert _through_f(expr) == _through_f(same_as)


def test_offset_shifted_back() -> None:
    plain_tags, plain_calls = _through_f("i")
    tags, calls = _through_f("i ~> 1/2")
    assert [t - 5 for t in tags] == plain_tags
    assert calls == plain_calls


def test_under_after_over_repeats() -> None:
    tags, calls = _through_f("i /^ 2 *^ 2")
    assert tags == [0, 10, 20, 30]
    assert [args[0] for args in calls] == [
        Node("i", 0), Node("i", 0), Node("i", 2), Node("i", 2)]


def test_fby_delays_one_instance() -> None:
    tags, calls = _through_f("-1 fby i")
    assert tags == [0, 10, 20, 30]
    assert [args[0] for args in calls] == [
        Lit(-1), Node("i", 0), Node("i", 1), Node("i", 2)]


def test_fractional_tick() -> None:
    compiled = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (3, 1/2)) returns (o) let o = F(i); tel
    """)
    result = compiled.evaluate(12)
    assert result.tick == Fraction(1, 2)
    assert result.flow("i").tags == [3, 9]


def test_default_horizon_is_whole_hyperperiods(caplog) -> None:
    compiled = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (10, 1/2)) returns (o) let o = F(i); tel
    """)
    assert compiled.taskset.task("i").r == 5
    assert compiled.taskset.default_horizon() == 30
    with caplog.at_level(logging.WARNING, logger="syncrt.interp"):
        result = compiled.evaluate()
    assert result.horizon == 30
    assert "not a multiple" not in caplog.text
    assert result.flow("o").tags == [5, 15, 25]
