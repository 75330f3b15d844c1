#!/usr/bin/env python

"""
syncrt/test_taskgraph.py

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

**Tests for extended precedences and task-graph extraction.**

"""

from fractions import Fraction

import pytest

from syncrt.compiler import compile_sample, compile_source
from syncrt.config import default_config
from syncrt.exceptions import TaskGraphError
from syncrt.precedence import (
    consumed_instance,
    format_ops,
    g_ops,
    parse_op,
    PrecOp,
    pword,
    qshift,
    write_mask,
)
from syncrt.taskgraph import release_violations, TaskKind, to_dot

FBY = PrecOp.delay()


def under(k: int) -> PrecOp:
    return PrecOp.under(k)


def over(k: int) -> PrecOp:
    return PrecOp.over(k)


# =============================================================================
# Operators
# =============================================================================

def test_g_ops() -> None:
    assert [g_ops((over(3), ), n) for n in range(3)] == [0, 3, 6]
    assert [g_ops((under(4), ), n) for n in range(6)] == [0, 1, 1, 1, 1, 2]
    assert g_ops((FBY, ), 0) == 1
    assert g_ops((FBY, over(3)), 1) == 6
    assert g_ops((PrecOp.offset(Fraction(1, 2)), ), 5) == 5


def test_pword_and_qshift() -> None:
    assert pword(()) == 1
    assert pword((under(12), )) == 12
    assert pword((over(3), )) == 1
    assert pword((over(4), under(2))) == 1
    assert pword((under(2), over(4))) == 2
    assert pword((over(2), under(4))) == 2
    assert qshift((under(4), )) == 1
    assert qshift((over(3), )) == 3


def test_g_ops_increments_repeat() -> None:
    for ops in [(under(3), over(2)), (over(2), under(3)), (under(4), ),
                (over(2), under(2), under(3))]:
        p, q = pword(ops), qshift(ops)
        for n in range(20):
            assert g_ops(ops, n + p) == g_ops(ops, n) + q


def test_consumed_instance() -> None:
    # Each consumer instance reads the last producer instance preceding it.
    assert [consumed_instance((under(2), ), m) for m in range(3)] == [0, 2, 4]
    assert [consumed_instance((over(3), ), m) for m in range(6)] == \
        [0, 0, 0, 1, 1, 1]
    assert consumed_instance((FBY, over(3)), 2) == -1
    assert consumed_instance((FBY, over(3)), 3) == 0
    assert consumed_instance((FBY, ), 0) == -1
    for ops in [(under(3), ), (over(2), ), (FBY, under(2))]:
        for m in range(10):
            n = consumed_instance(ops, m)
            if n >= 0:
                assert g_ops(ops, n) <= m < g_ops(ops, n + 1)


def test_write_mask() -> None:
    assert write_mask(()) == (True, )
    assert write_mask((under(4), )) == (True, False, False, False)
    assert write_mask((FBY, over(3))) == (True, )
    assert write_mask((FBY, under(2))) == (False, True)


def test_op_text() -> None:
    ops = (FBY, over(3), under(12), PrecOp.offset(Fraction(1, 2)))
    assert format_ops(ops) == "fby.*^3./^12.~>1/2"
    assert tuple(parse_op(text) for text in format_ops(ops).split(".")) \
        == ops
    with pytest.raises(ValueError):
        parse_op("^3")


# =============================================================================
# Extraction
# =============================================================================

def test_fcs_tasks() -> None:
    g = compile_sample("fcs.mps").graph
    assert [t.name for t in g.tasks] == [
        "pos_r", "angle", "pos", "acc", "PA", "AA", "FL", "NF", "NL", "PF",
        "PL", "order"]
    assert g.tick == 1
    attributes = {t.name: (t.T, t.C, t.r) for t in g.tasks}
    assert attributes["pos_r"] == (120, 0, 0)
    assert attributes["FL"] == (10, 3, 0)
    assert attributes["PF"] == (40, 4, 0)
    assert attributes["NL"] == (120, 20, 0)
    assert attributes["order"] == (40, 0, 0)
    assert g.task("order").kind == TaskKind.actuator
    assert g.task("order").due == 15
    assert g.task("acc").kind == TaskKind.sensor
    assert g.hyperperiod() == 120


def test_fcs_edges() -> None:
    g = compile_sample("fcs.mps").graph
    edges = {(e.src, e.dst): e for e in g.edges}
    assert len(edges) == 11
    assert format_ops(edges[("PA", "NF")].ops) == "/^12"
    assert format_ops(edges[("FL", "PL")].ops) == "/^4"
    assert format_ops(edges[("pos_r", "NL")].ops) == ""
    feedback = edges[("NL", "PL")]
    assert format_ops(feedback.ops) == "fby.*^3"
    assert feedback.delayed
    assert feedback.init == 0
    assert feedback.dst_port == 2
    assert release_violations(g) == []


def test_fcs_dot() -> None:
    dot = to_dot(compile_sample("fcs.mps").graph)
    assert dot.startswith('digraph "FCS" {')
    assert '"NL" -> "PL" [label="fby.*^3", style=dashed];' in dot
    assert '"PA" [label="PA [10,1,0]", shape=box];' in dot


def test_fractional_tick() -> None:
    compiled = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (3, 1/2)) returns (o) let o = F(i); tel
    """)
    g = compiled.graph
    assert g.tick == Fraction(1, 2)
    assert (g.task("i").T, g.task("i").r) == (6, 3)
    assert g.task("F").C == 2


def test_tick_limit() -> None:
    config = default_config()
    config["tick_limit"] = 1
    with pytest.raises(TaskGraphError):
        compile_source("""
            imported node F(a) returns (o) wcet 1;
            node M (i: rate (3, 1/2)) returns (o) let o = F(i); tel
        """, config=config)


def test_wcet_overrides() -> None:
    config = default_config()
    config["wcet_overrides"] = {"NL": 25}
    config["sensor_wcet"] = 1
    g = compile_sample("fcs.mps", config=config).graph
    assert g.task("NL").C == 25
    assert g.task("pos").C == 1
    assert g.task("order").C == 0


def test_offset_release() -> None:
    g = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (10, 0)) returns (o) let o = F(i ~> 1/2); tel
    """).graph
    assert g.task("F").r == 5
    assert g.task("o").r == 5
    assert release_violations(g) == []


@pytest.mark.parametrize("source", [
    # operator between tasks
    "node M (i: rate (10, 0)) returns (o) let o = i + 1; tel",
    # variable defined only through a delay
    """
    imported node F(a, b) returns (o) wcet 1;
    node M (i: rate (10, 0)) returns (o) var x;
    let x = 0 fby x; o = F(i, x); tel
    """,
])
def test_rejections(source: str) -> None:
    with pytest.raises(TaskGraphError):
        compile_source(source)


def test_over_before_fby_sample() -> None:
    with pytest.raises(TaskGraphError):
        compile_sample("bad_over_before_fby.mps")
