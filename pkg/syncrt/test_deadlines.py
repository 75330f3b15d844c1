#!/usr/bin/env python

"""
syncrt/test_deadlines.py

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

**Tests for deadline words and the deadline calculus.**

"""

import pytest

from syncrt import deadlines
from syncrt.compiler import compile_sample, compile_source
from syncrt.deadlines import (
    compute_deadline_words,
    constraint_word,
    diffops_word,
    dword_add,
    dword_index,
    dword_min,
    dword_shift,
    DWord,
    dynamic_deadline,
    EncodedTask,
    encoding_soundness_violations,
    instance_graph_oracle,
    oracle_mismatches,
)
from syncrt.exceptions import DeadlineError
from syncrt.precedence import g_ops, PrecOp
from syncrt.taskgraph import Edge, Task, TaskGraph, TaskKind


def _words(name: str):
    ts = compile_sample(name).taskset
    return {t.name: t.word.pattern for t in ts.tasks}


# =============================================================================
# Words
# =============================================================================

def test_words_are_primitive() -> None:
    assert DWord((2, 4, 2, 4)) == DWord((2, 4))
    assert DWord((7, 7, 7)).pattern == (7, )
    assert len(DWord((5, 10, 10, 10))) == 4
    assert str(DWord((5, 10, 10, 10))) == "(5.10.10.10)^w"
    assert DWord((2, 4))[5] == 4
    assert DWord((2, 4)).unfold(5) == [2, 4, 2, 4, 2]


def test_word_indexing_wraps() -> None:
    w = DWord((5, 10, 10, 10))
    assert [dword_index(w, n) for n in range(9)] == \
        [5, 10, 10, 10, 5, 10, 10, 10, 5]
    assert dword_index(DWord.constant(7), 10 ** 9) == 7
    task = EncodedTask("AA", TaskKind.computation, T=10, C=1, r=3, word=w)
    assert [dynamic_deadline(task, n) for n in range(6)] == \
        [8, 23, 33, 43, 48, 63]
    assert task.deadline(4) == task.release(4) + 5


def test_word_arithmetic() -> None:
    assert dword_min(DWord((3, )), DWord((5, 1))) == DWord((3, 1))
    assert dword_min(DWord((1, 9)), DWord((4, 4, 0))).pattern == \
        (1, 4, 0, 4, 1, 0)
    assert dword_add(DWord((1, 2)), DWord((10, ))) == DWord((11, 12))
    assert dword_shift(DWord((1, 2)), -1) == DWord((0, 1))


def test_diffops_word() -> None:
    assert diffops_word((PrecOp.under(2), ), 4, 8) == DWord((0, 4))
    assert diffops_word((PrecOp.over(3), ), 30, 10) == DWord((0, ))
    assert diffops_word((), 10, 10) == DWord((0, ))


# =============================================================================
# Sample programs
# =============================================================================

def test_fcs_words() -> None:
    words = _words("fcs.mps")
    assert words["PA"] == (10, )
    assert words["AA"] == (5, 10, 10, 10)
    assert words["FL"] == (9, 10, 10, 10)
    assert words["PF"] == (9, )
    assert words["PL"] == (15, )
    assert words["NL"] == (120, )
    assert words["NF"] == (100, )
    assert words["pos_r"] == (100, )
    assert words["pos"] == (9, )
    assert words["angle"] == (6, 7, 7, 7)
    assert words["acc"] == (4, 9, 9, 9)
    assert words["order"] == (15, )


def test_dw_usefull_words() -> None:
    words = _words("dw_usefull.mps")
    assert words["A"] == (2, 4)
    assert words["B"] == (6, )
    assert words["i"] == (0, 2)


def test_msu_chain() -> None:
    compiled = compile_sample("msu_chain.mps")
    g, ts = compiled.graph, compiled.taskset
    edges = {(e.src, e.dst): e for e in g.edges}
    assert constraint_word(edges[("app", "toEnv")], ts.task("toEnv").word,
                           g.task("app"), g.task("toEnv")) == DWord((95, ))
    assert constraint_word(edges[("bop", "app")], ts.task("app").word,
                           g.task("bop"), g.task("app")) == DWord((75, ))
    words = {t.name: t.word.pattern for t in ts.tasks}
    assert words == {"fromEnv": (65, ), "bop": (75, ), "app": (95, ),
                     "toEnv": (100, ), "out": (100, )}


def test_dw_usefull_oracle() -> None:
    ts = compile_sample("dw_usefull.mps").taskset
    assert ts.hyperperiod == 8
    assert instance_graph_oracle(ts, 16)["A"] == [2, 8, 10, 16]
    assert [ts.task("A").deadline(n) for n in range(4)] == [2, 8, 10, 16]


@pytest.mark.parametrize("name", ["fcs.mps", "dw_usefull.mps",
                                  "msu_chain.mps"])
def test_words_match_oracle(name: str) -> None:
    ts = compile_sample(name).taskset
    assert oracle_mismatches(ts) == []
    assert encoding_soundness_violations(ts) == []


def test_infeasible_deadline() -> None:
    with pytest.raises(DeadlineError) as excinfo:
        compile_source("""
            imported node F(a) returns (o) wcet 8;
            node M (i: rate (10, 0)) returns (o: due 5) let o = F(i); tel
        """)
    # The sensor feeding F is left a negative deadline first.
    assert excinfo.value.task in ("i", "F")
    assert excinfo.value.instance == 0
    assert "infeasible deadline" in str(excinfo.value)


def test_zero_deadline_for_zero_wcet() -> None:
    # The sensor feeding A must complete at its release.
    ts = compile_sample("dw_usefull.mps").taskset
    assert ts.task("i").word.minimum() == 0
    assert ts.task("i").C == 0


# =============================================================================
# Scaling
# =============================================================================

def _fan_in_graph(k: int, branches: int = 8) -> TaskGraph:
    """
    ``branches`` tasks of period 1 each undersampled by ``k`` into one
    consumer: every producer word has length ``k`` before reduction.
    """
    tasks = []
    edges = []
    sink = Task("sink", TaskKind.computation, inputs=["x"] * branches,
                outputs=["o"])
    sink.T, sink.C = k, 1
    for b in range(branches):
        name = "p{}".format(b)
        t = Task(name, TaskKind.computation, outputs=["o"])
        t.T, t.C = 1, 0
        tasks.append(t)
        edges.append(Edge(name, 0, "sink", b, ops=(PrecOp.under(k), )))
    tasks.append(sink)
    g = TaskGraph("fan_in", tasks, edges)
    g.reorder([t.name for t in tasks])
    return g


def _g_ops_calls(monkeypatch, k: int) -> int:
    calls = []

    def counting(ops, n: int) -> int:
        calls.append(n)
        return g_ops(ops, n)

    monkeypatch.setattr(deadlines, "g_ops", counting)
    compute_deadline_words(_fan_in_graph(k))
    return len(calls)


def test_constraint_word_length_is_the_rate_ratio() -> None:
    k = 6
    g = _fan_in_graph(k)
    cstr = constraint_word(g.edges[0], DWord.constant(k), g.task("p0"),
                           g.task("sink"))
    assert cstr.pattern == (5, 10, 9, 8, 7, 6)
    ts = compute_deadline_words(g)
    assert ts.task("p0").word == DWord.constant(1)
    assert ts.task("sink").word == DWord.constant(k)


def test_deadline_work_is_linear_in_word_length(monkeypatch) -> None:
    # Three evaluations per instance and edge: the successor part, then the
    # rate-ratio word and its periodicity check.
    assert _g_ops_calls(monkeypatch, 1500) == 3 * 1500 * 8
    assert _g_ops_calls(monkeypatch, 3000) == 3 * 3000 * 8
