#!/usr/bin/env python

"""
syncrt/test_random_properties.py

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

**Tests for the random program generator and the property suites.**

"""

import random

import pytest

from syncrt.compiler import compile_sample, compile_source
from syncrt.constants import MAX_RANDOM_IMPORTED_NODES
from syncrt.precedence import parse_op, PrecOpKind
from syncrt.properties import (
    check_program,
    check_random_programs,
    check_taskset,
    consistent_periods,
    diffops_periodicity,
    diffops_violations,
    fault_candidates,
    word_length_bound,
)
from syncrt.randomprog import (
    random_ops,
    random_program,
    random_programs,
    rate_change,
)
from syncrt.taskset import dumps_taskset, loads_taskset


# =============================================================================
# Generator
# =============================================================================

def test_rate_change() -> None:
    assert rate_change(20, 20) == ""
    assert rate_change(20, 60) == "/^3"
    assert rate_change(60, 20) == "*^3"
    assert rate_change(40, 60) == "*^2/^3"


def test_random_ops_are_delay_free() -> None:
    rng = random.Random(3)
    for _ in range(200):
        ops = random_ops(rng, 3)
        assert all(op.kind != PrecOpKind.delay for op in ops)
        rate_changes = [op for op in ops if op.kind != PrecOpKind.offset]
        assert len(rate_changes) <= 3


def test_same_seed_same_program() -> None:
    assert random_program(7).source == random_program(7).source
    programs = random_programs(3, seed=7)
    assert [p.name for p in programs] == ["R7", "R8", "R9"]
    assert programs[0].source == random_program(7).source


@pytest.mark.parametrize("seed", range(10))
def test_random_programs_compile(seed: int) -> None:
    rp = random_program(seed)
    assert 1 <= len(rp.apps) <= MAX_RANDOM_IMPORTED_NODES
    assert rp.outputs
    compiled = compile_source(rp.source)
    assert compiled.name == rp.name
    assert compiled.taskset.task("i").T == rp.sensor_period


# =============================================================================
# Suites
# =============================================================================

def test_diffops_periodicity() -> None:
    assert diffops_periodicity(seed=0, trials=300) == []


@pytest.mark.parametrize("ops, periods", [
    ("*^3.*^3", (9, 1)),
    ("*^2./^3.*^2", (4, 3)),
    ("~>1/2.*^4.*^4", (16, 1)),
    ("/^2./^3", (1, 6)),
    ("", (1, 1)),
])
def test_repeated_oversampling(ops: str, periods) -> None:
    parsed = tuple(parse_op(op) for op in ops.split(".") if op)
    assert consistent_periods(parsed) == periods
    assert diffops_violations(parsed) == []


@pytest.mark.parametrize("name", ["fcs.mps", "dw_usefull.mps"])
def test_samples_pass_every_suite(name: str) -> None:
    results = check_program(compile_sample(name))
    assert [r.name for r in results.values()][:4] == [
        "encoding soundness", "oracle equivalence", "word-length bound",
        "release compatibility"]
    failed = [str(r) for r in results.values() if not r.ok]
    assert failed == []
    assert results["functional equivalence"].skipped is None
    assert results["fault injection"].skipped is None


def test_loaded_taskset_skips_functional_suites() -> None:
    ts = loads_taskset(dumps_taskset(compile_sample("fcs.mps").taskset))
    results = check_taskset(ts)
    assert all(r.ok for r in results.values())
    assert results["functional equivalence"].skipped == "no source program"
    assert str(results["word-length bound"]) == "word-length bound: ok"


def test_word_length_bound() -> None:
    assert word_length_bound(compile_sample("fcs.mps").taskset) == []


def test_fault_candidates() -> None:
    ts = compile_sample("dw_usefull.mps").taskset
    candidates = fault_candidates(ts)
    assert sorted((plan.name, bit) for plan, bit in candidates) == [
        ("A_o_B_i", 0), ("B_o_o", 0), ("i_A_i", 0)]
    for plan, bit in fault_candidates(compile_sample("fcs.mps").taskset):
        assert plan.write_mask[bit]


def test_random_programs_pass_every_suite() -> None:
    results = check_random_programs(4, seed=0)
    assert "random compilation" in results
    assert "diffops periodicity" in results
    failed = [str(r) for r in results.values() if not r.ok]
    assert failed == []


def test_two_hundred_random_programs() -> None:
    results = check_random_programs(200, seed=0)
    compiled = results["random compilation"]
    assert compiled.ok, compiled.violations[:3]
    failed = [str(r) for r in results.values() if not r.ok]
    assert failed == []
