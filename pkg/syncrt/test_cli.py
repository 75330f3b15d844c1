#!/usr/bin/env python

"""
syncrt/test_cli.py

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

**Tests for the command-line interface.**

"""

import json
import os

from syncrt.constants import (
    EXIT_COMPILE_REJECTED,
    EXIT_IO_ERROR,
    EXIT_SIMULATION_FAILED,
    EXIT_SUCCESS,
)
from syncrt.frontend import sample_program_path
from syncrt.main import default_output, main

FCS = sample_program_path("fcs.mps")
DW = sample_program_path("dw_usefull.mps")


def test_default_output() -> None:
    assert default_output("a/fcs.mps") == "a/fcs.taskset.json"
    assert default_output("prog.txt") == "prog.txt.taskset.json"


# =============================================================================
# compile
# =============================================================================

def test_compile(tmp_path, capsys) -> None:
    output = str(tmp_path / "fcs.json")
    code = main(["compile", FCS, "-o", output, "--dump-dwords",
                 "--dump-types"])
    assert code == EXIT_SUCCESS
    out = capsys.readouterr().out
    assert "AA: (5.10.10.10)^w" in out
    assert "FCS: (int*int*int*int)->int" in out
    assert "FCS: 12 tasks, 11 buffers, hyperperiod 120 -> {}".format(
        output) in out
    with open(output) as f:
        assert json.load(f)["name"] == "FCS"


def test_compile_dump_graph(tmp_path, capsys) -> None:
    output = str(tmp_path / "dw.json")
    assert main(["compile", DW, "-o", output, "--dump-graph"]) == \
        EXIT_SUCCESS
    out = capsys.readouterr().out
    assert out.startswith("digraph")


def test_rejected_program(tmp_path, capsys) -> None:
    source = tmp_path / "bad.mps"
    source.write_text("node M (i) returns (o)\nlet\n  o = i +;\ntel\n")
    code = main(["compile", str(source)])
    assert code == EXIT_COMPILE_REJECTED
    err = capsys.readouterr().err
    assert err.startswith("rejected: {}:3:".format(source))
    assert not os.path.exists(default_output(str(source)))


def test_rejected_clocks(tmp_path) -> None:
    output = str(tmp_path / "x.json")
    assert main(["compile", sample_program_path("bad_clocks.mps"),
                 "-o", output]) == EXIT_COMPILE_REJECTED


def test_compile_all(tmp_path, capsys) -> None:
    with open(DW) as f:
        (tmp_path / "good.mps").write_text(f.read())
    (tmp_path / "worse.mps").write_text(
        "node M (i) returns (o) let o = ; tel\n")
    code = main(["compile", "--all", str(tmp_path)])
    assert code == EXIT_COMPILE_REJECTED
    captured = capsys.readouterr()
    assert "good.mps: 4 tasks" in captured.out
    assert "rejected:" in captured.err
    assert (tmp_path / "good.taskset.json").exists()


def test_missing_file(tmp_path, capsys) -> None:
    code = main(["compile", str(tmp_path / "nowhere.mps")])
    assert code == EXIT_IO_ERROR
    assert capsys.readouterr().err.startswith("error:")


def test_undecodable_source(tmp_path, capsys) -> None:
    source = tmp_path / "binary.mps"
    source.write_bytes(b"\xff\xfe bad")
    assert main(["compile", str(source)]) == EXIT_IO_ERROR
    err = capsys.readouterr().err
    assert err.startswith("error: {}: not UTF-8".format(source))
    assert "offset 0" in err


def test_bad_config(tmp_path) -> None:
    config = tmp_path / "syncrt.yaml"
    config.write_text("policy: fifo\n")
    assert main(["compile", DW, "--config", str(config),
                 "-o", str(tmp_path / "dw.json")]) == EXIT_IO_ERROR


# =============================================================================
# simulate
# =============================================================================

def test_simulate(tmp_path, capsys) -> None:
    gantt = tmp_path / "dw.gantt"
    trace = tmp_path / "dw.jsonl"
    code = main(["simulate", DW, "--gantt", str(gantt),
                 "--trace", str(trace)])
    assert code == EXIT_SUCCESS
    assert "0 misses, 0 mismatches over [0,16)" in capsys.readouterr().out
    assert "A |##  ..####  ..##|" in gantt.read_text()
    first = json.loads(trace.read_text().splitlines()[0])
    assert first["ev"] == "Release"


def test_simulate_uniform_deadlines_misses(capsys) -> None:
    code = main(["simulate", DW, "--policy", "edf-uniform",
                 "--horizon", "16"])
    assert code == EXIT_SIMULATION_FAILED
    assert "miss: B[0] missed its deadline 6" in capsys.readouterr().err


def test_simulate_taskset(tmp_path, capsys) -> None:
    output = str(tmp_path / "fcs.json")
    assert main(["compile", FCS, "-o", output]) == EXIT_SUCCESS
    capsys.readouterr()
    assert main(["simulate", output]) == EXIT_SUCCESS
    assert "0 misses, 0 mismatches over [0,240)" in \
        capsys.readouterr().out


def test_jitter_is_rejected() -> None:
    assert main(["simulate", DW, "--jitter", "0.1"]) == EXIT_IO_ERROR


# =============================================================================
# check
# =============================================================================

def test_check(capsys) -> None:
    assert main(["check", FCS]) == EXIT_SUCCESS
    out = capsys.readouterr().out
    assert "encoding soundness: ok" in out
    assert "functional equivalence: ok" in out


def test_check_needs_something() -> None:
    assert main(["check"]) == EXIT_IO_ERROR


# =============================================================================
# Flows
# =============================================================================

def test_trace_flows(capsys) -> None:
    assert main(["simulate", DW, "--trace-flows", "o"]) == EXIT_SUCCESS
    lines = capsys.readouterr().out.splitlines()
    flows = [line for line in lines if line.startswith(("o:", "i:"))]
    assert len(flows) == 1
    assert flows[0].startswith("o: (0, B<0>")
