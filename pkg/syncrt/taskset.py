#!/usr/bin/env python

"""
syncrt/taskset.py

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

**Task-set files: JSON serialization of an encoded task set and its
buffers.**

Keys are sorted and deadline words canonical, so reloading a file and saving
it again reproduces it byte for byte.

"""

import json
import logging
from typing import Any, Dict

from syncrt.comms import BufferPlan
from syncrt.constants import TASKSET_FORMAT_VERSION
from syncrt.deadlines import DWord, EncodedTask, EncodedTaskSet
from syncrt.exceptions import TaskSetFormatError
from syncrt.frontend import read_source_file
from syncrt.maths import format_rational, parse_rational
from syncrt.precedence import parse_op
from syncrt.taskgraph import Edge, TaskKind

log = logging.getLogger(__name__)


# =============================================================================
# To JSON
# =============================================================================

def _task_to_json(t: EncodedTask) -> Dict[str, Any]:
    return {
        "name": t.name,
        "kind": t.kind.name,
        "T": t.T,
        "C": t.C,
        "r": t.r,
        "dword": list(t.word.pattern),
        "due": t.due,
        "node": t.node,
        "value": t.value,
        "inputs": list(t.inputs),
        "outputs": list(t.outputs),
    }


def _edge_to_json(e: Edge) -> Dict[str, Any]:
    return {
        "src": e.src,
        "src_port": e.src_port,
        "dst": e.dst,
        "dst_port": e.dst_port,
        "ops": [str(op) for op in e.ops],
        "inits": list(e.inits),
    }


def _buffer_to_json(b: BufferPlan) -> Dict[str, Any]:
    return {
        "name": b.name,
        "producer": b.producer,
        "producer_port": b.producer_port,
        "consumer": b.consumer,
        "consumer_port": b.consumer_port,
        "ops": [str(op) for op in b.ops],
        "size": b.size,
        "init": b.init,
        "write_mask": [int(bit) for bit in b.write_mask],
        "read_rule": b.read_rule,
    }


def taskset_to_json(ts: EncodedTaskSet) -> Dict[str, Any]:
    return {
        "version": TASKSET_FORMAT_VERSION,
        "name": ts.name,
        "tick": format_rational(ts.tick),
        "tasks": [_task_to_json(t) for t in ts.tasks],
        "edges": [_edge_to_json(e) for e in ts.edges],
        "buffers": [_buffer_to_json(b) for b in ts.buffers],
    }


def dumps_taskset(ts: EncodedTaskSet) -> str:
    return json.dumps(taskset_to_json(ts), sort_keys=True, indent=2) + "\n"


def save_taskset(ts: EncodedTaskSet, filename: str) -> None:
    log.info("Writing task set to {}".format(filename))
    with open(filename, "w") as f:
        f.write(dumps_taskset(ts))


# =============================================================================
# From JSON
# =============================================================================

def _field(d: Dict[str, Any], key: str, where: str) -> Any:
    try:
        return d[key]
    except (KeyError, TypeError):
        raise TaskSetFormatError("missing '{}' in {}".format(key, where))


def _task_from_json(d: Dict[str, Any], order: int) -> EncodedTask:
    where = "task {}".format(order)
    try:
        kind = TaskKind[_field(d, "kind", where)]
    except KeyError:
        raise TaskSetFormatError("bad task kind in {}".format(where))
    return EncodedTask(
        name=_field(d, "name", where),
        kind=kind,
        T=_field(d, "T", where),
        C=_field(d, "C", where),
        r=_field(d, "r", where),
        word=DWord(tuple(_field(d, "dword", where))),
        due=d.get("due"),
        inputs=d.get("inputs", []),
        outputs=d.get("outputs", []),
        node=d.get("node"),
        value=d.get("value"),
        order=order,
    )


def _edge_from_json(d: Dict[str, Any], i: int) -> Edge:
    where = "edge {}".format(i)
    return Edge(
        src=_field(d, "src", where),
        src_port=_field(d, "src_port", where),
        dst=_field(d, "dst", where),
        dst_port=_field(d, "dst_port", where),
        ops=tuple(parse_op(op) for op in _field(d, "ops", where)),
        inits=tuple(d.get("inits", [])),
    )


def _buffer_from_json(d: Dict[str, Any], i: int) -> BufferPlan:
    where = "buffer {}".format(i)
    return BufferPlan(
        name=_field(d, "name", where),
        producer=_field(d, "producer", where),
        producer_port=_field(d, "producer_port", where),
        consumer=_field(d, "consumer", where),
        consumer_port=_field(d, "consumer_port", where),
        ops=tuple(parse_op(op) for op in _field(d, "ops", where)),
        size=_field(d, "size", where),
        init=d.get("init"),
        write_mask=tuple(bool(bit) for bit in _field(d, "write_mask", where)),
    )


def taskset_from_json(data: Dict[str, Any]) -> EncodedTaskSet:
    """
    Raises:
        :exc:`syncrt.exceptions.TaskSetFormatError`
    """
    if not isinstance(data, dict):
        raise TaskSetFormatError("task set must be a JSON object")
    version = data.get("version")
    if version != TASKSET_FORMAT_VERSION:
        raise TaskSetFormatError(
            "unsupported task-set version {!r} (expected {})".format(
                version, TASKSET_FORMAT_VERSION))
    try:
        tasks = [_task_from_json(d, i)
                 for i, d in enumerate(_field(data, "tasks", "task set"))]
        edges = [_edge_from_json(d, i)
                 for i, d in enumerate(_field(data, "edges", "task set"))]
        buffers = [_buffer_from_json(d, i)
                   for i, d in enumerate(data.get("buffers", []))]
        tick = parse_rational(_field(data, "tick", "task set"))
    except (ValueError, AssertionError) as e:
        raise TaskSetFormatError("bad task set: {}".format(e))
    names = {t.name for t in tasks}
    for e in edges:
        if e.src not in names or e.dst not in names:
            raise TaskSetFormatError("edge {} refers to an unknown task".format(
                e))
    return EncodedTaskSet(data.get("name", "main"), tick, tasks, edges,
                          buffers)


def loads_taskset(text: str, filename: str = None) -> EncodedTaskSet:
    try:
        data = json.loads(text)
    except ValueError as e:
        raise TaskSetFormatError("not JSON: {}".format(e), filename=filename)
    try:
        return taskset_from_json(data)
    except TaskSetFormatError as e:
        e.filename = filename
        raise


def load_taskset(filename: str) -> EncodedTaskSet:
    return loads_taskset(read_source_file(filename), filename=filename)
