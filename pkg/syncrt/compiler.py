#!/usr/bin/env python

"""
syncrt/compiler.py

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

**The compilation pipeline: source text to encoded task set.**

.. code-block:: none

    parse -> type_check -> causality_check -> inline -> clock_calculus
          -> extract_reduce -> extract_attributes
          -> compute_deadline_words -> plan_buffers

"""

import logging
from typing import Dict, List, Set

from attrdict import AttrDict

from syncrt.analysis import (
    causality_check,
    clock_calculus,
    ClockedNode,
    NodeSignature,
    type_check,
)
from syncrt.comms import BufferPlan, plan_buffers
from syncrt.config import default_config
from syncrt.deadlines import compute_deadline_words, EncodedTaskSet
from syncrt.exceptions import SyncrtError
from syncrt.flatten import inline
from syncrt.frontend import (
    parse,
    read_sample_program,
    read_source_file,
    sample_program_path,
)
from syncrt.interp import Evaluation, evaluate
from syncrt.syntax import NodeDecl, Program
from syncrt.taskgraph import extract_attributes, extract_reduce, TaskGraph

log = logging.getLogger(__name__)


class CompiledProgram(object):
    """
    Everything the pipeline produced for one program.
    """
    def __init__(self,
                 program: Program,
                 signatures: Dict[str, NodeSignature],
                 summaries: Dict[str, List[Set[int]]],
                 flat: NodeDecl,
                 clocked: ClockedNode,
                 graph: TaskGraph,
                 taskset: EncodedTaskSet,
                 filename: str = None) -> None:
        self.program = program
        self.signatures = signatures
        self.summaries = summaries
        self.flat = flat
        self.clocked = clocked
        self.graph = graph
        self.taskset = taskset
        self.filename = filename

    @property
    def name(self) -> str:
        return self.program.main

    @property
    def plans(self) -> List[BufferPlan]:
        return self.taskset.buffers

    def type_signature(self) -> str:
        return str(self.signatures[self.program.main])

    def clock_signature(self) -> str:
        return self.clocked.signature()

    def dword_lines(self) -> List[str]:
        return ["{}: {}".format(t.name, t.word) for t in self.taskset.tasks]

    def evaluate(self, horizon: int = None) -> Evaluation:
        """
        Runs the reference interpreter, on the task-set time scale.
        """
        if horizon is None:
            horizon = self.taskset.default_horizon()
        return evaluate(self.clocked, horizon, tick=self.graph.tick)


def compile_program(program: Program, config: AttrDict = None,
                    filename: str = None) -> CompiledProgram:
    """
    Runs the analyses and the task-set generation on a parsed program.

    Raises:
        :exc:`syncrt.exceptions.CompileError` (or a subclass) if the program
        is rejected
    """
    config = config or default_config()
    try:
        signatures = type_check(program)
        summaries = causality_check(program)
        flat = inline(program)
        clocked = clock_calculus(program, flat)
        graph = extract_reduce(flat, program)
        extract_attributes(graph, clocked,
                           sensor_wcet=config.sensor_wcet,
                           actuator_wcet=config.actuator_wcet,
                           wcet_overrides=dict(config.wcet_overrides or {}),
                           tick_limit=config.tick_limit)
        taskset = compute_deadline_words(graph)
        taskset.buffers = plan_buffers(taskset)
    except SyncrtError as e:
        if e.filename is None:
            e.filename = filename
        raise
    log.debug("Compiled {}: {} tasks, {} buffers, H = {}".format(
        program.main, len(taskset.tasks), len(taskset.buffers),
        taskset.hyperperiod))
    return CompiledProgram(program, signatures, summaries, flat, clocked,
                           graph, taskset, filename)


def compile_source(source: str, main: str = None, config: AttrDict = None,
                   filename: str = None) -> CompiledProgram:
    """
    Parses and compiles program text.
    """
    program = parse(source, main=main, filename=filename)
    return compile_program(program, config=config, filename=filename)


def compile_file(filename: str, main: str = None,
                 config: AttrDict = None) -> CompiledProgram:
    source = read_source_file(filename)
    return compile_source(source, main=main, config=config, filename=filename)


def compile_sample(name: str, main: str = None,
                   config: AttrDict = None) -> CompiledProgram:
    """
    Compiles one of the programs shipped in ``syncrt/programs``.
    """
    return compile_source(read_sample_program(name), main=main, config=config,
                          filename=sample_program_path(name))
