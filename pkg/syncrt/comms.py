#!/usr/bin/env python

"""
syncrt/comms.py

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

**Communication buffers between tasks.**

One buffer per extended precedence; no semaphores. The producer writes only
the instances whose value is consumed (``g(n) != g(n+1)``). Precedences that
contain a ``fby`` or a ``~>`` get two cells: the producer alternates between
them, and the consumer picks the cell written by the instance it consumes
(or cell 1, holding the ``fby`` initial value, before any write).

"""

from dataclasses import dataclass, replace
import logging
from typing import List, Optional, Tuple

from syncrt.exceptions import CommsError
from syncrt.precedence import (
    consumed_instance,
    delay_count,
    format_ops,
    has_delay,
    has_offset,
    OpsList,
    PrecOpKind,
    write_mask,
)
from syncrt.taskgraph import Edge, InitValue, TaskKind

log = logging.getLogger(__name__)

READ_SAME = "same"
READ_CONSUMED_MOD2 = "consumed_instance_mod2"
READ_RULES = [READ_SAME, READ_CONSUMED_MOD2]

INIT_CELL = 1


@dataclass(frozen=True)
class BufferPlan(object):
    """
    How one precedence communicates.

    ``write_mask`` covers one period of producer instances; ``mask[n]`` says
    whether producer instance ``n`` writes.
    """
    name: str
    producer: str
    producer_port: int
    consumer: str
    consumer_port: int
    ops: OpsList
    size: int
    init: Optional[InitValue]
    write_mask: Tuple[bool, ...]

    @property
    def read_rule(self) -> str:
        return READ_SAME if self.size == 1 else READ_CONSUMED_MOD2

    def should_write(self, n: int) -> bool:
        return self.write_mask[n % len(self.write_mask)]

    def write_ordinal(self, n: int) -> int:
        """
        Number of writes performed by producer instances before ``n``.
        """
        period = len(self.write_mask)
        ones = sum(self.write_mask)
        return (n // period) * ones + sum(self.write_mask[:n % period])

    def producer_cell(self, n: int) -> int:
        if self.size == 1:
            return 0
        return self.write_ordinal(n) % 2

    def consumed(self, m: int) -> int:
        """
        The producer instance read by consumer instance ``m``; -1 for the
        initial value.
        """
        return consumed_instance(self.ops, m)

    def consumer_cell(self, m: int) -> int:
        if self.size == 1:
            return 0
        p = self.consumed(m)
        if p < 0:
            return INIT_CELL
        return self.write_ordinal(p) % 2

    def with_flipped_bit(self, i: int) -> "BufferPlan":
        """
        A copy with write-mask bit ``i`` inverted, for fault injection.
        """
        mask = list(self.write_mask)
        mask[i] = not mask[i]
        return replace(self, write_mask=tuple(mask))


def buffer_name(edge: Edge, src_kind: TaskKind, src_outputs: List[str],
                dst_kind: TaskKind, dst_inputs: List[str]) -> str:
    """
    ``producer_output_consumer_input``, e.g. ``FL_o_PL_i1``; sensors and
    actuators contribute their name only.
    """
    parts = [edge.src]
    if src_kind != TaskKind.sensor:
        parts.append(src_outputs[edge.src_port])
    parts.append(edge.dst)
    if dst_kind != TaskKind.actuator:
        parts.append(dst_inputs[edge.dst_port])
    return "_".join(parts)


def plan_buffer(edge: Edge, name: str) -> BufferPlan:
    """
    Plans the buffer of one precedence.

    Raises:
        :exc:`syncrt.exceptions.CommsError` for chained delays
    """
    if delay_count(edge.ops) > 1:
        raise CommsError(
            "chained fby on {} needs a buffer deeper than two cells, which is "
            "not supported".format(edge), edge.span)
    size = 2 if (has_delay(edge.ops) or has_offset(edge.ops)) else 1
    for op in edge.ops:
        if op.kind == PrecOpKind.offset and op.amount >= 1:
            log.warning("Offset {} on {} is a full period or more; the "
                        "two-cell buffer may be overwritten before it is "
                        "read".format(op, edge))
    plan = BufferPlan(
        name=name,
        producer=edge.src,
        producer_port=edge.src_port,
        consumer=edge.dst,
        consumer_port=edge.dst_port,
        ops=edge.ops,
        size=size,
        init=edge.init if has_delay(edge.ops) else None,
        write_mask=write_mask(edge.ops),
    )
    log.debug("Buffer {}: ops {}, size {}, mask {}".format(
        plan.name, format_ops(plan.ops) or "=", plan.size,
        [int(b) for b in plan.write_mask]))
    return plan


def plan_buffers(ts) -> List[BufferPlan]:
    """
    One buffer per precedence of a task graph or encoded task set, in edge
    order. Consumers of the same output get separate buffers.
    """
    plans = []  # type: List[BufferPlan]
    for e in ts.edges:
        src, dst = ts.task(e.src), ts.task(e.dst)
        name = buffer_name(e, src.kind, src.outputs, dst.kind, dst.inputs)
        plans.append(plan_buffer(e, name))
    names = [p.name for p in plans]
    assert len(set(names)) == len(names), "Duplicate buffer names"
    return plans
