#!/usr/bin/env python

"""
syncrt/sim.py

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

**Discrete-time preemptive EDF simulation of an encoded task set.**

Time advances in ticks. At each tick:

1. instances due for release are released, with their absolute deadline;
2. the eligible instance with the earliest deadline is dispatched (the
   oldest unfinished instance of each task is eligible; ties go to the
   earlier task in declaration order, then the lower instance number);
   instances with no execution time start and complete on the spot;
3. unfinished instances whose deadline has passed are reported as misses;
4. the dispatched instance executes for one tick.

An instance reads its input buffers when it starts and writes its output
buffers when it completes. Values are symbolic (see :mod:`syncrt.interp`),
so the reads can be checked against the reference interpreter.

"""

from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
import json
import logging
from typing import Dict, List, Optional, Tuple

from syncrt.comms import BufferPlan
from syncrt.constants import (
    GANTT_ABSENT,
    GANTT_MISS,
    GANTT_READY,
    GANTT_RUNNING,
    POLICIES,
    POLICY_EDF_DWORD,
    POLICY_EDF_UNIFORM,
)
from syncrt.deadlines import EncodedTask, EncodedTaskSet
from syncrt.exceptions import SimulationError
from syncrt.interp import Evaluation, Lit, Node, SymValue
from syncrt.precedence import g_ops, has_delay
from syncrt.taskgraph import TaskKind

log = logging.getLogger(__name__)


# =============================================================================
# Configuration, events, traces
# =============================================================================

@dataclass
class SimConfig(object):
    """
    ``horizon``: number of ticks simulated. ``policy``: ``edf-dword`` uses
    each instance's own deadline; ``edf-uniform`` gives every instance of a
    task the smallest deadline of its word.
    """
    horizon: int
    policy: str = POLICY_EDF_DWORD

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise SimulationError("horizon must be at least 1 tick")
        if self.policy not in POLICIES:
            raise SimulationError("unknown policy {!r}".format(self.policy))


@unique
class EventKind(Enum):
    release = "Release"
    start = "Start"
    preempt = "Preempt"
    resume = "Resume"
    complete = "Complete"
    buffer_write = "BufferWrite"
    buffer_read = "BufferRead"
    deadline_miss = "DeadlineMiss"
    truncated = "Truncated"


@dataclass
class SimEvent(object):
    t: int
    kind: EventKind
    task: str
    n: int
    deadline: Optional[int] = None
    buffer: Optional[str] = None
    cell: Optional[int] = None
    port: Optional[int] = None
    value: Optional[SymValue] = None

    def as_dict(self) -> Dict:
        d = {"t": self.t, "ev": self.kind.value, "task": self.task,
             "n": self.n}
        if self.deadline is not None:
            d["D"] = self.deadline
        if self.buffer is not None:
            d["buffer"] = self.buffer
            d["cell"] = self.cell
            d["port"] = self.port
            d["value"] = None if self.value is None else str(self.value)
        return d


@dataclass
class Slot(object):
    """
    One tick: the instance executing, and the other eligible instances, as
    ``(task, n, deadline)``.
    """
    t: int
    running: Optional[Tuple[str, int, int]]
    ready: List[Tuple[str, int, int]]


@dataclass
class SimTrace(object):
    horizon: int
    policy: str
    task_names: List[str]
    events: List[SimEvent] = field(default_factory=list)
    slots: List[Slot] = field(default_factory=list)

    def of_kind(self, kind: EventKind) -> List[SimEvent]:
        return [e for e in self.events if e.kind == kind]

    @property
    def misses(self) -> List[SimEvent]:
        return self.of_kind(EventKind.deadline_miss)

    def intervals(self, task: str) -> List[Tuple[int, int, int]]:
        """
        Maximal execution intervals ``(n, start, end)`` of a task.
        """
        result = []  # type: List[Tuple[int, int, int]]
        for slot in self.slots:
            if slot.running is None or slot.running[0] != task:
                continue
            n = slot.running[1]
            if result and result[-1][0] == n and result[-1][2] == slot.t:
                result[-1] = (n, result[-1][1], slot.t + 1)
            else:
                result.append((n, slot.t, slot.t + 1))
        return result

    def execution(self, task: str, n: int) -> List[Tuple[int, int]]:
        return [(s, e) for m, s, e in self.intervals(task) if m == n]


# =============================================================================
# Simulator
# =============================================================================

class _Job(object):
    def __init__(self, task: EncodedTask, n: int, deadline: int) -> None:
        self.task = task
        self.n = n
        self.release = task.release(n)
        self.deadline = deadline
        self.remaining = task.C
        self.started = False
        self.completed = False
        self.missed = False
        self.reads = {}  # type: Dict[int, Optional[SymValue]]

    @property
    def key(self) -> Tuple[int, int, int]:
        return self.deadline, self.task.order, self.n

    def describe(self) -> Tuple[str, int, int]:
        return self.task.name, self.n, self.deadline


class _Simulator(object):
    def __init__(self, ts: EncodedTaskSet, plans: List[BufferPlan],
                 cfg: SimConfig) -> None:
        self.ts = ts
        self.cfg = cfg
        self.tasks = sorted(ts.tasks, key=lambda t: t.order)
        self.inputs = {t.name: [] for t in self.tasks}  # type: Dict[str, List[BufferPlan]]  # noqa
        self.outputs = {t.name: [] for t in self.tasks}  # type: Dict[str, List[BufferPlan]]  # noqa
        self.cells = {}  # type: Dict[str, List[Optional[SymValue]]]
        for p in plans:
            self.inputs[p.consumer].append(p)
            self.outputs[p.producer].append(p)
            cells = [None] * p.size  # type: List[Optional[SymValue]]
            if p.init is not None:
                cells[-1] = Lit(p.init)
            self.cells[p.name] = cells
        self.next_instance = {t.name: 0 for t in self.tasks}
        self.pending = {t.name: [] for t in self.tasks}  # type: Dict[str, List[_Job]]  # noqa
        self.trace = SimTrace(cfg.horizon, cfg.policy,
                              [t.name for t in self.tasks])
        self.running = None  # type: Optional[_Job]

    def emit(self, t: int, kind: EventKind, job: _Job, **kwargs) -> None:
        self.trace.events.append(SimEvent(t, kind, job.task.name, job.n,
                                          **kwargs))

    def deadline(self, task: EncodedTask, n: int) -> int:
        if self.cfg.policy == POLICY_EDF_UNIFORM:
            return task.release(n) + task.word.minimum()
        return task.release(n) + task.word[n]

    def release(self, t: int) -> None:
        for task in self.tasks:
            n = self.next_instance[task.name]
            if task.release(n) == t:
                job = _Job(task, n, self.deadline(task, n))
                self.pending[task.name].append(job)
                self.next_instance[task.name] = n + 1
                self.emit(t, EventKind.release, job, deadline=job.deadline)

    def eligible(self) -> List[_Job]:
        return [jobs[0] for jobs in self.pending.values() if jobs]

    def pick(self) -> Optional[_Job]:
        jobs = self.eligible()
        if not jobs:
            return None
        return min(jobs, key=lambda j: j.key)

    def start(self, t: int, job: _Job) -> None:
        job.started = True
        self.emit(t, EventKind.start, job)
        for plan in self.inputs[job.task.name]:
            cell = plan.consumer_cell(job.n)
            value = self.cells[plan.name][cell]
            job.reads[plan.consumer_port] = value
            self.emit(t, EventKind.buffer_read, job, buffer=plan.name,
                      cell=cell, port=plan.consumer_port, value=value)

    def output_value(self, job: _Job, port: int) -> SymValue:
        task = job.task
        if task.kind == TaskKind.constant:
            return Lit(task.value)
        if task.kind == TaskKind.sensor:
            return Node(task.name, job.n)
        args = tuple(job.reads.get(k) for k in range(len(task.inputs)))
        return Node(task.name, job.n, args, port)

    def complete(self, t: int, job: _Job) -> None:
        job.completed = True
        self.pending[job.task.name].remove(job)
        self.emit(t, EventKind.complete, job)
        for plan in self.outputs[job.task.name]:
            if not plan.should_write(job.n):
                continue
            cell = plan.producer_cell(job.n)
            value = self.output_value(job, plan.producer_port)
            self.cells[plan.name][cell] = value
            self.emit(t, EventKind.buffer_write, job, buffer=plan.name,
                      cell=cell, port=plan.producer_port, value=value)

    def dispatch(self, t: int) -> Optional[_Job]:
        while True:
            job = self.pick()
            if job is None or job.remaining > 0:
                break
            self.start(t, job)
            self.complete(t, job)
        previous = self.running
        if previous is not None and previous is not job and \
                not previous.completed:
            self.emit(t, EventKind.preempt, previous)
        if job is not None:
            if not job.started:
                self.start(t, job)
            elif job is not previous:
                self.emit(t, EventKind.resume, job)
        return job

    def check_misses(self, t: int) -> None:
        for jobs in self.pending.values():
            for job in jobs:
                if job.deadline <= t and not job.missed:
                    job.missed = True
                    self.emit(t, EventKind.deadline_miss, job,
                              deadline=job.deadline)

    def run(self) -> SimTrace:
        for t in range(self.cfg.horizon):
            self.release(t)
            job = self.dispatch(t)
            self.check_misses(t)
            ready = [j.describe() for j in self.eligible() if j is not job]
            self.trace.slots.append(Slot(
                t, job.describe() if job is not None else None, ready))
            self.running = job
            if job is not None:
                job.remaining -= 1
                if job.remaining == 0:
                    self.complete(t + 1, job)
                    self.running = None
        end = self.cfg.horizon
        for task in self.tasks:
            for job in self.pending[task.name]:
                self.emit(end, EventKind.truncated, job)
        return self.trace


def simulate(ts: EncodedTaskSet, plans: List[BufferPlan],
             cfg: SimConfig) -> SimTrace:
    """
    Simulates a task set on one processor.

    Args:
        ts: the encoded task set
        plans: its buffers (normally ``ts.buffers``; fault-injection tests
            pass altered plans)
        cfg: a :class:`SimConfig`

    Returns:
        a :class:`SimTrace`; deadline misses are recorded, not raised
    """
    trace = _Simulator(ts, plans, cfg).run()
    log.debug("Simulated {} over [0,{}) with {}: {} events, {} misses".format(
        ts.name, cfg.horizon, cfg.policy, len(trace.events),
        len(trace.misses)))
    return trace


# =============================================================================
# Checks against the reference interpreter
# =============================================================================

@dataclass(frozen=True)
class Mismatch(object):
    task: str
    instance: int
    port: int
    expected: Optional[SymValue]
    got: Optional[SymValue]

    def __str__(self) -> str:
        return "{}[{}] input {}: expected {}, read {}".format(
            self.task, self.instance, self.port,
            self.expected.short() if self.expected is not None else "nothing",
            self.got.short() if self.got is not None else "nothing")


def check_semantics(trace: SimTrace, oracle: Evaluation,
                    ts: EncodedTaskSet) -> List[Mismatch]:
    """
    Compares every value read in the simulation with the value the
    reference interpreter gives the same input of the same instance.

    Returns:
        the mismatches; empty when the task set preserves the semantics
    """
    mismatches = []  # type: List[Mismatch]
    for ev in trace.of_kind(EventKind.buffer_read):
        task = ts.task(ev.task)
        expected = None  # type: Optional[SymValue]
        if task.kind == TaskKind.actuator:
            flow = oracle.flows.get(task.name)
            if flow is None or ev.n >= len(flow.values):
                continue
            expected = flow.values[ev.n]
        elif task.kind == TaskKind.computation:
            calls = oracle.calls.get(task.name, [])
            if ev.n >= len(calls):
                continue
            expected = calls[ev.n][ev.port]
        else:
            continue
        got = ev.value
        if got is None or got.ref() != expected.ref():
            mismatches.append(Mismatch(task.name, ev.n, ev.port, expected,
                                       got))
    return mismatches


# =============================================================================
# Trace properties
# =============================================================================

def edf_violations(trace: SimTrace) -> List[str]:
    """
    Ticks where an eligible instance had a strictly earlier deadline than
    the one executing.
    """
    problems = []  # type: List[str]
    for slot in trace.slots:
        if slot.running is None:
            continue
        for name, n, d in slot.ready:
            if d < slot.running[2]:
                problems.append("t={}: {}[{}] (D={}) runs while {}[{}] has "
                                "D={}".format(slot.t, slot.running[0],
                                              slot.running[1],
                                              slot.running[2], name, n, d))
    return problems


def idle_violations(trace: SimTrace) -> List[str]:
    """
    Ticks where the processor idled although some instance was eligible.
    """
    return ["t={}: idle with {} eligible".format(s.t, len(s.ready))
            for s in trace.slots if s.running is None and s.ready]


def release_violations(trace: SimTrace, ts: EncodedTaskSet) -> List[str]:
    problems = []  # type: List[str]
    for ev in trace.of_kind(EventKind.release):
        expected = ts.task(ev.task).release(ev.n)
        if ev.t != expected:
            problems.append("{}[{}] released at {}, expected {}".format(
                ev.task, ev.n, ev.t, expected))
    return problems


def execution_violations(trace: SimTrace, ts: EncodedTaskSet) -> List[str]:
    """
    Completed instances that did not execute exactly their wcet.
    """
    executed = {}  # type: Dict[Tuple[str, int], int]
    for slot in trace.slots:
        if slot.running is not None:
            key = slot.running[:2]
            executed[key] = executed.get(key, 0) + 1
    problems = []  # type: List[str]
    for ev in trace.of_kind(EventKind.complete):
        got = executed.get((ev.task, ev.n), 0)
        if got != ts.task(ev.task).C:
            problems.append("{}[{}] executed {} ticks, wcet {}".format(
                ev.task, ev.n, got, ts.task(ev.task).C))
    return problems


def precedence_violations(trace: SimTrace, ts: EncodedTaskSet) -> List[str]:
    """
    Delay-free precedences ``i[n] -> j[g(n)]`` where ``j[g(n)]`` started
    before ``i[n]`` completed.
    """
    starts = {(e.task, e.n): e.t for e in trace.of_kind(EventKind.start)}
    completions = {(e.task, e.n): e.t
                   for e in trace.of_kind(EventKind.complete)}
    problems = []  # type: List[str]
    for edge in ts.edges:
        if has_delay(edge.ops):
            continue
        n = 0
        while ts.task(edge.src).release(n) < trace.horizon:
            m = g_ops(edge.ops, n)
            started = starts.get((edge.dst, m))
            if started is not None:
                done = completions.get((edge.src, n))
                if done is None or done > started:
                    problems.append(
                        "{}[{}] started at {} before {}[{}] completed".format(
                            edge.dst, m, started, edge.src, n))
            n += 1
    return problems


# =============================================================================
# Schedulability
# =============================================================================

def utilization(ts: EncodedTaskSet) -> Fraction:
    """
    ``sum(C_i / T_i)``.
    """
    return sum((Fraction(t.C, t.T) for t in ts.tasks), Fraction(0))


@dataclass
class Verdict(object):
    schedulable: bool
    misses: int
    horizon: int
    utilization: Fraction

    def __str__(self) -> str:
        return "{} (U = {}, {} misses over [0,{}))".format(
            "schedulable" if self.schedulable else "not schedulable",
            self.utilization, self.misses, self.horizon)


def feasibility_scan(ts: EncodedTaskSet, plans: List[BufferPlan],
                     policy: str = POLICY_EDF_DWORD) -> Verdict:
    """
    Simulates over ``[0, max r + 2H)`` and reports whether any deadline is
    missed.
    """
    horizon = ts.default_horizon()
    trace = simulate(ts, plans, SimConfig(horizon=horizon, policy=policy))
    return Verdict(schedulable=not trace.misses, misses=len(trace.misses),
                   horizon=horizon, utilization=utilization(ts))


# =============================================================================
# Output
# =============================================================================

def render_gantt(trace: SimTrace) -> str:
    """
    One row per task, one column per tick: ``#`` executing, ``.`` eligible
    but waiting, ``!`` deadline missed at that tick, blank otherwise.
    """
    width = max((len(n) for n in trace.task_names), default=0)
    rows = {name: [GANTT_ABSENT] * trace.horizon for name in trace.task_names}
    for slot in trace.slots:
        for name, _, _ in slot.ready:
            rows[name][slot.t] = GANTT_READY
        if slot.running is not None:
            rows[slot.running[0]][slot.t] = GANTT_RUNNING
    for ev in trace.misses:
        if ev.t < trace.horizon:
            rows[ev.task][ev.t] = GANTT_MISS
    lines = []  # type: List[str]
    for name in trace.task_names:
        lines.append("{} |{}|".format(name.ljust(width),
                                      "".join(rows[name])))
    return "\n".join(lines) + "\n"


def trace_to_jsonl(trace: SimTrace) -> str:
    return "".join(json.dumps(e.as_dict()) + "\n" for e in trace.events)
