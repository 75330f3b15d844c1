#!/usr/bin/env python

"""
syncrt/taskgraph.py

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

**Reduced task graph: extraction from the flattened main node, and real-time
attributes.**

Every imported-node application of the flattened main node becomes a task;
each main-node input becomes a sensor and each output an actuator. Variables
disappear: a chain ``A -> x -> /^12 -> y -> B`` becomes one edge ``A -> B``
annotated with the operator list ``[/^12]``.

"""

from enum import Enum, unique
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from cardinal_pythonlib.reprfunc import auto_repr
import networkx as nx

from syncrt.analysis import ClockedNode
from syncrt.clocks import PClock
from syncrt.constants import (
    DEFAULT_ACTUATOR_WCET,
    DEFAULT_SENSOR_WCET,
    DEFAULT_TICK_LIMIT,
    RELEASE_CHECK_WINDOW,
)
from syncrt.exceptions import InternalError, TaskGraphError
from syncrt.flatten import inline  # noqa
from syncrt.maths import common_denominator, lcm_all
from syncrt.precedence import (
    format_ops,
    g_ops,
    has_delay,
    OpsList,
    over_before_delay,
    PrecOp,
    transform_period,
)
from syncrt.syntax import (
    App,
    BinOp,
    Const,
    Expr,
    Fby,
    format_const,
    NodeDecl,
    Offset,
    Over,
    Pair,
    Program,
    Span,
    Under,
    UnOp,
    Var,
)

log = logging.getLogger(__name__)

InitValue = Union[int, bool]


# =============================================================================
# Tasks and edges
# =============================================================================

@unique
class TaskKind(Enum):
    sensor = 1
    actuator = 2
    computation = 3
    constant = 4


class Task(object):
    """
    A task of the reduced graph. ``T``, ``C``, ``r`` and ``due`` are in ticks
    and are filled by :func:`extract_attributes`; ``clock`` and ``wcet`` are
    in source time units.
    """
    def __init__(self,
                 name: str,
                 kind: TaskKind,
                 inputs: Sequence[str] = (),
                 outputs: Sequence[str] = (),
                 node: str = None,
                 wcet: int = 0,
                 value: InitValue = None,
                 anchor: Union[str, int] = None,
                 span: Span = None) -> None:
        """
        Args:
            name: unique task name
            kind: a :class:`TaskKind`
            inputs: input port names
            outputs: output port names
            node: the imported node applied, for computations
            wcet: declared worst-case execution time (source units)
            value: the constant produced, for constant tasks
            anchor: where the clock is found: a variable name, or an
                expression ``eid``
            span: source position, for diagnostics
        """
        self.name = name
        self.kind = kind
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self.node = node
        self.wcet = wcet
        self.value = value
        self.anchor = anchor
        self.span = span
        self.order = 0
        self.clock = None  # type: Optional[PClock]
        self.T = 0
        self.C = 0
        self.r = 0
        self.due = None  # type: Optional[int]

    def __repr__(self) -> str:
        return auto_repr(self)

    def __str__(self) -> str:
        return "{} [{},{},{}]".format(self.name, self.T, self.C, self.r)

    @property
    def relative_deadline(self) -> int:
        """
        The initial relative deadline: ``due`` if declared, else ``T``.
        """
        return self.T if self.due is None else self.due

    def release(self, n: int) -> int:
        return self.r + n * self.T


class Edge(object):
    """
    An extended precedence ``src.src_port -ops-> dst.dst_port``. ``inits``
    holds the initial value of each ``fby`` on the path, in order.
    """
    def __init__(self,
                 src: str,
                 src_port: int,
                 dst: str,
                 dst_port: int,
                 ops: OpsList = (),
                 inits: Sequence[InitValue] = (),
                 span: Span = None) -> None:
        self.src = src
        self.src_port = src_port
        self.dst = dst
        self.dst_port = dst_port
        self.ops = tuple(ops)  # type: OpsList
        self.inits = tuple(inits)
        self.span = span

    def __repr__(self) -> str:
        return auto_repr(self)

    def __str__(self) -> str:
        return "{} -{}-> {}".format(self.src, format_ops(self.ops) or "=",
                                    self.dst)

    @property
    def delayed(self) -> bool:
        return has_delay(self.ops)

    @property
    def init(self) -> Optional[InitValue]:
        return self.inits[0] if self.inits else None


class TaskGraph(object):
    """
    The reduced task graph. ``tasks`` are kept in declaration order (see
    :func:`declaration_order`), which breaks ties everywhere downstream.
    """
    def __init__(self, name: str, tasks: List[Task], edges: List[Edge],
                 tick: Fraction = Fraction(1)) -> None:
        self.name = name
        self.tasks = tasks
        self.edges = edges
        self.tick = tick
        self._by_name = {t.name: t for t in tasks}
        assert len(self._by_name) == len(tasks), "Duplicate task names"

    def __repr__(self) -> str:
        return auto_repr(self)

    def task(self, name: str) -> Task:
        return self._by_name[name]

    def incoming(self, name: str) -> List[Edge]:
        return [e for e in self.edges if e.dst == name]

    def outgoing(self, name: str) -> List[Edge]:
        return [e for e in self.edges if e.src == name]

    def delay_free_edges(self) -> List[Edge]:
        return [e for e in self.edges if not e.delayed]

    def to_networkx(self, delay_free: bool = True) -> nx.DiGraph:
        """
        Task-level graph (parallel edges collapsed), optionally restricted to
        delay-free precedences.
        """
        g = nx.DiGraph()
        for t in self.tasks:
            g.add_node(t.name)
        for e in self.edges:
            if delay_free and e.delayed:
                continue
            g.add_edge(e.src, e.dst)
        return g

    def hyperperiod(self) -> int:
        return lcm_all(t.T for t in self.tasks)

    def reorder(self, names: List[str]) -> None:
        self.tasks = [self._by_name[n] for n in names]
        for i, t in enumerate(self.tasks):
            t.order = i


# =============================================================================
# Extraction and reduction
# =============================================================================

class _Source(object):
    """
    A task output reached from some expression, with the operators and
    ``fby`` initial values met on the way.
    """
    def __init__(self, task: Task, port: int, ops: OpsList = (),
                 inits: Tuple[InitValue, ...] = ()) -> None:
        self.task = task
        self.port = port
        self.ops = ops
        self.inits = inits

    def then(self, op: PrecOp, init: InitValue = None) -> "_Source":
        inits = self.inits if init is None else self.inits + (init, )
        return _Source(self.task, self.port, self.ops + (op, ), inits)


class _Reducer(object):
    def __init__(self, flat: NodeDecl, program: Program) -> None:
        self.flat = flat
        self.nodes = program.node_map()
        self.definitions = flat.definitions()
        self.sensors = {}  # type: Dict[str, Task]
        self.computations = []  # type: List[Task]
        self.constants = []  # type: List[Task]
        self.app_tasks = {}  # type: Dict[int, Task]
        self.const_tasks = {}  # type: Dict[int, Task]
        self.var_sources = {}  # type: Dict[str, _Source]
        self.rhs_sources = {}  # type: Dict[int, List[_Source]]
        self.resolving = set()
        self.edges = []  # type: List[Edge]
        self.pending = []  # type: List[Tuple[Task, App]]
        for p in flat.inputs:
            self.sensors[p.name] = Task(p.name, TaskKind.sensor,
                                        outputs=[p.name], anchor=p.name,
                                        span=p.span)

    def var(self, name: str, span: Span) -> _Source:
        if name in self.sensors:
            return _Source(self.sensors[name], 0)
        if name in self.var_sources:
            return self.var_sources[name]
        if name in self.resolving:
            raise TaskGraphError(
                "variable {} is only defined through delays, with no task "
                "producing it".format(name), span)
        self.resolving.add(name)
        eq, k = self.definitions[name]
        sources = self.rhs(eq.rhs)
        self.resolving.discard(name)
        for lhs_name, source in zip(eq.lhs, sources):
            self.var_sources[lhs_name] = source
        return self.var_sources[name]

    def rhs(self, expr: Expr) -> List[_Source]:
        if expr.eid not in self.rhs_sources:
            self.rhs_sources[expr.eid] = self.sources(expr)
        return self.rhs_sources[expr.eid]

    def sources(self, expr: Expr) -> List[_Source]:
        if isinstance(expr, Var):
            return [self.var(expr.name, expr.span)]
        if isinstance(expr, Const):
            return [_Source(self.constant(expr), 0)]
        if isinstance(expr, Pair):
            result = []  # type: List[_Source]
            for item in expr.items:
                result.extend(self.sources(item))
            return result
        if isinstance(expr, Fby):
            return [s.then(PrecOp.delay(), expr.init.value)
                    for s in self.sources(expr.expr)]
        if isinstance(expr, Under):
            return [s.then(PrecOp.under(expr.k))
                    for s in self.sources(expr.expr)]
        if isinstance(expr, Over):
            return [s.then(PrecOp.over(expr.k))
                    for s in self.sources(expr.expr)]
        if isinstance(expr, Offset):
            return [s.then(PrecOp.offset(expr.q))
                    for s in self.sources(expr.expr)]
        if isinstance(expr, (BinOp, UnOp)):
            raise TaskGraphError(
                "operator '{}' cannot be placed between tasks; compute it "
                "inside an imported node".format(expr.op), expr.span)
        if isinstance(expr, App):
            task = self.application(expr)
            return [_Source(task, j) for j in range(len(task.outputs))]
        raise TypeError("Unknown expression: {!r}".format(expr))

    def constant(self, expr: Const) -> Task:
        if expr.eid not in self.const_tasks:
            name = "const_{}".format(len(self.const_tasks) + 1)
            task = Task(name, TaskKind.constant, outputs=["o"],
                        value=expr.value, anchor=expr.eid, span=expr.span)
            self.const_tasks[expr.eid] = task
            self.constants.append(task)
        return self.const_tasks[expr.eid]

    def application(self, app: App) -> Task:
        if app.eid in self.app_tasks:
            return self.app_tasks[app.eid]
        nd = self.nodes[app.node]
        task = Task(app.label or app.node, TaskKind.computation,
                    inputs=nd.input_names(), outputs=nd.output_names(),
                    node=nd.name, wcet=nd.wcet or 0, anchor=app.eid,
                    span=app.span)
        # Arguments are resolved later: with delayed feedback they lead back
        # to the variable being resolved.
        self.app_tasks[app.eid] = task
        self.computations.append(task)
        self.pending.append((task, app))
        return task

    def connect(self, source: _Source, dst: Task, dst_port: int,
                span: Span) -> None:
        position = over_before_delay(source.ops)
        if position is not None:
            raise TaskGraphError(
                "oversampling before a delay on the precedence {} -{}-> {} is "
                "not supported".format(source.task.name,
                                       format_ops(source.ops), dst.name),
                span)
        edge = Edge(source.task.name, source.port, dst.name, dst_port,
                    ops=source.ops, inits=source.inits, span=span)
        log.debug("Precedence {}".format(edge))
        self.edges.append(edge)

    def run(self) -> TaskGraph:
        for eq in self.flat.equations:
            for name in eq.lhs:
                self.var(name, eq.span)
        while self.pending:
            task, app = self.pending.pop(0)
            for port, source in enumerate(self.sources(app.arg)):
                self.connect(source, task, port, app.span)
        actuators = []  # type: List[Task]
        for p in self.flat.outputs:
            task = Task(p.name, TaskKind.actuator, inputs=[p.name],
                        anchor=p.name, span=p.span)
            actuators.append(task)
            self.connect(self.var(p.name, p.span), task, 0, p.span)
        tasks = (list(self.sensors.values()) + self.computations +
                 self.constants + actuators)
        names = set()
        for t in tasks:
            if t.name in names:
                raise TaskGraphError("duplicate task name {}".format(t.name),
                                     t.span)
            names.add(t.name)
        graph = TaskGraph(self.flat.name, tasks, self.edges)
        graph.reorder(declaration_order(graph))
        return graph


def declaration_order(g: TaskGraph) -> List[str]:
    """
    Task names in topological order of the delay-free precedences, ties
    broken by the current task order.

    Raises:
        :exc:`syncrt.exceptions.InternalError` if the delay-free graph has a
        cycle
    """
    position = {t.name: i for i, t in enumerate(g.tasks)}
    dag = g.to_networkx(delay_free=True)
    try:
        return list(nx.lexicographical_topological_sort(
            dag, key=lambda name: position[name]))
    except nx.NetworkXUnfeasible:
        raise InternalError(
            "delay-free precedences of {} form a cycle".format(g.name))


def extract_reduce(flat: NodeDecl, program: Program) -> TaskGraph:
    """
    Builds the reduced task graph of a flattened main node.

    Args:
        flat: the flattened main node, from :func:`syncrt.flatten.inline`
        program: the program it came from (for imported-node declarations)

    Returns:
        a :class:`TaskGraph` without real-time attributes

    Raises:
        :exc:`syncrt.exceptions.TaskGraphError` for operators between tasks,
        oversampling before a delay, or variables defined only through
        delays
    """
    graph = _Reducer(flat, program).run()
    log.debug("Task order of {}: {}".format(
        graph.name, ", ".join(t.name for t in graph.tasks)))
    return graph


# =============================================================================
# Real-time attributes
# =============================================================================

def _task_clock(task: Task, clocked: ClockedNode) -> PClock:
    if isinstance(task.anchor, str):
        return clocked.var_clocks[task.anchor]
    return clocked.expr_clocks[task.anchor][0]


def extract_attributes(g: TaskGraph,
                       clocked: ClockedNode,
                       sensor_wcet: int = DEFAULT_SENSOR_WCET,
                       actuator_wcet: int = DEFAULT_ACTUATOR_WCET,
                       wcet_overrides: Dict[str, int] = None,
                       tick_limit: int = DEFAULT_TICK_LIMIT) -> TaskGraph:
    """
    Fills ``T``, ``C``, ``r`` and ``due`` (in ticks) for every task, in
    place.

    The tick is ``1/L`` with ``L`` the lcm of the denominators of all task
    periods and phases; integer programs keep their source units.

    Args:
        g: the graph from :func:`extract_reduce`
        clocked: the clock annotations of the same flattened node
        sensor_wcet: wcet of sensor tasks (source units)
        actuator_wcet: wcet of actuator tasks (source units)
        wcet_overrides: imported node name -> wcet, replacing declarations
        tick_limit: largest acceptable ``L``

    Returns:
        ``g``

    Raises:
        :exc:`syncrt.exceptions.TaskGraphError` if no tick within the limit
        exists or a ``due`` exceeds its period
    """
    wcet_overrides = wcet_overrides or {}
    for t in g.tasks:
        t.clock = _task_clock(t, clocked)
    scale = common_denominator(
        [t.clock.period for t in g.tasks] + [t.clock.phase for t in g.tasks])
    if scale > tick_limit:
        raise TaskGraphError(
            "no common tick: clocks of {} need 1/{} time units, above the "
            "tick limit {}".format(g.name, scale, tick_limit))
    g.tick = Fraction(1, scale)
    dues = {p.name: p.due for p in clocked.flat.outputs}
    for t in g.tasks:
        t.T = int(t.clock.period * scale)
        t.r = int(t.clock.phase * scale)
        if t.kind == TaskKind.computation:
            wcet = wcet_overrides.get(t.node, t.wcet)
        elif t.kind == TaskKind.sensor:
            wcet = sensor_wcet
        elif t.kind == TaskKind.actuator:
            wcet = actuator_wcet
        else:
            wcet = 0
        t.C = wcet * scale
        if t.kind == TaskKind.actuator and dues.get(t.name) is not None:
            t.due = dues[t.name] * scale
            if t.due > t.T:
                raise TaskGraphError(
                    "due {} of {} exceeds its period {}".format(
                        dues[t.name], t.name, t.clock.period), t.span)
            if t.due < t.C:
                log.warning("Due {} of {} is smaller than its wcet {}".format(
                    dues[t.name], t.name, wcet))
    for p in clocked.flat.locals:
        if p.due is not None:
            log.warning("Ignoring due {} on {}: only main-node outputs carry "
                        "deadlines".format(p.due, p.name))
    check_periods(g)
    check_releases(g)
    for t in g.tasks:
        log.debug("Task {}: T={} C={} r={} due={}".format(
            t.name, t.T, t.C, t.r, t.due))
    return g


def check_periods(g: TaskGraph) -> None:
    """
    Every edge relates producer and consumer periods through its operators.

    Raises:
        :exc:`syncrt.exceptions.InternalError`
    """
    for e in g.edges:
        src, dst = g.task(e.src), g.task(e.dst)
        expected = transform_period(src.T, e.ops)
        if expected != dst.T:
            raise InternalError(
                "period mismatch on {}: {} gives {}, consumer has {}".format(
                    e, src.T, expected, dst.T))


def release_violations(g: TaskGraph,
                       window: int = RELEASE_CHECK_WINDOW) -> List[str]:
    """
    Checks ``r_i + n * T_i <= r_j + g_ops(n) * T_j`` on every edge for the
    first ``window`` producer instances.
    """
    problems = []  # type: List[str]
    for e in g.edges:
        src, dst = g.task(e.src), g.task(e.dst)
        for n in range(window):
            if src.release(n) > dst.release(g_ops(e.ops, n)):
                problems.append(
                    "{}: {}[{}] released at {} after {}[{}] at {}".format(
                        e, src.name, n, src.release(n), dst.name,
                        g_ops(e.ops, n), dst.release(g_ops(e.ops, n))))
                break
    return problems


def check_releases(g: TaskGraph) -> None:
    problems = release_violations(g)
    if problems:
        raise InternalError("release incompatibility: " + problems[0])


# =============================================================================
# DOT export
# =============================================================================

def _quote(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def to_dot(g: TaskGraph) -> str:
    """
    Graphviz rendering: one node per task labelled ``name [T,C,r]``, edges
    labelled with their operators, delayed edges dashed.
    """
    lines = ["digraph {} {{".format(_quote(g.name))]
    for t in g.tasks:
        label = str(t)
        if t.kind == TaskKind.constant:
            label += " = {}".format(format_const(t.value))
        shape = "box" if t.kind == TaskKind.computation else "ellipse"
        lines.append("    {} [label={}, shape={}];".format(
            _quote(t.name), _quote(label), shape))
    for e in g.edges:
        attrs = ["label={}".format(_quote(format_ops(e.ops)))]
        if e.delayed:
            attrs.append("style=dashed")
        lines.append("    {} -> {} [{}];".format(
            _quote(e.src), _quote(e.dst), ", ".join(attrs)))
    lines.append("}")
    return "\n".join(lines) + "\n"
