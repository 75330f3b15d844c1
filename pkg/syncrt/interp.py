#!/usr/bin/env python

"""
syncrt/interp.py

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

**Reference interpreter of the synchronous semantics.**

Imported nodes are not executed: instance ``i`` of a call labelled ``N``
produces the symbol ``N<i>(args)``. Sensors produce ``x<i>()``. Two values
are the same when their references are: the producer and instance for
symbols, the text for literals.

"""

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Any, Dict, List, Optional, Tuple, Union

from syncrt.analysis import ClockedNode
from syncrt.clocks import PClock
from syncrt.flatten import imported_applications
from syncrt.maths import ceil_div, common_denominator, lcm_all
from syncrt.syntax import (
    App,
    BinOp,
    Const,
    Expr,
    Fby,
    format_const,
    Offset,
    Over,
    Pair,
    Under,
    UnOp,
    Var,
)

log = logging.getLogger(__name__)


# =============================================================================
# Symbolic values
# =============================================================================

class SymValue(object):
    """
    Base class of symbolic values; equality and hashing go through
    :meth:`ref`, which never recurses into producer arguments.
    """
    def ref(self) -> Tuple:
        raise NotImplementedError

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, SymValue) and self.ref() == other.ref()

    def __hash__(self) -> int:
        return hash(self.ref())

    def short(self) -> str:
        return str(self)


@dataclass(frozen=True, eq=False)
class Lit(SymValue):
    value: Union[int, bool]

    def ref(self) -> Tuple:
        return "lit", format_const(self.value)

    def __str__(self) -> str:
        return format_const(self.value)


@dataclass(frozen=True, eq=False)
class Node(SymValue):
    """
    Output ``port`` of instance ``instance`` of the producer ``name``.
    """
    name: str
    instance: int
    args: Tuple[SymValue, ...] = ()
    port: int = 0

    def ref(self) -> Tuple:
        return "node", self.name, self.instance, self.port

    def short(self) -> str:
        text = "{}<{}>".format(self.name, self.instance)
        if self.port:
            text += ".{}".format(self.port)
        return text

    def __str__(self) -> str:
        return "{}<{}>({}){}".format(
            self.name, self.instance,
            ", ".join(a.short() for a in self.args),
            ".{}".format(self.port) if self.port else "")


@dataclass(frozen=True, eq=False)
class Op(SymValue):
    """
    A predefined operator applied to values that are not all literals.
    """
    operator: str
    args: Tuple[SymValue, ...]

    def ref(self) -> Tuple:
        return ("op", self.operator) + tuple(a.ref() for a in self.args)

    def __str__(self) -> str:
        if len(self.args) == 1:
            return "({} {})".format(self.operator, self.args[0].short())
        return "({} {} {})".format(self.args[0].short(), self.operator,
                                   self.args[1].short())


def fold(operator: str, args: List[SymValue]) -> SymValue:
    """
    Applies a predefined operator, computing it when all arguments are
    literals.
    """
    if not all(isinstance(a, Lit) for a in args):
        return Op(operator, tuple(args))
    v = [a.value for a in args]
    if operator == "not":
        return Lit(not v[0])
    a, b = v
    if operator == "+":
        return Lit(a + b)
    if operator == "-":
        return Lit(a - b)
    if operator == "*":
        return Lit(a * b)
    if operator == "<":
        return Lit(a < b)
    if operator == "<=":
        return Lit(a <= b)
    if operator == ">":
        return Lit(a > b)
    if operator == ">=":
        return Lit(a >= b)
    if operator == "and":
        return Lit(a and b)
    if operator == "or":
        return Lit(a or b)
    raise ValueError("Unknown operator: {!r}".format(operator))


# =============================================================================
# Flows
# =============================================================================

class Flow(object):
    """
    A finite prefix of a flow: the values of instances ``0, 1, ...``, with
    tags ``phase + i * period`` (in ticks).
    """
    def __init__(self, name: str, clock: PClock,
                 values: List[SymValue]) -> None:
        self.name = name
        self.clock = clock
        self.values = values

    def __repr__(self) -> str:
        return "Flow({!r}, {}, {} values)".format(self.name, self.clock,
                                                  len(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def tag(self, i: int) -> Fraction:
        return self.clock.tag(i)

    @property
    def tags(self) -> List[Fraction]:
        return [self.tag(i) for i in range(len(self.values))]

    def samples(self) -> List[Tuple[Fraction, SymValue]]:
        return list(zip(self.tags, self.values))

    def value_at(self, tag: Fraction) -> Optional[SymValue]:
        for t, v in self.samples():
            if t == tag:
                return v
        return None


def instance_count(clock: PClock, horizon: Union[int, Fraction]) -> int:
    """
    Number of activations of ``clock`` with a tag before ``horizon``.
    """
    if horizon <= clock.phase:
        return 0
    span = Fraction(horizon) - clock.phase
    return ceil_div(span.numerator * clock.period.denominator,
                    span.denominator * clock.period.numerator)


# =============================================================================
# Evaluation
# =============================================================================

class Evaluation(object):
    """
    Result of :func:`evaluate`.

    - ``flows``: variable name -> :class:`Flow`, for every variable of the
      flattened node;
    - ``calls``: call label -> per-instance argument values;
    - ``tick``, ``horizon``: the time scale used (ticks per source unit is
      ``1 / tick``).
    """
    def __init__(self, flows: Dict[str, Flow],
                 calls: Dict[str, List[Tuple[SymValue, ...]]],
                 tick: Fraction, horizon: int) -> None:
        self.flows = flows
        self.calls = calls
        self.tick = tick
        self.horizon = horizon

    def flow(self, name: str) -> Flow:
        return self.flows[name]


class _Evaluator(object):
    def __init__(self, clocked: ClockedNode, tick: Fraction) -> None:
        self.clocked = clocked
        self.flat = clocked.flat
        self.tick = tick
        self.definitions = self.flat.definitions()
        self.inputs = set(self.flat.input_names())
        self.memo = {}  # type: Dict[Tuple[int, int], List[SymValue]]
        self.var_memo = {}  # type: Dict[Tuple[str, int], SymValue]
        self.calls = {}  # type: Dict[str, Dict[int, Tuple[SymValue, ...]]]

    def var(self, name: str, i: int) -> SymValue:
        key = (name, i)
        if key not in self.var_memo:
            if name in self.inputs:
                value = Node(name, i)  # type: SymValue
            else:
                eq, k = self.definitions[name]
                value = self.value(eq.rhs, i)[k]
            self.var_memo[key] = value
        return self.var_memo[key]

    def value(self, expr: Expr, i: int) -> List[SymValue]:
        key = (expr.eid, i)
        if key in self.memo:
            return self.memo[key]
        if isinstance(expr, Const):
            result = [Lit(expr.value)]  # type: List[SymValue]
        elif isinstance(expr, Var):
            result = [self.var(expr.name, i)]
        elif isinstance(expr, Pair):
            result = []
            for item in expr.items:
                result.extend(self.value(item, i))
        elif isinstance(expr, Fby):
            if i == 0:
                width = len(self.clocked.expr_clocks[expr.expr.eid])
                result = [Lit(expr.init.value)] * width
            else:
                result = self.value(expr.expr, i - 1)
        elif isinstance(expr, Under):
            result = self.value(expr.expr, expr.k * i)
        elif isinstance(expr, Over):
            result = self.value(expr.expr, i // expr.k)
        elif isinstance(expr, Offset):
            result = self.value(expr.expr, i)
        elif isinstance(expr, BinOp):
            result = [fold(expr.op, [self.value(expr.left, i)[0],
                                     self.value(expr.right, i)[0]])]
        elif isinstance(expr, UnOp):
            result = [fold(expr.op, [self.value(expr.operand, i)[0]])]
        elif isinstance(expr, App):
            args = tuple(self.value(expr.arg, i))
            label = expr.label or expr.node
            self.calls.setdefault(label, {})[i] = args
            width = len(self.clocked.expr_clocks[expr.eid])
            result = [Node(label, i, args, j) for j in range(width)]
        else:
            raise TypeError("Unknown expression: {!r}".format(expr))
        self.memo[key] = result
        return result

    def ticks(self, clock: PClock) -> PClock:
        return clock.scaled(self.tick)

    def run(self, horizon: int) -> Evaluation:
        # Everything an instance needs has a tag no later than its own, so
        # evaluating in tag order keeps the recursion shallow.
        work = []  # type: List[Tuple[Fraction, int, str, Any]]
        for p in self.flat.params():
            clock = self.ticks(self.clocked.var_clocks[p.name])
            for i in range(instance_count(clock, horizon)):
                work.append((clock.tag(i), len(work), "var", (p.name, i)))
        for e in imported_applications(self.flat):
            clock = self.ticks(self.clocked.expr_clocks[e.eid][0])
            for i in range(instance_count(clock, horizon)):
                work.append((clock.tag(i), len(work), "app", (e, i)))
        work.sort(key=lambda item: (item[0], item[1]))
        for _, _, kind, (target, i) in work:
            if kind == "var":
                self.var(target, i)
            else:
                self.value(target, i)
        flows = {}  # type: Dict[str, Flow]
        for p in self.flat.params():
            clock = self.ticks(self.clocked.var_clocks[p.name])
            count = instance_count(clock, horizon)
            flows[p.name] = Flow(p.name, clock,
                                 [self.var(p.name, i) for i in range(count)])
        calls = {
            label: [instances[i] for i in sorted(instances)]
            for label, instances in self.calls.items()
        }
        return Evaluation(flows, calls, self.tick, horizon)


def default_tick(clocked: ClockedNode) -> Fraction:
    """
    The tick used by the task graph: ``1/L`` with ``L`` the lcm of all
    clock denominators.
    """
    clocks = clocked.all_clocks()
    return Fraction(1, common_denominator(
        [c.period for c in clocks] + [c.phase for c in clocks]))


def evaluate(clocked: ClockedNode, horizon: int,
             tick: Fraction = None) -> Evaluation:
    """
    Evaluates every variable of a flattened, clocked node over
    ``[0, horizon)`` ticks.

    Args:
        clocked: result of :func:`syncrt.analysis.clock_calculus`
        horizon: length of the prefix, in ticks
        tick: source time units per tick; by default the task-graph tick

    Returns:
        an :class:`Evaluation`
    """
    if tick is None:
        tick = default_tick(clocked)
    periods = [c.scaled(tick).period for c in clocked.all_clocks()]
    h = lcm_all(int(p) for p in periods if p.denominator == 1)
    if horizon % h != 0:
        log.warning("Horizon {} is not a multiple of the hyperperiod "
                    "{}".format(horizon, h))
    result = _Evaluator(clocked, tick).run(horizon)
    log.debug("Evaluated {} over [0,{}): {} flows, {} calls".format(
        clocked.flat.name, horizon, len(result.flows), len(result.calls)))
    return result


def format_flow(f: Flow) -> List[str]:
    """
    ``(tag, value)`` rows.
    """
    rows = []  # type: List[str]
    for tag, value in f.samples():
        rows.append("({}, {})".format(tag, value))
    return rows
