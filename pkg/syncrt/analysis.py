#!/usr/bin/env python

"""
syncrt/analysis.py

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

**Static analyses: typing, causality and the clock calculus.**

- :func:`type_check` infers a signature for each node; ground types are
  ``int`` and ``bool``, tuples arise from multiple parameters.
- :func:`causality_check` rejects instantaneous dependency cycles; the
  delayed argument of ``fby`` does not count.
- :func:`clock_calculus` flattens the main node and infers a strictly
  periodic clock for every variable and expression by unification.

"""

from dataclasses import dataclass
import logging
from typing import Dict, List, Optional, Set, Tuple, Union

import networkx as nx

from syncrt.clocks import (
    apply_transform,
    ClockOp,
    format_clock_signature,
    invert_transform,
    PClock,
)
from syncrt.exceptions import CausalityError, ClockError, TypeCheckError
from syncrt.flatten import call_order, inline
from syncrt.syntax import (
    App,
    ARITHMETIC_OPERATORS,
    BinOp,
    COMPARISON_OPERATORS,
    Const,
    Expr,
    Fby,
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

INT = "int"
BOOL = "bool"


# =============================================================================
# Typing
# =============================================================================

@dataclass(frozen=True)
class NodeSignature(object):
    """
    Types of a node's inputs and outputs.
    """
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]

    @staticmethod
    def _tuple(types: Tuple[str, ...]) -> str:
        if len(types) == 1:
            return types[0]
        return "(" + "*".join(types) + ")"

    def __str__(self) -> str:
        return "{}->{}".format(self._tuple(self.inputs),
                               self._tuple(self.outputs))


TypeTerm = Union[str, int]  # ground type name, or type variable number


class _TypeUnifier(object):
    def __init__(self) -> None:
        self.parent = {}  # type: Dict[int, TypeTerm]
        self.count = 0

    def fresh(self) -> int:
        self.count += 1
        self.parent[self.count] = self.count
        return self.count

    def find(self, t: TypeTerm) -> TypeTerm:
        while isinstance(t, int) and self.parent[t] != t:
            t = self.parent[t]
        return t

    def unify(self, expected: TypeTerm, got: TypeTerm, span: Span) -> None:
        a = self.find(expected)
        b = self.find(got)
        if a == b:
            return
        if isinstance(a, int):
            self.parent[a] = b
        elif isinstance(b, int):
            self.parent[b] = a
        else:
            raise TypeCheckError(
                "type mismatch: expected {}, got {}".format(a, b), span)

    def resolve(self, t: TypeTerm) -> str:
        r = self.find(t)
        return INT if isinstance(r, int) else r


class _NodeTyper(object):
    def __init__(self, nd: NodeDecl,
                 signatures: Dict[str, NodeSignature]) -> None:
        self.nd = nd
        self.signatures = signatures
        self.u = _TypeUnifier()
        self.env = {}  # type: Dict[str, TypeTerm]
        for p in nd.params():
            self.env[p.name] = p.type_name or self.u.fresh()

    def infer(self, expr: Expr) -> List[TypeTerm]:
        u = self.u
        if isinstance(expr, Const):
            return [BOOL if isinstance(expr.value, bool) else INT]
        if isinstance(expr, Var):
            return [self.env[expr.name]]
        if isinstance(expr, Pair):
            result = []  # type: List[TypeTerm]
            for item in expr.items:
                result.extend(self.infer(item))
            return result
        if isinstance(expr, Fby):
            body = self.scalar(expr.expr)
            u.unify(body, self.infer(expr.init)[0], expr.init.span)
            return [body]
        if isinstance(expr, (Under, Over, Offset)):
            return self.infer(expr.expr)
        if isinstance(expr, BinOp):
            left = self.scalar(expr.left)
            right = self.scalar(expr.right)
            if expr.op in ARITHMETIC_OPERATORS:
                u.unify(INT, left, expr.left.span)
                u.unify(INT, right, expr.right.span)
                return [INT]
            if expr.op in COMPARISON_OPERATORS:
                u.unify(INT, left, expr.left.span)
                u.unify(INT, right, expr.right.span)
                return [BOOL]
            u.unify(BOOL, left, expr.left.span)
            u.unify(BOOL, right, expr.right.span)
            return [BOOL]
        if isinstance(expr, UnOp):
            u.unify(BOOL, self.scalar(expr.operand), expr.operand.span)
            return [BOOL]
        if isinstance(expr, App):
            sig = self.signatures[expr.node]
            args = self.infer(expr.arg)
            if len(args) != len(sig.inputs):
                raise TypeCheckError(
                    "arity mismatch: {} expects {} argument(s), got {}".format(
                        expr.node, len(sig.inputs), len(args)), expr.span)
            for expected, got in zip(sig.inputs, args):
                u.unify(expected, got, expr.arg.span)
            return list(sig.outputs)
        raise TypeError("Unknown expression: {!r}".format(expr))

    def scalar(self, expr: Expr) -> TypeTerm:
        types = self.infer(expr)
        if len(types) != 1:
            raise TypeCheckError(
                "expected a single flow, got a tuple of {}".format(
                    len(types)), expr.span)
        return types[0]

    def signature(self) -> NodeSignature:
        for eq in self.nd.equations:
            rhs = self.infer(eq.rhs)
            if len(rhs) != len(eq.lhs):
                raise TypeCheckError(
                    "arity mismatch: {} variable(s) defined by an expression "
                    "with {} component(s)".format(len(eq.lhs), len(rhs)),
                    eq.span)
            for name, t in zip(eq.lhs, rhs):
                self.u.unify(self.env[name], t, eq.rhs.span)
        return NodeSignature(
            inputs=tuple(self.u.resolve(self.env[p.name])
                         for p in self.nd.inputs),
            outputs=tuple(self.u.resolve(self.env[p.name])
                          for p in self.nd.outputs))


def type_check(p: Program) -> Dict[str, NodeSignature]:
    """
    Types every node of a program.

    Imported-node signatures come from their declarations (``int`` when a
    parameter has no type); defined-node signatures are inferred, callees
    first. Unconstrained parameters default to ``int``.

    Returns:
        dict: node name -> :class:`NodeSignature`

    Raises:
        :exc:`syncrt.exceptions.TypeCheckError`
    """
    signatures = {}  # type: Dict[str, NodeSignature]
    for nd in p.nodes:
        if nd.imported:
            signatures[nd.name] = NodeSignature(
                inputs=tuple(q.type_name or INT for q in nd.inputs),
                outputs=tuple(q.type_name or INT for q in nd.outputs))
    nodes = p.node_map()
    for name in call_order(p):
        signatures[name] = _NodeTyper(nodes[name], signatures).signature()
        log.debug("Type of {}: {}".format(name, signatures[name]))
    return signatures


# =============================================================================
# Causality
# =============================================================================

class _Dependencies(object):
    def __init__(self, program: Program,
                 summaries: Dict[str, List[Set[int]]]) -> None:
        self.nodes = program.node_map()
        self.summaries = summaries

    def of(self, expr: Expr) -> List[Set[str]]:
        """
        For each component of ``expr``, the variables it depends on
        instantaneously.
        """
        if isinstance(expr, Const):
            return [set()]
        if isinstance(expr, Var):
            return [{expr.name}]
        if isinstance(expr, Pair):
            result = []  # type: List[Set[str]]
            for item in expr.items:
                result.extend(self.of(item))
            return result
        if isinstance(expr, Fby):
            return [set() for _ in self.of(expr.expr)]
        if isinstance(expr, (Under, Over, Offset)):
            return self.of(expr.expr)
        if isinstance(expr, (BinOp, UnOp)):
            merged = set()  # type: Set[str]
            for child in expr.children():
                for deps in self.of(child):
                    merged |= deps
            return [merged]
        if isinstance(expr, App):
            args = self.of(expr.arg)
            callee = self.nodes[expr.node]
            if callee.imported:
                merged = set()
                for deps in args:
                    merged |= deps
                return [set(merged) for _ in callee.outputs]
            result = []
            for inputs in self.summaries[expr.node]:
                deps = set()
                for k in inputs:
                    deps |= args[k]
                result.append(deps)
            return result
        raise TypeError("Unknown expression: {!r}".format(expr))


def dependency_graph(nd: NodeDecl, program: Program,
                     summaries: Dict[str, List[Set[int]]]) -> nx.DiGraph:
    """
    Instantaneous-dependency graph of a defined node: an edge ``x -> y``
    when ``x`` depends on ``y`` without an intervening ``fby``.
    """
    deps = _Dependencies(program, summaries)
    g = nx.DiGraph()
    for p in nd.params():
        g.add_node(p.name)
    for eq in nd.equations:
        for name, vars_ in zip(eq.lhs, deps.of(eq.rhs)):
            for v in sorted(vars_):
                g.add_edge(name, v)
    return g


def causality_check(p: Program) -> Dict[str, List[Set[int]]]:
    """
    Checks that no variable depends instantaneously on itself.

    Node calls are summarized: for each output of a defined node, the input
    positions it depends on instantaneously.

    Returns:
        the dependency summaries, node name -> per-output input positions

    Raises:
        :exc:`syncrt.exceptions.CausalityError` naming one cycle
    """
    nodes = p.node_map()
    summaries = {}  # type: Dict[str, List[Set[int]]]
    for name in call_order(p):
        nd = nodes[name]
        g = dependency_graph(nd, p, summaries)
        try:
            cycle = nx.find_cycle(g)
        except nx.NetworkXNoCycle:
            cycle = None
        if cycle:
            names = [u for u, _ in cycle]
            definitions = nd.definitions()
            span = definitions[names[0]][0].span \
                if names[0] in definitions else nd.span
            raise CausalityError(names, span)
        positions = {q.name: i for i, q in enumerate(nd.inputs)}
        summaries[name] = [
            {positions[v] for v in nx.descendants(g, o.name) if v in positions}
            for o in nd.outputs
        ]
    return summaries


# =============================================================================
# Clock calculus
# =============================================================================

class _ClockSolver(object):
    """
    Union-find over clock variables, with pending transform constraints
    ``dst = transform(src)``. A transform is solved forwards when ``src`` is
    known and backwards (through the inverse transform) when ``dst`` is.
    """
    def __init__(self) -> None:
        self.parent = []  # type: List[int]
        self.value = {}  # type: Dict[int, PClock]
        self.pending = []  # type: List[Tuple[int, ClockOp, int, Span]]

    def fresh(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def clock(self, v: int) -> Optional[PClock]:
        return self.value.get(self.find(v))

    def unify(self, a: int, b: int, span: Span) -> None:
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return
        ca = self.value.get(ra)
        cb = self.value.get(rb)
        if ca is not None and cb is not None and ca != cb:
            raise ClockError("clock mismatch: {} and {}".format(ca, cb), span)
        self.parent[rb] = ra
        if ca is None and cb is not None:
            self.value[ra] = cb
        self.value.pop(rb, None)

    def set_clock(self, v: int, c: PClock, span: Span) -> None:
        r = self.find(v)
        current = self.value.get(r)
        if current is not None and current != c:
            raise ClockError("clock mismatch: {} and {}".format(current, c),
                             span)
        self.value[r] = c

    def transform(self, dst: int, op: ClockOp, src: int, span: Span) -> None:
        self.pending.append((dst, op, src, span))

    def solve(self) -> None:
        progress = True
        while self.pending and progress:
            progress = False
            remaining = []
            for dst, op, src, span in self.pending:
                source = self.clock(src)
                target = self.clock(dst)
                if source is not None:
                    self.set_clock(dst, apply_transform(source, op), span)
                    progress = True
                elif target is not None:
                    inverse = invert_transform(target, op)
                    if inverse.phase < 0:
                        raise ClockError(
                            "clock {} would need a negative phase".format(
                                target), span)
                    self.set_clock(src, inverse, span)
                    progress = True
                else:
                    remaining.append((dst, op, src, span))
            self.pending = remaining


@dataclass
class ClockedNode(object):
    """
    A flattened main node with a resolved clock for every variable and every
    expression component.
    """
    flat: NodeDecl
    var_clocks: Dict[str, PClock]
    expr_clocks: Dict[int, Tuple[PClock, ...]]

    def clock_of(self, expr: Expr) -> PClock:
        clocks = self.expr_clocks[expr.eid]
        assert len(clocks) == 1, "Expression is a tuple"
        return clocks[0]

    @property
    def input_clocks(self) -> List[PClock]:
        return [self.var_clocks[p.name] for p in self.flat.inputs]

    @property
    def output_clocks(self) -> List[PClock]:
        return [self.var_clocks[p.name] for p in self.flat.outputs]

    def signature(self) -> str:
        return format_clock_signature(self.input_clocks, self.output_clocks)

    def all_clocks(self) -> List[PClock]:
        result = list(self.var_clocks.values())
        for clocks in self.expr_clocks.values():
            result.extend(clocks)
        return result


class _ClockInference(object):
    def __init__(self, flat: NodeDecl, program: Program) -> None:
        self.flat = flat
        self.nodes = program.node_map()
        self.solver = _ClockSolver()
        self.var_ids = {}  # type: Dict[str, int]
        self.expr_ids = {}  # type: Dict[int, List[int]]
        for p in flat.params():
            v = self.solver.fresh()
            self.var_ids[p.name] = v
            if p.rate is not None:
                self.solver.set_clock(v, PClock.from_rate(*p.rate), p.span)

    def infer(self, expr: Expr) -> List[int]:
        s = self.solver
        if isinstance(expr, Const):
            result = [s.fresh()]
        elif isinstance(expr, Var):
            result = [self.var_ids[expr.name]]
        elif isinstance(expr, Pair):
            result = []
            for item in expr.items:
                result.extend(self.infer(item))
        elif isinstance(expr, Fby):
            result = self.infer(expr.expr)
            self.expr_ids[expr.init.eid] = list(result)
        elif isinstance(expr, (Under, Over, Offset)):
            if isinstance(expr, Under):
                op = ClockOp.each(expr.k)
            elif isinstance(expr, Over):
                op = ClockOp.times(expr.k)
            else:
                op = ClockOp.phase(expr.q)
            result = []
            for src in self.infer(expr.expr):
                dst = s.fresh()
                s.transform(dst, op, src, expr.span)
                result.append(dst)
        elif isinstance(expr, BinOp):
            left = self.infer(expr.left)
            right = self.infer(expr.right)
            s.unify(left[0], right[0], expr.span)
            result = left
        elif isinstance(expr, UnOp):
            result = self.infer(expr.operand)
        elif isinstance(expr, App):
            shared = s.fresh()
            for v in self.infer(expr.arg):
                s.unify(shared, v, expr.span)
            result = [shared for _ in self.nodes[expr.node].outputs]
        else:
            raise TypeError("Unknown expression: {!r}".format(expr))
        self.expr_ids[expr.eid] = result
        return result

    def run(self) -> ClockedNode:
        for eq in self.flat.equations:
            rhs = self.infer(eq.rhs)
            for name, v in zip(eq.lhs, rhs):
                self.solver.unify(self.var_ids[name], v, eq.span)
        self.solver.solve()
        var_clocks = {}  # type: Dict[str, PClock]
        for p in self.flat.params():
            c = self.solver.clock(self.var_ids[p.name])
            if c is None:
                raise ClockError(
                    "underconstrained program: the clock of {} cannot be "
                    "determined".format(p.name), p.span)
            var_clocks[p.name] = c
        expr_clocks = {}  # type: Dict[int, Tuple[PClock, ...]]
        for eid, ids in self.expr_ids.items():
            clocks = []
            for v in ids:
                c = self.solver.clock(v)
                if c is None:
                    raise ClockError("underconstrained program: a constant "
                                     "has no determined clock")
                clocks.append(c)
            expr_clocks[eid] = tuple(clocks)
        return ClockedNode(flat=self.flat, var_clocks=var_clocks,
                           expr_clocks=expr_clocks)


def clock_calculus(p: Program, flat: NodeDecl = None) -> ClockedNode:
    """
    Infers strictly periodic clocks.

    The main node is flattened first (or ``flat`` is used if given), so each
    call site of a defined node gets its own clock variables. Imported nodes
    are applied point-wise: all their inputs and outputs share one clock.
    Declared ``rate (n, p)`` annotations are hard constraints.

    Raises:
        :exc:`syncrt.exceptions.ClockError` on a mismatch, or if some clock
        remains undetermined
    """
    if flat is None:
        flat = inline(p)
    clocked = _ClockInference(flat, p).run()
    log.debug("Clock of {}: {}".format(flat.name, clocked.signature()))
    return clocked
