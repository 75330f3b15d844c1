#!/usr/bin/env python

"""
syncrt/flatten.py

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

**Inlining of defined nodes into the main node.**

The flattened main node contains only applications of imported nodes,
predefined operators and variables. Each imported-node application gets a
``label``: the node name if the node is called once, ``N_1``, ``N_2``, ...
otherwise. Labels become task names.

"""

from collections import Counter
import logging
from typing import Dict, List, Set

import networkx as nx

from syncrt.exceptions import InlineError
from syncrt.syntax import (
    App,
    BinOp,
    Const,
    Equation,
    Expr,
    Fby,
    NodeDecl,
    NodeKind,
    Offset,
    Over,
    Pair,
    Param,
    Program,
    Under,
    UnOp,
    Var,
    walk,
)

log = logging.getLogger(__name__)


# =============================================================================
# Call graph
# =============================================================================

def call_graph(program: Program) -> nx.DiGraph:
    """
    Graph with an edge ``M -> N`` when defined node ``M`` calls defined node
    ``N``.
    """
    nodes = program.node_map()
    g = nx.DiGraph()
    for nd in program.nodes:
        if nd.imported:
            continue
        g.add_node(nd.name)
        for eq in nd.equations:
            for e in walk(eq.rhs):
                if isinstance(e, App) and not nodes[e.node].imported:
                    g.add_edge(nd.name, e.node)
    return g


def call_order(program: Program) -> List[str]:
    """
    Defined node names, callees before callers; ties in declaration order.

    Raises:
        :exc:`syncrt.exceptions.InlineError` on recursive instantiation
    """
    g = call_graph(program)
    try:
        cycle = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        names = [u for u, _ in cycle] + [cycle[0][0]]
        nd = program.node(cycle[0][0])
        raise InlineError("recursive node instantiation: {}".format(
            " -> ".join(names)), nd.span if nd else None)
    position = {nd.name: i for i, nd in enumerate(program.nodes)}
    order = list(nx.lexicographical_topological_sort(
        g.reverse(copy=True), key=lambda name: position[name]))
    return order


def imported_call_counts(program: Program, name: str,
                         _memo: Dict[str, Counter] = None) -> Counter:
    """
    Number of imported-node applications of each kind that node ``name``
    expands to.
    """
    memo = {} if _memo is None else _memo
    if name in memo:
        return memo[name]
    nodes = program.node_map()
    counts = Counter()
    for eq in nodes[name].equations:
        for e in walk(eq.rhs):
            if isinstance(e, App):
                if nodes[e.node].imported:
                    counts[e.node] += 1
                else:
                    counts.update(imported_call_counts(program, e.node, memo))
    memo[name] = counts
    return counts


# =============================================================================
# Inliner
# =============================================================================

class _Inliner(object):
    def __init__(self, program: Program) -> None:
        self.program = program
        self.nodes = program.node_map()
        main = program.main_node
        self.used_names = {p.name for p in main.params()}  # type: Set[str]
        self.reserved_labels = set(main.input_names() + main.output_names())
        self.used_labels = set()  # type: Set[str]
        self.call_totals = imported_call_counts(program, main.name)
        self.call_seen = Counter()
        self.instances = Counter()
        self.equations = []  # type: List[Equation]
        self.locals = []  # type: List[Param]

    def fresh_name(self, base: str) -> str:
        name = base
        suffix = 1
        while name in self.used_names:
            suffix += 1
            name = "{}_{}".format(base, suffix)
        self.used_names.add(name)
        return name

    def next_label(self, node: str) -> str:
        self.call_seen[node] += 1
        if self.call_totals[node] == 1:
            candidate = node
        else:
            candidate = "{}_{}".format(node, self.call_seen[node])
        label = candidate
        suffix = 1
        while label in self.reserved_labels or label in self.used_labels:
            suffix += 1
            label = "{}_{}".format(candidate, suffix)
        self.used_labels.add(label)
        return label

    def expand(self, expr: Expr, rename: Dict[str, str]) -> Expr:
        if isinstance(expr, Const):
            return Const(expr.value, span=expr.span)
        if isinstance(expr, Var):
            return Var(rename.get(expr.name, expr.name), span=expr.span)
        if isinstance(expr, Pair):
            return Pair(tuple(self.expand(e, rename) for e in expr.items),
                        span=expr.span)
        if isinstance(expr, Fby):
            return Fby(Const(expr.init.value, span=expr.init.span),
                       self.expand(expr.expr, rename), span=expr.span)
        if isinstance(expr, Under):
            return Under(self.expand(expr.expr, rename), expr.k,
                         span=expr.span)
        if isinstance(expr, Over):
            return Over(self.expand(expr.expr, rename), expr.k,
                        span=expr.span)
        if isinstance(expr, Offset):
            return Offset(self.expand(expr.expr, rename), expr.q,
                          span=expr.span)
        if isinstance(expr, BinOp):
            return BinOp(expr.op, self.expand(expr.left, rename),
                         self.expand(expr.right, rename), span=expr.span)
        if isinstance(expr, UnOp):
            return UnOp(expr.op, self.expand(expr.operand, rename),
                        span=expr.span)
        if isinstance(expr, App):
            arg = self.expand(expr.arg, rename)
            callee = self.nodes[expr.node]
            if callee.imported:
                return App(expr.node, arg, label=self.next_label(expr.node),
                           span=expr.span)
            return self.instantiate(callee, arg)
        raise TypeError("Unknown expression: {!r}".format(expr))

    def instantiate(self, callee: NodeDecl, arg: Expr) -> Expr:
        self.instances[callee.name] += 1
        inner = {}  # type: Dict[str, str]
        for p in callee.params():
            fresh = self.fresh_name(p.name)
            inner[p.name] = fresh
            self.locals.append(Param(name=fresh, type_name=p.type_name,
                                     rate=p.rate, due=p.due, span=p.span))
        log.debug("Inlining call {} of {}: {}".format(
            self.instances[callee.name], callee.name, inner))
        if callee.inputs:
            self.equations.append(Equation(
                lhs=tuple(inner[p.name] for p in callee.inputs),
                rhs=arg, span=arg.span))
        for eq in callee.equations:
            self.equations.append(Equation(
                lhs=tuple(inner[name] for name in eq.lhs),
                rhs=self.expand(eq.rhs, inner), span=eq.span))
        outputs = [Var(inner[p.name], span=p.span) for p in callee.outputs]
        if len(outputs) == 1:
            return outputs[0]
        return Pair(tuple(outputs), span=arg.span)


def inline(program: Program) -> NodeDecl:
    """
    Flattens the main node: every call to a defined node is replaced by a
    fresh copy of its equations.

    Args:
        program: a parsed (and normally type-checked) program

    Returns:
        the flattened main node, a :class:`syncrt.syntax.NodeDecl` whose
        locals include the freshened variables of all inlined calls

    Raises:
        :exc:`syncrt.exceptions.InlineError` on recursive instantiation
    """
    call_order(program)  # rejects recursion
    main = program.main_node
    inliner = _Inliner(program)
    main_equations = []  # type: List[Equation]
    for eq in main.equations:
        rhs = inliner.expand(eq.rhs, {})
        main_equations.append(Equation(lhs=eq.lhs, rhs=rhs, span=eq.span))
    flat = NodeDecl(
        kind=NodeKind.defined,
        name=main.name,
        inputs=main.inputs,
        outputs=main.outputs,
        locals=tuple(list(main.locals) + inliner.locals),
        equations=tuple(main_equations + inliner.equations),
        span=main.span,
    )
    log.debug("Flattened {}: {} equations, {} locals".format(
        flat.name, len(flat.equations), len(flat.locals)))
    return flat


def imported_applications(flat: NodeDecl) -> List[App]:
    """
    The labelled imported-node applications of a flattened node, in
    equation order.
    """
    result = []  # type: List[App]
    for eq in flat.equations:
        for e in walk(eq.rhs):
            if isinstance(e, App):
                result.append(e)
    return result
