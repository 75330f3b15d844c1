#!/usr/bin/env python

"""
syncrt/syntax.py

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

**Abstract syntax of multi-periodic synchronous programs, and a
pretty-printer.**

Expressions are immutable. Each expression object also carries an ``eid``,
a process-unique identifier that does not take part in equality; analyses
key their annotations (clocks, types) on it, so two structurally equal
subexpressions at different places keep distinct annotations.

"""

from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
import itertools
import logging
from typing import Dict, Generator, List, Optional, Tuple, Union

log = logging.getLogger(__name__)

_EXPR_IDS = itertools.count(1)


def _next_eid() -> int:
    return next(_EXPR_IDS)


# =============================================================================
# Source positions
# =============================================================================

@dataclass(frozen=True)
class Span(object):
    """
    A region of source text; lines and columns are 1-based. Line 0 means
    "no position" (e.g. for synthesized expressions).
    """
    line: int
    column: int
    end_line: int = 0
    end_column: int = 0

    def __str__(self) -> str:
        return "{}:{}".format(self.line, self.column)


NO_SPAN = Span(0, 0)


# =============================================================================
# Expressions
# =============================================================================

class Expr(object):
    """
    Base class of all expressions.
    """
    span = NO_SPAN  # type: Span
    eid = 0  # type: int

    def children(self) -> Tuple["Expr", ...]:
        return ()


@dataclass(frozen=True)
class Const(Expr):
    value: Union[int, bool]
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Expr):
    name: str
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)


@dataclass(frozen=True)
class Pair(Expr):
    """
    A tuple of expressions, ``(e1, e2, ...)``. The empty tuple is the
    argument of a node called with no inputs.
    """
    items: Tuple[Expr, ...]
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.items


@dataclass(frozen=True)
class Fby(Expr):
    """
    ``init fby expr``: the initial value, followed by ``expr`` delayed by one
    instance of its clock.
    """
    init: Const
    expr: Expr
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.expr,


@dataclass(frozen=True)
class App(Expr):
    """
    Application of node ``node`` to ``arg``. After flattening, applications of
    imported nodes carry a ``label``, the name of the task they become.
    """
    node: str
    arg: Expr
    label: Optional[str] = None
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.arg,


@dataclass(frozen=True)
class Under(Expr):
    """
    ``expr /^ k``: keeps the first value out of each ``k``.
    """
    expr: Expr
    k: int
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.expr,


@dataclass(frozen=True)
class Over(Expr):
    """
    ``expr *^ k``: repeats each value ``k`` times on a ``k`` times faster
    clock.
    """
    expr: Expr
    k: int
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.expr,


@dataclass(frozen=True)
class Offset(Expr):
    """
    ``expr ~> q``: shifts the tags of ``expr`` by ``q`` times its period.
    """
    expr: Expr
    q: Fraction
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.expr,


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.left, self.right


@dataclass(frozen=True)
class UnOp(Expr):
    op: str
    operand: Expr
    span: Span = NO_SPAN
    eid: int = field(default_factory=_next_eid, compare=False, repr=False)

    def children(self) -> Tuple[Expr, ...]:
        return self.operand,


ARITHMETIC_OPERATORS = ("+", "-", "*")
COMPARISON_OPERATORS = ("<", "<=", ">", ">=")
LOGICAL_OPERATORS = ("and", "or")
CLOCK_OPERATORS = (Under, Over, Offset)


def walk(expr: Expr) -> Generator[Expr, None, None]:
    """
    Yields ``expr`` and all its subexpressions, parents first, left to right.
    """
    yield expr
    for child in expr.children():
        yield from walk(child)


# =============================================================================
# Declarations
# =============================================================================

@unique
class NodeKind(Enum):
    defined = 1
    imported = 2


@dataclass(frozen=True)
class Param(object):
    """
    A node input, output or local variable.

    ``rate`` is the declared clock as ``(n, p)``: period ``n``, phase ``n * p``.
    """
    name: str
    type_name: Optional[str] = None
    rate: Optional[Tuple[int, Fraction]] = None
    due: Optional[int] = None
    span: Span = NO_SPAN


@dataclass(frozen=True)
class Equation(object):
    lhs: Tuple[str, ...]
    rhs: Expr
    span: Span = NO_SPAN


@dataclass(frozen=True)
class NodeDecl(object):
    kind: NodeKind
    name: str
    inputs: Tuple[Param, ...]
    outputs: Tuple[Param, ...]
    locals: Tuple[Param, ...] = ()
    equations: Tuple[Equation, ...] = ()
    wcet: Optional[int] = None
    span: Span = NO_SPAN

    @property
    def imported(self) -> bool:
        return self.kind == NodeKind.imported

    def input_names(self) -> List[str]:
        return [p.name for p in self.inputs]

    def output_names(self) -> List[str]:
        return [p.name for p in self.outputs]

    def params(self) -> List[Param]:
        """
        Inputs, outputs and locals, in that order.
        """
        return list(self.inputs) + list(self.outputs) + list(self.locals)

    def param(self, name: str) -> Optional[Param]:
        for p in self.params():
            if p.name == name:
                return p
        return None

    def definitions(self) -> Dict[str, Tuple[Equation, int]]:
        """
        Maps each defined variable to its equation and its position in the
        equation's left-hand side.
        """
        result = {}  # type: Dict[str, Tuple[Equation, int]]
        for eq in self.equations:
            for i, name in enumerate(eq.lhs):
                result[name] = (eq, i)
        return result


@dataclass(frozen=True)
class Program(object):
    nodes: Tuple[NodeDecl, ...]
    main: str

    def node(self, name: str) -> Optional[NodeDecl]:
        for nd in self.nodes:
            if nd.name == name:
                return nd
        return None

    def node_map(self) -> Dict[str, NodeDecl]:
        return {nd.name: nd for nd in self.nodes}

    @property
    def main_node(self) -> NodeDecl:
        return self.node_map()[self.main]


# =============================================================================
# Pretty-printing
# =============================================================================

def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "{}/{}".format(q.numerator, q.denominator)


def format_const(value: Union[int, bool]) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _is_atomic(expr: Expr) -> bool:
    if isinstance(expr, Const):
        return not (isinstance(expr.value, int) and
                    not isinstance(expr.value, bool) and expr.value < 0)
    return isinstance(expr, (Var, App, Pair))


def _operand(expr: Expr) -> str:
    text = format_expr(expr)
    if _is_atomic(expr) or isinstance(expr, CLOCK_OPERATORS):
        return text
    return "(" + text + ")"


def format_expr(expr: Expr) -> str:
    """
    Renders an expression as source text. Compound operands are
    parenthesized, so the output re-parses to the same tree.
    """
    if isinstance(expr, Const):
        return format_const(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Pair):
        return "(" + ", ".join(format_expr(e) for e in expr.items) + ")"
    if isinstance(expr, App):
        if isinstance(expr.arg, Pair):
            args = ", ".join(format_expr(e) for e in expr.arg.items)
        else:
            args = format_expr(expr.arg)
        return "{}({})".format(expr.node, args)
    if isinstance(expr, Fby):
        return "{} fby {}".format(format_expr(expr.init), _operand(expr.expr))
    if isinstance(expr, Under):
        return "{} /^ {}".format(_operand(expr.expr), expr.k)
    if isinstance(expr, Over):
        return "{} *^ {}".format(_operand(expr.expr), expr.k)
    if isinstance(expr, Offset):
        return "{} ~> {}".format(_operand(expr.expr), format_fraction(expr.q))
    if isinstance(expr, BinOp):
        return "{} {} {}".format(_strict_operand(expr.left), expr.op,
                                 _strict_operand(expr.right))
    if isinstance(expr, UnOp):
        return "{} {}".format(expr.op, _strict_operand(expr.operand))
    raise TypeError("Unknown expression: {!r}".format(expr))


def _strict_operand(expr: Expr) -> str:
    text = format_expr(expr)
    if _is_atomic(expr):
        return text
    return "(" + text + ")"


def format_param(p: Param) -> str:
    parts = []  # type: List[str]
    if p.type_name:
        parts.append(p.type_name)
    if p.rate is not None:
        parts.append("rate ({}, {})".format(p.rate[0],
                                           format_fraction(p.rate[1])))
    if p.due is not None:
        parts.append("due {}".format(p.due))
    if not parts:
        return p.name
    return "{}: {}".format(p.name, " ".join(parts))


def format_node(nd: NodeDecl) -> str:
    inputs = "; ".join(format_param(p) for p in nd.inputs)
    outputs = "; ".join(format_param(p) for p in nd.outputs)
    if nd.imported:
        return "imported node {}({}) returns ({}) wcet {};\n".format(
            nd.name, inputs, outputs, nd.wcet)
    lines = ["node {}({}) returns ({})".format(nd.name, inputs, outputs)]
    if nd.locals:
        lines.append("var " + " ".join(format_param(p) + ";"
                                       for p in nd.locals))
    lines.append("let")
    for eq in nd.equations:
        if len(eq.lhs) == 1:
            lhs = eq.lhs[0]
        else:
            lhs = "(" + ", ".join(eq.lhs) + ")"
        lines.append("  {} = {};".format(lhs, format_expr(eq.rhs)))
    lines.append("tel")
    return "\n".join(lines) + "\n"


def pretty_print(program: Program) -> str:
    """
    Renders a whole program as source text. The main node is printed last,
    which is where :func:`syncrt.frontend.parse` looks for it by default.
    """
    ordered = [nd for nd in program.nodes if nd.name != program.main]
    ordered += [nd for nd in program.nodes if nd.name == program.main]
    return "\n".join(format_node(nd) for nd in ordered)
