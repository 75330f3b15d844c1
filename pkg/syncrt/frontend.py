#!/usr/bin/env python

"""
syncrt/frontend.py

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

**Lexing and parsing of ``.mps`` source files.**

A program is a sequence of node declarations:

.. code-block:: none

    imported node PA(i: int) returns (o: int) wcet 1;

    node FCS (pos_r: rate (120, 0); angle, pos, acc) returns (order: due 15)
    var acc_i, acc_r, angle_r, pos_i;
    let
      acc_r = navigation(pos_i/^12, pos_r);
      order = piloting(angle_r/^4, acc_i/^4, (0 fby acc_r)*^3);
      (pos_i, acc_i, angle_r) = acquisition(angle, pos, acc);
    tel

Postfix clock operators (``/^``, ``*^``, ``~>``) bind tighter than anything
else; ``fby`` binds loosest, so ``0 fby x *^ 3`` is ``0 fby (x *^ 3)``.
Comments run from ``--`` to the end of the line.

"""

from fractions import Fraction
import logging
import os
from typing import Any, Dict, List, Optional, Set

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from syncrt.exceptions import InputFileError, ParseError, SyncrtError
from syncrt.syntax import (
    App,
    BinOp,
    Const,
    Equation,
    Expr,
    Fby,
    NodeDecl,
    NodeKind,
    NO_SPAN,
    Offset,
    Over,
    Pair,
    Param,
    Program,
    Span,
    Under,
    UnOp,
    Var,
    walk,
)

log = logging.getLogger(__name__)

THIS_DIR = os.path.abspath(os.path.dirname(__file__))
PROGRAMS_DIR = os.path.join(THIS_DIR, "programs")


# =============================================================================
# Grammar
# =============================================================================

GRAMMAR = r"""
start: node_decl*

?node_decl: imported_node
          | defined_node

imported_node: "imported" "node" NAME "(" param_list ")" "returns" "(" param_list ")" "wcet" INT ";"
defined_node: "node" NAME "(" param_list ")" "returns" "(" param_list ")" ";"? locals? "let" equation* "tel" ";"?

param_list: (param ((";" | ",") param)*)?
param: NAME (":" annotation)?
annotation: type_name rate_clause? due_clause?
          | rate_clause due_clause?
          | due_clause
type_name: "int" -> int_type
         | "bool" -> bool_type
rate_clause: "rate" "(" INT "," rational ")"
due_clause: "due" INT

locals: "var" local_group+
local_group: NAME ("," NAME)* (":" type_name)? ";"

equation: lhs "=" expr ";"
lhs: NAME -> single_lhs
   | "(" NAME ("," NAME)* ")" -> tuple_lhs

?expr: fby_expr

?fby_expr: or_expr
         | const "fby" fby_expr -> fby

?or_expr: or_expr "or" and_expr -> or_op
        | and_expr

?and_expr: and_expr "and" not_expr -> and_op
         | not_expr

?not_expr: "not" not_expr -> not_op
         | cmp_expr

?cmp_expr: sum_expr "<" sum_expr -> lt
         | sum_expr "<=" sum_expr -> le
         | sum_expr ">" sum_expr -> gt
         | sum_expr ">=" sum_expr -> ge
         | sum_expr

?sum_expr: sum_expr "+" prod_expr -> add
         | sum_expr "-" prod_expr -> sub
         | prod_expr

?prod_expr: prod_expr "*" postfix -> mul
          | postfix

?postfix: postfix "/^" INT -> under
        | postfix "*^" INT -> over
        | postfix "~>" rational -> offset
        | atom

?atom: const
     | NAME -> var
     | NAME "(" arg_list ")" -> app
     | "(" expr ")"
     | "(" expr ("," expr)+ ")" -> pair

arg_list: (expr ("," expr)*)?

const: INT -> int_const
     | "-" INT -> neg_const
     | "true" -> true_const
     | "false" -> false_const

rational: INT ("/" INT)?

NAME: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT.2: /--[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

_parser = None  # type: Optional[Lark]


def get_parser() -> Lark:
    """
    Returns the (cached) LALR parser.
    """
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True)
    return _parser


# =============================================================================
# Tree to AST
# =============================================================================

def _span(meta: Any) -> Span:
    if getattr(meta, "empty", True):
        return NO_SPAN
    return Span(meta.line, meta.column,
                getattr(meta, "end_line", 0), getattr(meta, "end_column", 0))


def _token_span(token: Token) -> Span:
    return Span(token.line or 0, token.column or 0,
                token.end_line or 0, token.end_column or 0)


class _Annotation(object):
    def __init__(self) -> None:
        self.type_name = None  # type: Optional[str]
        self.rate = None  # type: Optional[tuple]
        self.due = None  # type: Optional[int]


class _Locals(object):
    def __init__(self, params: List[Param]) -> None:
        self.params = params


@v_args(meta=True)
class AstBuilder(Transformer):
    """
    Turns the lark parse tree into :mod:`syncrt.syntax` objects.
    """

    # -------------------------------------------------------------------------
    # Declarations
    # -------------------------------------------------------------------------

    def start(self, meta, children) -> List[NodeDecl]:
        return list(children)

    def imported_node(self, meta, children) -> NodeDecl:
        name, inputs, outputs, wcet = children
        return NodeDecl(kind=NodeKind.imported, name=str(name),
                        inputs=tuple(inputs), outputs=tuple(outputs),
                        wcet=int(wcet), span=_span(meta))

    def defined_node(self, meta, children) -> NodeDecl:
        name, inputs, outputs = children[:3]
        local_params = []  # type: List[Param]
        equations = []  # type: List[Equation]
        for child in children[3:]:
            if isinstance(child, _Locals):
                local_params.extend(child.params)
            else:
                equations.append(child)
        return NodeDecl(kind=NodeKind.defined, name=str(name),
                        inputs=tuple(inputs), outputs=tuple(outputs),
                        locals=tuple(local_params),
                        equations=tuple(equations), span=_span(meta))

    def param_list(self, meta, children) -> List[Param]:
        return list(children)

    def param(self, meta, children) -> Param:
        name = children[0]
        annotation = children[1] if len(children) > 1 else _Annotation()
        return Param(name=str(name), type_name=annotation.type_name,
                     rate=annotation.rate, due=annotation.due,
                     span=_token_span(name))

    def annotation(self, meta, children) -> _Annotation:
        result = _Annotation()
        for child in children:
            if isinstance(child, str):
                result.type_name = child
            elif child[0] == "rate":
                result.rate = child[1]
            else:
                result.due = child[1]
        return result

    def int_type(self, meta, children) -> str:
        return "int"

    def bool_type(self, meta, children) -> str:
        return "bool"

    def rate_clause(self, meta, children) -> tuple:
        return "rate", (int(children[0]), children[1])

    def due_clause(self, meta, children) -> tuple:
        return "due", int(children[0])

    def locals(self, meta, children) -> _Locals:
        params = []  # type: List[Param]
        for group in children:
            params.extend(group)
        return _Locals(params)

    def local_group(self, meta, children) -> List[Param]:
        type_name = None
        if isinstance(children[-1], str) and \
                not isinstance(children[-1], Token):
            type_name = children[-1]
            children = children[:-1]
        return [Param(name=str(tok), type_name=type_name,
                      span=_token_span(tok))
                for tok in children]

    def equation(self, meta, children) -> Equation:
        lhs, rhs = children
        return Equation(lhs=lhs, rhs=rhs, span=_span(meta))

    def single_lhs(self, meta, children) -> tuple:
        return str(children[0]),

    def tuple_lhs(self, meta, children) -> tuple:
        return tuple(str(c) for c in children)

    # -------------------------------------------------------------------------
    # Expressions
    # -------------------------------------------------------------------------

    def fby(self, meta, children) -> Fby:
        init, expr = children
        return Fby(init, expr, span=_span(meta))

    def _binop(self, op: str, meta, children) -> BinOp:
        left, right = children
        return BinOp(op, left, right, span=_span(meta))

    def or_op(self, meta, children) -> BinOp:
        return self._binop("or", meta, children)

    def and_op(self, meta, children) -> BinOp:
        return self._binop("and", meta, children)

    def lt(self, meta, children) -> BinOp:
        return self._binop("<", meta, children)

    def le(self, meta, children) -> BinOp:
        return self._binop("<=", meta, children)

    def gt(self, meta, children) -> BinOp:
        return self._binop(">", meta, children)

    def ge(self, meta, children) -> BinOp:
        return self._binop(">=", meta, children)

    def add(self, meta, children) -> BinOp:
        return self._binop("+", meta, children)

    def sub(self, meta, children) -> BinOp:
        return self._binop("-", meta, children)

    def mul(self, meta, children) -> BinOp:
        return self._binop("*", meta, children)

    def not_op(self, meta, children) -> UnOp:
        return UnOp("not", children[0], span=_span(meta))

    def under(self, meta, children) -> Under:
        return Under(children[0], int(children[1]), span=_span(meta))

    def over(self, meta, children) -> Over:
        return Over(children[0], int(children[1]), span=_span(meta))

    def offset(self, meta, children) -> Offset:
        return Offset(children[0], children[1], span=_span(meta))

    def var(self, meta, children) -> Var:
        return Var(str(children[0]), span=_span(meta))

    def app(self, meta, children) -> App:
        name, args = children
        if len(args) == 1:
            arg = args[0]
        else:
            arg = Pair(tuple(args), span=_span(meta))
        return App(str(name), arg, span=_span(meta))

    def arg_list(self, meta, children) -> List[Expr]:
        return list(children)

    def pair(self, meta, children) -> Pair:
        return Pair(tuple(children), span=_span(meta))

    def int_const(self, meta, children) -> Const:
        return Const(int(children[0]), span=_span(meta))

    def neg_const(self, meta, children) -> Const:
        return Const(-int(children[0]), span=_span(meta))

    def true_const(self, meta, children) -> Const:
        return Const(True, span=_span(meta))

    def false_const(self, meta, children) -> Const:
        return Const(False, span=_span(meta))

    def rational(self, meta, children) -> Fraction:
        if len(children) == 1:
            return Fraction(int(children[0]))
        den = int(children[1])
        if den == 0:
            raise ParseError("zero denominator in rational", _span(meta))
        return Fraction(int(children[0]), den)


# =============================================================================
# Structural validation
# =============================================================================

def _fail(message: str, span: Span) -> None:
    raise ParseError(message, span)


def _validate_param(p: Param, is_output: bool) -> None:
    if p.rate is not None:
        n, phase = p.rate
        if n <= 0:
            _fail("period of {} must be positive".format(p.name), p.span)
        if phase < 0:
            _fail("phase of {} must be nonnegative".format(p.name), p.span)
    if p.due is not None:
        if not is_output:
            _fail("due constraint on input {}".format(p.name), p.span)
        if p.rate is not None and p.due >= p.rate[0]:
            _fail("due {} of {} is not less than its period {}".format(
                p.due, p.name, p.rate[0]), p.span)


def _validate_expr(expr: Expr, known_vars: Set[str],
                   node_names: Set[str]) -> None:
    for e in walk(expr):
        if isinstance(e, Var) and e.name not in known_vars:
            _fail("unknown variable {}".format(e.name), e.span)
        elif isinstance(e, App) and e.node not in node_names:
            _fail("unknown node {}".format(e.node), e.span)
        elif isinstance(e, (Under, Over)) and e.k < 1:
            _fail("rate factor must be at least 1, not {}".format(e.k),
                  e.span)
        elif isinstance(e, Offset) and e.q < 0:
            _fail("negative phase offset {}".format(e.q), e.span)


def _validate_node(nd: NodeDecl, node_names: Set[str]) -> None:
    seen = set()  # type: Set[str]
    for p in nd.params():
        if p.name in seen:
            _fail("duplicate variable {} in node {}".format(p.name, nd.name),
                  p.span)
        seen.add(p.name)
    for p in nd.inputs:
        _validate_param(p, is_output=False)
    for p in nd.outputs:
        _validate_param(p, is_output=True)
    if nd.imported:
        if nd.wcet < 0:
            _fail("negative wcet for node {}".format(nd.name), nd.span)
        return
    if not nd.equations:
        _fail("node {} defines no equation".format(nd.name), nd.span)
    inputs = set(nd.input_names())
    defined = {}  # type: Dict[str, Equation]
    for eq in nd.equations:
        for name in eq.lhs:
            if name in inputs:
                _fail("input {} cannot be defined".format(name), eq.span)
            if name not in seen:
                _fail("undeclared variable {}".format(name), eq.span)
            if name in defined:
                _fail("duplicate definition of {}".format(name), eq.span)
            defined[name] = eq
        _validate_expr(eq.rhs, seen, node_names)
    for p in list(nd.outputs) + list(nd.locals):
        if p.name not in defined:
            _fail("variable {} of node {} is not defined".format(
                p.name, nd.name), p.span)


def validate(nodes: List[NodeDecl], main: Optional[str]) -> Program:
    """
    Checks the structural invariants of a list of node declarations and
    selects the main node.

    Args:
        nodes: declarations, in source order
        main: name of the main node; if ``None``, the last defined node

    Returns:
        a :class:`syncrt.syntax.Program`

    Raises:
        :exc:`syncrt.exceptions.ParseError`
    """
    names = set()  # type: Set[str]
    for nd in nodes:
        if nd.name in names:
            _fail("duplicate node name {}".format(nd.name), nd.span)
        names.add(nd.name)
    for nd in nodes:
        _validate_node(nd, names)
    defined = [nd for nd in nodes if not nd.imported]
    if main is None:
        if not defined:
            raise ParseError("main node not found")
        main = defined[-1].name
    elif main not in {nd.name for nd in defined}:
        raise ParseError("main node not found: {}".format(main))
    return Program(nodes=tuple(nodes), main=main)


# =============================================================================
# Entry points
# =============================================================================

def parse(source: str, main: str = None, filename: str = None) -> Program:
    """
    Parses a program.

    Args:
        source: program text
        main: name of the main node (default: the last defined node)
        filename: used in error messages only

    Returns:
        a :class:`syncrt.syntax.Program`

    Raises:
        :exc:`syncrt.exceptions.ParseError`
    """
    try:
        tree = get_parser().parse(source)
    except UnexpectedCharacters as e:
        raise ParseError("syntax error: unexpected character {!r}".format(
            source[e.pos_in_stream] if e.pos_in_stream is not None else "?"),
            Span(e.line, e.column), filename)
    except UnexpectedToken as e:
        if e.token.type == "$END":
            raise ParseError("syntax error: unexpected end of input",
                             NO_SPAN, filename)
        raise ParseError("syntax error: unexpected {!r}".format(
            str(e.token)), Span(e.line, e.column), filename)
    except UnexpectedEOF:
        raise ParseError("syntax error: unexpected end of input",
                         NO_SPAN, filename)
    except UnexpectedInput as e:
        raise ParseError("syntax error", Span(max(e.line, 0),
                                              max(e.column, 0)), filename)
    try:
        nodes = AstBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, SyncrtError):
            e.orig_exc.filename = filename
            raise e.orig_exc
        raise
    try:
        program = validate(nodes, main)
    except ParseError as e:
        e.filename = filename
        raise
    log.debug("Parsed {} node(s); main node is {}".format(
        len(program.nodes), program.main))
    return program


def read_source_file(filename: str) -> str:
    """
    Reads a UTF-8 text file.

    Raises:
        :exc:`syncrt.exceptions.InputFileError` if it is not UTF-8;
        :exc:`OSError` if it cannot be read
    """
    with open(filename, "rb") as f:
        data = f.read()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise InputFileError(
            "not UTF-8: byte 0x{:02x} at offset {}".format(
                data[e.start], e.start),
            filename=filename)


def sample_program_path(name: str) -> str:
    """
    Path of a sample program shipped with the package, e.g. ``"fcs.mps"``.
    """
    return os.path.join(PROGRAMS_DIR, name)


def read_sample_program(name: str) -> str:
    return read_source_file(sample_program_path(name))
