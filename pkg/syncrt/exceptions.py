#!/usr/bin/env python

"""
syncrt/exceptions.py

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

**syncrt exceptions.**

Compiler rejections derive from :class:`CompileError`; the command-line tool
maps exception classes to exit codes (see :mod:`syncrt.main`).

"""

from typing import List, Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from syncrt.syntax import Span


class SyncrtError(Exception):
    """
    Base class for syncrt errors. Carries an optional source span and file
    name, so messages can be rendered as ``file:line:col: message``.
    """
    def __init__(self, message: str,
                 span: "Span" = None,
                 filename: str = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span
        self.filename = filename

    def location(self) -> str:
        parts = []  # type: List[str]
        if self.filename:
            parts.append(self.filename)
        if self.span is not None and self.span.line > 0:
            parts.append(str(self.span.line))
            parts.append(str(self.span.column))
        return ":".join(parts)

    def __str__(self) -> str:
        where = self.location()
        if where:
            return "{}: {}".format(where, self.message)
        return self.message


# =============================================================================
# Compile-time rejections
# =============================================================================

class CompileError(SyncrtError):
    """
    The program is rejected by the compiler.
    """
    pass


class ParseError(CompileError):
    """
    Syntax error, or a structural problem spotted while building the AST.
    """
    pass


class TypeCheckError(CompileError):
    """
    Type mismatch or arity mismatch.
    """
    pass


class CausalityError(CompileError):
    """
    A variable depends instantaneously on itself.
    """
    def __init__(self, cycle: List[str], span: "Span" = None,
                 filename: str = None) -> None:
        super().__init__(
            "causality cycle: {}".format(" -> ".join(cycle)),
            span=span, filename=filename)
        self.cycle = cycle


class ClockError(CompileError):
    """
    Clock mismatch, or an underconstrained program.
    """
    pass


class InlineError(CompileError):
    """
    Problem while flattening node calls, e.g. recursive instantiation.
    """
    pass


class TaskGraphError(CompileError):
    """
    The flattened program cannot be turned into a task graph.
    """
    pass


class DeadlineError(CompileError):
    """
    A task's deadline word leaves an instance less time than its wcet.
    """
    def __init__(self, message: str, task: str = None,
                 instance: Optional[int] = None, span: "Span" = None,
                 filename: str = None) -> None:
        super().__init__(message, span=span, filename=filename)
        self.task = task
        self.instance = instance


class CommsError(CompileError):
    """
    A precedence cannot be given a communication buffer.
    """
    pass


# =============================================================================
# Other failures
# =============================================================================

class SimulationError(SyncrtError):
    """
    The simulator was asked to do something it cannot do.
    """
    pass


class InputFileError(SyncrtError):
    """
    An input file exists but cannot be decoded.
    """
    pass


class TaskSetFormatError(SyncrtError):
    """
    A task-set file is malformed.
    """
    pass


class ImproperlyConfigured(SyncrtError):
    """
    syncrt is improperly configured; normally due to a bad config file.
    """
    pass


class InternalError(SyncrtError):
    """
    An invariant that earlier phases should guarantee has been broken.
    """
    pass
