#!/usr/bin/env python

"""
syncrt/clocks.py

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

**Strictly periodic clocks and their transformations.**

A strictly periodic clock ``(n, p)`` ticks at ``n*p, n*p + n, n*p + 2n, ...``;
we store the period ``n`` and the phase ``n*p`` as exact rationals.

"""

from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
from typing import List, Sequence, Union

from syncrt.syntax import format_fraction

Number = Union[int, Fraction]


@dataclass(frozen=True)
class PClock(object):
    """
    Strictly periodic clock: ``period`` > 0, ``phase`` >= 0, both in source
    time units (or in ticks, once scaled).
    """
    period: Fraction
    phase: Fraction

    def __init__(self, period: Number, phase: Number = 0) -> None:
        # Frozen dataclass: go through object.__setattr__.
        object.__setattr__(self, "period", Fraction(period))
        object.__setattr__(self, "phase", Fraction(phase))

    @classmethod
    def from_rate(cls, n: Number, p: Number) -> "PClock":
        """
        Clock of a ``rate (n, p)`` declaration.
        """
        return cls(n, Fraction(n) * Fraction(p))

    @property
    def relative_phase(self) -> Fraction:
        return self.phase / self.period

    def tag(self, i: int) -> Fraction:
        """
        Date of the ``i``-th activation.
        """
        return self.phase + i * self.period

    def scaled(self, tick: Fraction) -> "PClock":
        return PClock(self.period / tick, self.phase / tick)

    def __str__(self) -> str:
        return "({},{})".format(format_fraction(self.period),
                                format_fraction(self.relative_phase))


@unique
class ClockOpKind(Enum):
    each = 1  # period multiplied
    times = 2  # period divided
    phase = 3  # phase shifted


@dataclass(frozen=True)
class ClockOp(object):
    kind: ClockOpKind
    amount: Fraction

    @classmethod
    def each(cls, k: int) -> "ClockOp":
        return cls(ClockOpKind.each, Fraction(k))

    @classmethod
    def times(cls, k: int) -> "ClockOp":
        return cls(ClockOpKind.times, Fraction(k))

    @classmethod
    def phase(cls, q: Number) -> "ClockOp":
        return cls(ClockOpKind.phase, Fraction(q))


def apply_transform(c: PClock, op: ClockOp) -> PClock:
    """
    Applies a periodic clock transformation:

    - ``Each k``: ``(k * period, phase)``;
    - ``Times k``: ``(period / k, phase)``;
    - ``Phase q``: ``(period, phase + q * period)``.
    """
    if op.kind == ClockOpKind.each:
        assert op.amount >= 1, "Bad Each factor"
        return PClock(c.period * op.amount, c.phase)
    if op.kind == ClockOpKind.times:
        assert op.amount >= 1, "Bad Times factor"
        return PClock(c.period / op.amount, c.phase)
    return PClock(c.period, c.phase + op.amount * c.period)


def invert_transform(c: PClock, op: ClockOp) -> PClock:
    """
    Returns the clock ``x`` such that ``apply_transform(x, op) == c``.
    The phase of the result may be negative; callers check.
    """
    if op.kind == ClockOpKind.each:
        return PClock(c.period / op.amount, c.phase)
    if op.kind == ClockOpKind.times:
        return PClock(c.period * op.amount, c.phase)
    return PClock(c.period, c.phase - op.amount * c.period)


def format_clock_tuple(clocks: Sequence[PClock]) -> str:
    """
    Renders a tuple of clocks: a single clock alone, several as a product in
    parentheses, e.g. ``((120,0)*(10,0))``.
    """
    if len(clocks) == 1:
        return str(clocks[0])
    return "(" + "*".join(str(c) for c in clocks) + ")"


def format_clock_signature(inputs: List[PClock],
                           outputs: List[PClock]) -> str:
    """
    E.g. ``((120,0)*(10,0)*(10,0)*(10,0))->(40,0)``.
    """
    return "{}->{}".format(format_clock_tuple(inputs),
                           format_clock_tuple(outputs))
