#!/usr/bin/env python

"""
syncrt/precedence.py

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

**Extended precedences: operator lists on task-graph edges and the instance
function they induce.**

An edge ``A -ops-> B`` carries the rate-transition operators met on the data
path from producer ``A`` to consumer ``B``, in application order (head
first). Instance ``n`` of ``A`` precedes instance ``g_ops(n)`` of ``B``:

.. code-block:: none

    g_[]            (n) = n
    g_(*^k :: ops)  (n) = g_ops(k * n)
    g_(/^k :: ops)  (n) = g_ops(ceil(n / k))
    g_(~>q :: ops)  (n) = g_ops(n)
    g_(fby :: ops)  (n) = g_ops(n + 1)

"""

from dataclasses import dataclass
from enum import Enum, unique
from fractions import Fraction
import re
from math import gcd
from typing import Optional, Sequence, Tuple, Union

from syncrt.maths import ceil_div
from syncrt.syntax import format_fraction


@unique
class PrecOpKind(Enum):
    under = 1
    over = 2
    offset = 3
    delay = 4


@dataclass(frozen=True)
class PrecOp(object):
    """
    One operator of an extended precedence. ``amount`` is ``k`` for
    under/over-sampling, ``q`` for offsets, unused for delays.
    """
    kind: PrecOpKind
    amount: Union[int, Fraction] = 0

    @classmethod
    def under(cls, k: int) -> "PrecOp":
        assert k >= 1, "Bad undersampling factor"
        return cls(PrecOpKind.under, k)

    @classmethod
    def over(cls, k: int) -> "PrecOp":
        assert k >= 1, "Bad oversampling factor"
        return cls(PrecOpKind.over, k)

    @classmethod
    def offset(cls, q: Union[int, Fraction]) -> "PrecOp":
        return cls(PrecOpKind.offset, Fraction(q))

    @classmethod
    def delay(cls) -> "PrecOp":
        return cls(PrecOpKind.delay)

    @property
    def is_delay(self) -> bool:
        return self.kind == PrecOpKind.delay

    def __str__(self) -> str:
        if self.kind == PrecOpKind.under:
            return "/^{}".format(self.amount)
        if self.kind == PrecOpKind.over:
            return "*^{}".format(self.amount)
        if self.kind == PrecOpKind.offset:
            return "~>{}".format(format_fraction(self.amount))
        return "fby"


OpsList = Tuple[PrecOp, ...]

_OP_REGEX = re.compile(r"^(/\^|\*\^|~>)(\d+(?:/\d+)?)$")


def parse_op(text: str) -> PrecOp:
    """
    Inverse of ``str(op)``, e.g. ``"/^12"``, ``"*^3"``, ``"~>1/2"``,
    ``"fby"``.

    Raises:
        :exc:`ValueError`
    """
    if text == "fby":
        return PrecOp.delay()
    m = _OP_REGEX.match(text)
    if not m:
        raise ValueError("Bad precedence operator: {!r}".format(text))
    symbol, amount = m.groups()
    if symbol == "/^":
        return PrecOp.under(int(amount))
    if symbol == "*^":
        return PrecOp.over(int(amount))
    return PrecOp.offset(Fraction(amount))


def format_ops(ops: Sequence[PrecOp]) -> str:
    """
    Dot-separated, e.g. ``fby.*^3``; empty string for no operator.
    """
    return ".".join(str(op) for op in ops)


def has_delay(ops: Sequence[PrecOp]) -> bool:
    return any(op.is_delay for op in ops)


def has_offset(ops: Sequence[PrecOp]) -> bool:
    return any(op.kind == PrecOpKind.offset for op in ops)


def delay_count(ops: Sequence[PrecOp]) -> int:
    return sum(1 for op in ops if op.is_delay)


def strip_delays(ops: Sequence[PrecOp]) -> OpsList:
    return tuple(op for op in ops if not op.is_delay)


def over_before_delay(ops: Sequence[PrecOp]) -> Optional[int]:
    """
    Position of an oversampling that comes strictly before the first delay,
    or ``None``.
    """
    for i, op in enumerate(ops):
        if op.is_delay:
            return None
        if op.kind == PrecOpKind.over and has_delay(ops[i + 1:]):
            return i
    return None


# =============================================================================
# Instance function and its periodicity
# =============================================================================

def g_ops(ops: Sequence[PrecOp], n: int) -> int:
    """
    The consumer instance that producer instance ``n`` precedes.
    """
    for op in ops:
        if op.kind == PrecOpKind.over:
            n = op.amount * n
        elif op.kind == PrecOpKind.under:
            n = ceil_div(n, op.amount)
        elif op.kind == PrecOpKind.delay:
            n += 1
    return n


def pword(ops: Sequence[PrecOp]) -> int:
    """
    A period of ``g_ops`` increments: ``g(n + P) - g(n)`` does not depend on
    ``n``. Computed from the tail of the list:

    - ``P([]) = 1``
    - ``P(*^k :: ops) = P(ops) / gcd(P(ops), k)``
    - ``P(/^k :: ops) = k * P(ops)``
    - ``P(~>q :: ops) = P(ops)``

    Delays do not change it.
    """
    p = 1
    for op in reversed(list(ops)):
        if op.kind == PrecOpKind.over:
            p = p // gcd(p, op.amount)
        elif op.kind == PrecOpKind.under:
            p = op.amount * p
    return p


def qshift(ops: Sequence[PrecOp]) -> int:
    """
    Consumer instances advanced per :func:`pword` producer instances.
    """
    return g_ops(ops, pword(ops)) - g_ops(ops, 0)


def transform_period(period: Union[int, Fraction],
                     ops: Sequence[PrecOp]) -> Fraction:
    """
    The consumer period implied by ``ops`` from a producer period.
    """
    p = Fraction(period)
    for op in ops:
        if op.kind == PrecOpKind.under:
            p *= op.amount
        elif op.kind == PrecOpKind.over:
            p /= op.amount
    return p


def consumed_instance(ops: Sequence[PrecOp], m: int) -> int:
    """
    The producer instance whose value consumer instance ``m`` reads:
    ``max {n : g_ops(n) <= m}``, or -1 if no producer instance qualifies
    (the initial value of a ``fby`` is read).

    Computed by walking the operators backwards from the consumer.
    """
    n = m
    for op in reversed(list(ops)):
        if n < 0:
            return -1
        if op.kind == PrecOpKind.under:
            n = op.amount * n
        elif op.kind == PrecOpKind.over:
            n = n // op.amount
        elif op.kind == PrecOpKind.delay:
            n -= 1
    return n if n >= 0 else -1


def write_mask(ops: Sequence[PrecOp]) -> Tuple[bool, ...]:
    """
    Producer instances whose value is consumed: ``g(n) != g(n + 1)``, over
    one period of the delay-stripped operator list.
    """
    period = pword(strip_delays(ops))
    return tuple(g_ops(ops, n) != g_ops(ops, n + 1) for n in range(period))
