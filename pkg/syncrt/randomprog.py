#!/usr/bin/env python

"""
syncrt/randomprog.py

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

**Seeded random programs and operator lists, for the property suites.**

Each random program has one sensor ``i`` and up to
:data:`syncrt.constants.MAX_RANDOM_IMPORTED_NODES` imported nodes, each
applied once. Every application gets a period from
:data:`syncrt.constants.RANDOM_PERIOD_FACTORS` times a period unit, and its
arguments are resampled to that clock:

- rate changes use at most two operators (``*^a`` then ``/^b``);
- the first argument may be delayed (``0 fby x``, before any rate change)
  or shifted by half a period (``~> 1/2``);
- a second argument is either an earlier flow, brought to the same phase by
  an offset below one period, or a delayed feedback from a flow of the same
  phase (possibly itself);
- flows nobody reads become outputs, with a ``due`` of at least 3/4 of
  their period and below it.

For example (seed-dependent):

.. code-block:: none

    imported node N0(a: int) returns (o: int) wcet 2;
    imported node N1(a: int; b: int) returns (o: int) wcet 1;

    node R7 (i: int rate (40, 0)) returns (v1: int due 53)
    var v0: int;
    let
      v0 = N0(i/^2);
      v1 = N1(v0 ~> 1/2, (0 fby v1));
    tel

"""

from fractions import Fraction
import logging
from math import gcd
import random
from typing import List, Tuple

from cardinal_pythonlib.reprfunc import auto_repr

from syncrt.constants import (
    DEFAULT_PERIOD_UNIT,
    MAX_RANDOM_IMPORTED_NODES,
    RANDOM_PERIOD_FACTORS,
)
from syncrt.maths import ceil_div
from syncrt.precedence import OpsList, PrecOp
from syncrt.syntax import format_fraction

log = logging.getLogger(__name__)

SENSOR = "i"

P_OFFSET = 0.25
P_LEADING_FBY = 0.2
P_FEEDBACK = 0.3
P_BINARY = 0.5


# =============================================================================
# Operator lists
# =============================================================================

def random_ops(rng: random.Random, depth: int,
               max_factor: int = 4) -> OpsList:
    """
    A delay-free operator list of at most ``depth`` rate changes, with an
    occasional integer offset.
    """
    ops = []  # type: List[PrecOp]
    for _ in range(rng.randint(0, depth)):
        k = rng.randint(2, max_factor)
        if rng.random() < 0.5:
            ops.append(PrecOp.under(k))
        else:
            ops.append(PrecOp.over(k))
    if ops and rng.random() < 0.2:
        ops.insert(rng.randrange(len(ops) + 1), PrecOp.offset(1))
    return tuple(ops)


def rate_change(src_period: int, dst_period: int) -> str:
    """
    Source text resampling a flow of period ``src_period`` to
    ``dst_period``: ``*^a`` then ``/^b``, each omitted when 1.
    """
    g = gcd(src_period, dst_period)
    text = ""
    if src_period // g > 1:
        text += "*^{}".format(src_period // g)
    if dst_period // g > 1:
        text += "/^{}".format(dst_period // g)
    return text


def _offset_text(q: Fraction) -> str:
    if q == 0:
        return ""
    return " ~> {}".format(format_fraction(q))


# =============================================================================
# Programs
# =============================================================================

class RandomApplication(object):
    """
    One planned application of an imported node.
    """
    def __init__(self, index: int, arity: int, wcet: int,
                 period: int, phase: Fraction) -> None:
        self.index = index
        self.arity = arity
        self.wcet = wcet
        self.period = period
        self.phase = phase
        self.args = []  # type: List[str]
        self.reads = []  # type: List[str]

    def __repr__(self) -> str:
        return auto_repr(self)

    @property
    def node(self) -> str:
        return "N{}".format(self.index)

    @property
    def var(self) -> str:
        return "v{}".format(self.index)

    def declaration(self) -> str:
        params = "; ".join("{}: int".format(name)
                           for name in "ab"[:self.arity])
        return "imported node {}({}) returns (o: int) wcet {};".format(
            self.node, params, self.wcet)

    def equation(self) -> str:
        return "{} = {}({});".format(self.var, self.node, ", ".join(self.args))


class RandomProgram(object):
    """
    Source text of a generated program, with the plan it came from.
    """
    def __init__(self, name: str, seed: int, sensor_period: int,
                 apps: List[RandomApplication],
                 dues: List[Tuple[str, int]]) -> None:
        self.name = name
        self.seed = seed
        self.sensor_period = sensor_period
        self.apps = apps
        self.dues = dues

    def __repr__(self) -> str:
        return auto_repr(self)

    @property
    def outputs(self) -> List[str]:
        return [name for name, _ in self.dues]

    @property
    def source(self) -> str:
        lines = [app.declaration() for app in self.apps]
        lines.append("")
        outputs = "; ".join("{}: int due {}".format(name, due)
                            for name, due in self.dues)
        lines.append("node {} ({}: int rate ({}, 0)) returns ({})".format(
            self.name, SENSOR, self.sensor_period, outputs))
        local_vars = [app.var for app in self.apps
                      if app.var not in self.outputs]
        if local_vars:
            lines.append("var {}: int;".format(", ".join(local_vars)))
        lines.append("let")
        for app in self.apps:
            lines.append("  " + app.equation())
        lines.append("tel")
        return "\n".join(lines) + "\n"


class _Generator(object):
    def __init__(self, seed: int, period_unit: int,
                 max_nodes: int) -> None:
        self.seed = seed
        self.rng = random.Random(seed)
        self.unit = period_unit
        self.max_nodes = max_nodes
        self.sensor_period = self.period()
        self.apps = []  # type: List[RandomApplication]

    def period(self) -> int:
        return self.rng.choice(RANDOM_PERIOD_FACTORS) * self.unit

    def clock_of(self, name: str) -> Tuple[int, Fraction]:
        if name == SENSOR:
            return self.sensor_period, Fraction(0)
        app = self.apps[int(name[1:])]
        return app.period, app.phase

    def first_argument(self, app: RandomApplication,
                       src: str, shifted: bool) -> str:
        src_period, _ = self.clock_of(src)
        text = src
        if not shifted and self.rng.random() < P_LEADING_FBY:
            text = "(0 fby {})".format(src)
        text += rate_change(src_period, app.period)
        if shifted:
            text += _offset_text(Fraction(1, 2))
        app.reads.append(src)
        return text

    def second_argument(self, app: RandomApplication) -> str:
        j = app.index
        feedback = [a for a in self.apps[j:] if a.phase == app.phase]
        if feedback and self.rng.random() < P_FEEDBACK:
            src = self.rng.choice(feedback)
            return "(0 fby {}){}".format(
                src.var, rate_change(src.period, app.period))
        candidates = []  # type: List[Tuple[str, Fraction]]
        for name in [SENSOR] + [a.var for a in self.apps[:j]]:
            period, phase = self.clock_of(name)
            q = (app.phase - phase) / app.period
            if 0 <= q < 1:
                candidates.append((name, q))
        if not candidates:
            return app.args[0]
        src, q = self.rng.choice(candidates)
        app.reads.append(src)
        return src + rate_change(self.clock_of(src)[0],
                                 app.period) + _offset_text(q)

    def run(self) -> RandomProgram:
        count = self.rng.randint(1, self.max_nodes)
        sources = []  # type: List[Tuple[str, bool]]
        for j in range(count):
            src = self.rng.choice(
                [SENSOR] + ["v{}".format(k) for k in range(j)])
            _, src_phase = self.clock_of(src)
            period = self.period()
            shifted = self.rng.random() < P_OFFSET
            phase = src_phase + (Fraction(period, 2) if shifted else 0)
            arity = 2 if self.rng.random() < P_BINARY else 1
            self.apps.append(RandomApplication(
                j, arity, self.rng.randint(1, 2), period, phase))
            sources.append((src, shifted))
        for app, (src, shifted) in zip(self.apps, sources):
            app.args.append(self.first_argument(app, src, shifted))
        for app in self.apps:
            if app.arity == 2:
                app.args.append(self.second_argument(app))
        read = {name for app in self.apps for name in app.reads}
        dues = []  # type: List[Tuple[str, int]]
        for app in self.apps:
            if app.var not in read:
                dues.append((app.var, self.rng.randint(
                    ceil_div(3 * app.period, 4), app.period - 1)))
        program = RandomProgram("R{}".format(self.seed), self.seed,
                                self.sensor_period, self.apps, dues)
        log.debug("Random program {}:\n{}".format(program.name,
                                                  program.source))
        return program


def random_program(seed: int,
                   period_unit: int = DEFAULT_PERIOD_UNIT,
                   max_nodes: int = MAX_RANDOM_IMPORTED_NODES
                   ) -> RandomProgram:
    """
    Generates one program; the same seed always gives the same text.

    Args:
        seed: random seed
        period_unit: multiplied by the period factors
        max_nodes: maximum number of imported nodes (at least 1)
    """
    assert max_nodes >= 1, "Need at least one imported node"
    return _Generator(seed, period_unit, max_nodes).run()


def random_programs(count: int, seed: int = 0,
                    period_unit: int = DEFAULT_PERIOD_UNIT
                    ) -> List[RandomProgram]:
    """
    ``count`` programs with consecutive seeds from ``seed``.
    """
    return [random_program(seed + k, period_unit) for k in range(count)]
