#!/usr/bin/env python

"""
syncrt/properties.py

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

**Property suites run by** ``syncrt check``.

Every suite returns a list of human-readable violations; an empty list means
the property holds. Suites that cannot apply (no interpreter for a task set
loaded from JSON, a simulation with deadline misses) are reported as
skipped.

"""

from collections import OrderedDict
import logging
import random
from typing import Dict, List, Optional, Tuple

from cardinal_pythonlib.reprfunc import auto_repr

from syncrt.comms import BufferPlan
from syncrt.compiler import CompiledProgram, compile_source
from syncrt.constants import DEFAULT_PERIOD_UNIT, POLICY_EDF_DWORD
from syncrt.deadlines import (
    diffops_word,
    EncodedTaskSet,
    encoding_soundness_violations,
    oracle_mismatches,
)
from syncrt.exceptions import CompileError, InternalError
from syncrt.interp import Evaluation
from syncrt.maths import lcm_all
from syncrt.precedence import g_ops, OpsList, pword, transform_period
from syncrt.randomprog import random_ops, random_program
from syncrt.sim import (
    check_semantics,
    edf_violations,
    execution_violations,
    idle_violations,
    precedence_violations,
    release_violations as trace_release_violations,
    SimConfig,
    simulate,
    SimTrace,
)
from syncrt.taskgraph import release_violations, TaskKind

log = logging.getLogger(__name__)


# =============================================================================
# Results
# =============================================================================

class SuiteResult(object):
    """
    Outcome of one suite on one program.
    """
    def __init__(self, name: str, violations: List[str] = None,
                 skipped: str = None) -> None:
        self.name = name
        self.violations = violations or []
        self.skipped = skipped

    def __repr__(self) -> str:
        return auto_repr(self)

    def __str__(self) -> str:
        if self.skipped:
            return "{}: skipped ({})".format(self.name, self.skipped)
        if not self.violations:
            return "{}: ok".format(self.name)
        return "{}: {} violation(s), first: {}".format(
            self.name, len(self.violations), self.violations[0])

    @property
    def ok(self) -> bool:
        return not self.violations


# =============================================================================
# Static suites
# =============================================================================

def encoding_soundness(ts: EncodedTaskSet) -> List[str]:
    return encoding_soundness_violations(ts, hyperperiods=3)


def oracle_equivalence(ts: EncodedTaskSet,
                       horizon: int = None) -> List[str]:
    return oracle_mismatches(ts, horizon)


def word_length_bound(ts: EncodedTaskSet) -> List[str]:
    """
    Every word length divides the lcm of all periods.
    """
    h = lcm_all(t.T for t in ts.tasks)
    return ["|w_{}| = {} does not divide {}".format(t.name, len(t.word), h)
            for t in ts.tasks if h % len(t.word) != 0]


def release_compatibility(ts: EncodedTaskSet) -> List[str]:
    """
    No consumer instance is released before the producer instance it
    depends on.
    """
    return release_violations(ts)


def consistent_periods(ops: OpsList) -> Tuple[int, int]:
    """
    The smallest integer producer and consumer periods that ``ops`` relates.
    """
    ratio = transform_period(1, ops)
    return ratio.denominator, ratio.numerator


def diffops_violations(ops: OpsList) -> List[str]:
    """
    Checks that ``g(n) T_j - n T_i`` repeats with period ``pword(ops)`` over
    three periods, for the periods of :func:`consistent_periods`.
    """
    t_i, t_j = consistent_periods(ops)
    period = pword(ops)
    try:
        diffops_word(ops, t_i, t_j)
    except InternalError as e:
        return [str(e)]
    for n in range(3 * period):
        a = g_ops(ops, n) * t_j - n * t_i
        b = g_ops(ops, n + period) * t_j - (n + period) * t_i
        if a != b:
            return ["{}: entry {} differs one period later".format(
                [str(op) for op in ops], n)]
    return []


def diffops_periodicity(seed: int = 0, trials: int = 1000,
                        depth: int = 3) -> List[str]:
    """
    :func:`diffops_violations` on random delay-free operator lists.
    """
    rng = random.Random(seed)
    problems = []  # type: List[str]
    for _ in range(trials):
        problems.extend(diffops_violations(random_ops(rng, depth)))
    return problems


# =============================================================================
# Trace suites
# =============================================================================

def edf_invariants(trace: SimTrace, ts: EncodedTaskSet) -> List[str]:
    return (edf_violations(trace) + idle_violations(trace) +
            trace_release_violations(trace, ts) +
            execution_violations(trace, ts))


def precedence_respect(trace: SimTrace, ts: EncodedTaskSet) -> List[str]:
    return precedence_violations(trace, ts)


def functional_equivalence(trace: SimTrace, oracle: Evaluation,
                           ts: EncodedTaskSet) -> List[str]:
    return [str(m) for m in check_semantics(trace, oracle, ts)]


def fault_candidates(ts: EncodedTaskSet) -> List[Tuple[BufferPlan, int]]:
    """
    ``(buffer, bit)`` pairs whose inversion must be observable: a write of
    an instance-dependent value to a task whose inputs are checked.
    """
    result = []  # type: List[Tuple[BufferPlan, int]]
    for plan in ts.buffers:
        producer = ts.task(plan.producer)
        consumer = ts.task(plan.consumer)
        if producer.kind not in (TaskKind.sensor, TaskKind.computation):
            continue
        if consumer.kind not in (TaskKind.computation, TaskKind.actuator):
            continue
        for i, bit in enumerate(plan.write_mask):
            if bit:
                result.append((plan, i))
                break
    return result


def fault_injection(ts: EncodedTaskSet, oracle: Evaluation, horizon: int,
                    rng: random.Random,
                    policy: str = POLICY_EDF_DWORD) -> Optional[List[str]]:
    """
    Drops one consumed write and checks that the semantic comparison
    notices.

    Returns:
        ``None`` if no buffer qualifies; otherwise violations (empty if the
        fault was detected)
    """
    candidates = fault_candidates(ts)
    if not candidates:
        return None
    plan, bit = rng.choice(candidates)
    faulty = [p.with_flipped_bit(bit) if p.name == plan.name else p
              for p in ts.buffers]
    trace = simulate(ts, faulty, SimConfig(horizon=horizon, policy=policy))
    mismatches = check_semantics(trace, oracle, ts)
    log.debug("Fault on bit {} of {}: {} mismatches".format(
        bit, plan.name, len(mismatches)))
    if mismatches:
        return []
    return ["dropping write {} of {} went unnoticed".format(bit, plan.name)]


# =============================================================================
# All suites
# =============================================================================

def check_taskset(ts: EncodedTaskSet,
                  oracle: Evaluation = None,
                  horizon: int = None,
                  policy: str = POLICY_EDF_DWORD,
                  seed: int = 0) -> Dict[str, SuiteResult]:
    """
    Runs every per-program suite.

    Args:
        ts: the task set, with buffers
        oracle: the reference interpreter's result over ``horizon``; without
            it the functional suites are skipped
        horizon: simulation horizon in ticks (default
            :meth:`EncodedTaskSet.default_horizon`)
        policy: scheduling policy
        seed: seed for the fault-injection choice
    """
    if horizon is None:
        horizon = ts.default_horizon()
    results = OrderedDict()  # type: Dict[str, SuiteResult]

    def record(name: str, violations: List[str] = None,
               skipped: str = None) -> None:
        results[name] = SuiteResult(name, violations, skipped)

    record("encoding soundness", encoding_soundness(ts))
    record("oracle equivalence", oracle_equivalence(ts, horizon))
    record("word-length bound", word_length_bound(ts))
    record("release compatibility", release_compatibility(ts))
    trace = simulate(ts, ts.buffers, SimConfig(horizon=horizon, policy=policy))
    record("EDF invariants", edf_invariants(trace, ts))
    if trace.misses:
        reason = "{} deadline misses".format(len(trace.misses))
        record("precedence respect", skipped=reason)
        record("functional equivalence", skipped=reason)
        record("fault injection", skipped=reason)
        return results
    record("precedence respect", precedence_respect(trace, ts))
    if oracle is None:
        record("functional equivalence", skipped="no source program")
        record("fault injection", skipped="no source program")
        return results
    functional = functional_equivalence(trace, oracle, ts)
    record("functional equivalence", functional)
    if functional:
        record("fault injection", skipped="semantics already differ")
        return results
    faults = fault_injection(ts, oracle, horizon, random.Random(seed), policy)
    if faults is None:
        record("fault injection", skipped="no observable buffer")
    else:
        record("fault injection", faults)
    return results


def check_program(compiled: CompiledProgram, horizon: int = None,
                  policy: str = POLICY_EDF_DWORD,
                  seed: int = 0) -> Dict[str, SuiteResult]:
    ts = compiled.taskset
    if horizon is None:
        horizon = ts.default_horizon()
    return check_taskset(ts, compiled.evaluate(horizon), horizon, policy,
                         seed)


def check_random_programs(count: int, seed: int = 0,
                          config=None) -> Dict[str, SuiteResult]:
    """
    Compiles ``count`` random programs and runs the suites on each,
    merging violations per suite (each prefixed with the program name).
    Also runs :func:`diffops_periodicity`.

    A random program the compiler rejects counts as a violation of its own
    suite, ``random compilation``.
    """
    merged = OrderedDict()  # type: Dict[str, SuiteResult]

    def merge(name: str, program: str, violations: List[str]) -> None:
        result = merged.setdefault(name, SuiteResult(name))
        result.violations.extend("{}: {}".format(program, v)
                                 for v in violations)

    period_unit = (config.period_unit if config is not None
                   else DEFAULT_PERIOD_UNIT)
    for k in range(count):
        rp = random_program(seed + k, period_unit=period_unit)
        try:
            compiled = compile_source(rp.source, config=config,
                                      filename="<{}>".format(rp.name))
        except CompileError as e:
            merge("random compilation", rp.name, [str(e)])
            continue
        merge("random compilation", rp.name, [])
        for name, result in check_program(compiled, seed=seed + k).items():
            merge(name, rp.name, result.violations)
    merged["diffops periodicity"] = SuiteResult(
        "diffops periodicity", diffops_periodicity(seed))
    return merged
