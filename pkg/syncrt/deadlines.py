#!/usr/bin/env python

"""
syncrt/deadlines.py

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

**Deadline words, and the encoding of extended precedences into per-instance
relative deadlines.**

A deadline word ``(u)^w`` repeats the finite pattern ``u`` forever; instance
``n`` of a task with word ``w`` gets the relative deadline ``w[n mod |u|]``.
Deadline words are computed backwards over the delay-free task graph so that
EDF on the resulting *independent* tasks respects every precedence:

.. code-block:: none

    w_i <= w_j[g_ops(n)] + g_ops(n).T_j - n.T_i - C_j + r_j - r_i

"""

from dataclasses import dataclass
import logging
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from cardinal_pythonlib.reprfunc import auto_repr
import networkx as nx

from syncrt.exceptions import DeadlineError, InternalError
from syncrt.maths import ceil_div, lcm, lcm_all
from syncrt.precedence import (  # noqa
    g_ops,
    has_delay,
    OpsList,
    pword,
    qshift,
)
from syncrt.taskgraph import Edge, InitValue, TaskGraph, TaskKind

log = logging.getLogger(__name__)


# =============================================================================
# Deadline words
# =============================================================================

def _primitive(pattern: Tuple[int, ...]) -> Tuple[int, ...]:
    size = len(pattern)
    for p in range(1, size + 1):
        if size % p == 0 and pattern == pattern[:p] * (size // p):
            return pattern[:p]
    return pattern


@dataclass(frozen=True)
class DWord(object):
    """
    An ultimately periodic word of relative deadlines, always stored as its
    primitive repeating block, so equal words compare equal.
    """
    pattern: Tuple[int, ...]

    def __post_init__(self) -> None:
        assert len(self.pattern) > 0, "Empty deadline word"
        object.__setattr__(self, "pattern",
                           _primitive(tuple(int(d) for d in self.pattern)))

    @classmethod
    def constant(cls, d: int) -> "DWord":
        return cls((d, ))

    def __len__(self) -> int:
        return len(self.pattern)

    def __getitem__(self, n: int) -> int:
        return self.pattern[n % len(self.pattern)]

    def __str__(self) -> str:
        return "({})^w".format(".".join(str(d) for d in self.pattern))

    def minimum(self) -> int:
        return min(self.pattern)

    def unfold(self, length: int) -> List[int]:
        return [self[n] for n in range(length)]


def dword_index(w: DWord, n: int) -> int:
    """
    ``w[n mod |w|]``.
    """
    return w[n]


def dword_min(w1: DWord, w2: DWord) -> DWord:
    """
    Point-wise minimum.
    """
    size = lcm(len(w1), len(w2))
    return DWord(tuple(min(w1[n], w2[n]) for n in range(size)))


def dword_add(w1: DWord, w2: DWord) -> DWord:
    """
    Point-wise sum.
    """
    size = lcm(len(w1), len(w2))
    return DWord(tuple(w1[n] + w2[n] for n in range(size)))


def dword_shift(w: DWord, k: int) -> DWord:
    """
    Adds ``k`` to every deadline.
    """
    return DWord(tuple(d + k for d in w.pattern))


def diffops_word(ops: OpsList, t_i: int, t_j: int) -> DWord:
    """
    The word ``g_ops(n) * T_j - n * T_i``, of length ``pword(ops)``.

    Raises:
        :exc:`syncrt.exceptions.InternalError` if the entries are not
        periodic with period ``pword(ops)``
    """
    assert not has_delay(ops), "diffops of a delayed precedence"
    period = pword(ops)

    def entry(n: int) -> int:
        return g_ops(ops, n) * t_j - n * t_i

    pattern = tuple(entry(n) for n in range(period))
    for n in range(period):
        if entry(n + period) != pattern[n]:
            raise InternalError(
                "diffops of {} is not periodic at {}".format(
                    [str(op) for op in ops], n))
    return DWord(pattern)


# =============================================================================
# Encoded task set
# =============================================================================

class EncodedTask(object):
    """
    An independent real-time task ``(T, C, r, w)``, all in ticks.
    """
    def __init__(self,
                 name: str,
                 kind: TaskKind,
                 T: int,
                 C: int,
                 r: int,
                 word: DWord,
                 due: int = None,
                 inputs: Sequence[str] = (),
                 outputs: Sequence[str] = (),
                 node: str = None,
                 value: InitValue = None,
                 order: int = 0) -> None:
        assert T > 0, "Bad period for {}".format(name)
        self.name = name
        self.kind = kind
        self.T = T
        self.C = C
        self.r = r
        self.word = word
        self.due = due
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self.node = node
        self.value = value
        self.order = order

    def __repr__(self) -> str:
        return auto_repr(self)

    def release(self, n: int) -> int:
        return self.r + n * self.T

    def deadline(self, n: int) -> int:
        return dynamic_deadline(self, n)


class EncodedTaskSet(object):
    """
    The compiler's output: independent tasks with deadline words, the
    precedences they encode and the communication buffers (see
    :mod:`syncrt.comms`).
    """
    def __init__(self, name: str, tick, tasks: List[EncodedTask],
                 edges: List[Edge], buffers: list = None) -> None:
        self.name = name
        self.tick = tick
        self.tasks = tasks
        self.edges = edges
        self.buffers = buffers or []
        self._by_name = {t.name: t for t in tasks}

    def __repr__(self) -> str:
        return auto_repr(self)

    def task(self, name: str) -> EncodedTask:
        return self._by_name[name]

    @property
    def hyperperiod(self) -> int:
        return hyperperiod(self.tasks)

    @property
    def max_release(self) -> int:
        return max((t.r for t in self.tasks), default=0)

    def default_horizon(self) -> int:
        """
        ``max r + 2 H``, rounded up to a whole number of hyperperiods.
        """
        h = self.hyperperiod
        return ceil_div(self.max_release + 2 * h, h) * h

    def words(self) -> Dict[str, DWord]:
        return {t.name: t.word for t in self.tasks}

    def delay_free_edges(self) -> List[Edge]:
        return [e for e in self.edges if not has_delay(e.ops)]


def hyperperiod(tasks: Iterable) -> int:
    """
    lcm of the periods of some tasks; 1 for none.
    """
    return lcm_all(t.T for t in tasks)


def dynamic_deadline(task: EncodedTask, n: int) -> int:
    """
    Absolute deadline of instance ``n``: ``r + n * T + w[n]``.
    """
    return task.r + task.T * n + dword_index(task.word, n)


# =============================================================================
# Deadline calculus
# =============================================================================

def constraint_word(edge: Edge, w_j: DWord, t_i, t_j) -> DWord:
    """
    The bound that the precedence ``edge`` (from task ``t_i`` to task
    ``t_j``, whose word is ``w_j``) puts on the word of ``t_i``:

    .. code-block:: none

        cstr[n] = w_j[g(n)] + g(n).T_j - n.T_i - C_j + r_j - r_i

    Since ``g(n + P) = g(n) + Q`` with ``P = pword`` and ``Q = qshift``, the
    successor part repeats after ``L = P.|w_j| / gcd(Q, |w_j|)`` instances;
    the rest is :func:`diffops_word` shifted by ``r_j - r_i - C_j``.
    """
    ops = edge.ops
    assert not has_delay(ops), "constraint of a delayed precedence"
    length = pword(ops) * len(w_j) // gcd(qshift(ops), len(w_j))
    successor = DWord(tuple(dword_index(w_j, g_ops(ops, n))
                            for n in range(length)))
    word = dword_shift(
        dword_add(successor, diffops_word(ops, t_i.T, t_j.T)),
        t_j.r - t_i.r - t_j.C)
    log.debug("cstr({}, {}) = {}".format(t_i.name, t_j.name, word))
    return word


def backward_order(g: TaskGraph) -> List[str]:
    """
    Tasks with all their delay-free successors first; ties by declaration
    order.
    """
    position = {t.name: i for i, t in enumerate(g.tasks)}
    reverse = g.to_networkx(delay_free=True).reverse(copy=True)
    return list(nx.lexicographical_topological_sort(
        reverse, key=lambda name: position[name]))


def compute_deadline_words(g: TaskGraph) -> EncodedTaskSet:
    """
    Computes a deadline word for every task of a graph with real-time
    attributes.

    Words start at ``(due)^w`` for constrained actuators and ``(T)^w``
    otherwise, and are lowered by the constraint of each outgoing delay-free
    precedence, successors first. Delayed precedences are left to the
    communication protocol.

    Returns:
        an :class:`EncodedTaskSet` (without buffers)

    Raises:
        :exc:`syncrt.exceptions.DeadlineError` if some instance ends up with
        a relative deadline below its wcet
    """
    words = {}  # type: Dict[str, DWord]
    for name in backward_order(g):
        t_i = g.task(name)
        word = DWord.constant(t_i.relative_deadline)
        for e in g.outgoing(name):
            if e.delayed:
                continue
            word = dword_min(word, constraint_word(
                e, words[e.dst], t_i, g.task(e.dst)))
        words[name] = word
        log.debug("w_{} = {}".format(name, word))
    for t in g.tasks:
        word = words[t.name]
        for n, d in enumerate(word.pattern):
            if d < t.C:
                raise DeadlineError(
                    "infeasible deadline: instance {} of {} must complete "
                    "within {} ticks but needs {}".format(n, t.name, d, t.C),
                    task=t.name, instance=n, span=t.span)
    tasks = [
        EncodedTask(name=t.name, kind=t.kind, T=t.T, C=t.C, r=t.r,
                    word=words[t.name], due=t.due, inputs=t.inputs,
                    outputs=t.outputs, node=t.node, value=t.value,
                    order=t.order)
        for t in g.tasks
    ]
    return EncodedTaskSet(g.name, g.tick, tasks, list(g.edges))


# =============================================================================
# Reference: instance-level deadline adjustment
# =============================================================================

def instance_graph_oracle(g: Union[TaskGraph, EncodedTaskSet],
                          horizon: int) -> Dict[str, List[int]]:
    """
    Brute-force adjusted deadlines: unfolds every delay-free precedence into
    instance precedences ``i[n] -> j[g_ops(n)]`` and applies

    .. code-block:: none

        D*_i[n] = min(R_i[n] + d_i, min over successors (D*_j[m] - C_j))

    Returns:
        task name -> ``D*`` of each instance released before ``horizon``
    """
    memo = {}  # type: Dict[Tuple[str, int], int]
    successors = {t.name: [] for t in g.tasks}  # type: Dict[str, List[Edge]]
    for e in g.edges:
        if not has_delay(e.ops):
            successors[e.src].append(e)

    def initial(task) -> int:
        if task.due is not None:
            return task.due
        return task.T

    def adjusted(name: str, n: int) -> int:
        key = (name, n)
        if key in memo:
            return memo[key]
        task = g.task(name)
        d = task.r + n * task.T + initial(task)
        for e in successors[name]:
            succ = g.task(e.dst)
            d = min(d, adjusted(e.dst, g_ops(e.ops, n)) - succ.C)
        memo[key] = d
        return d

    result = {}  # type: Dict[str, List[int]]
    for t in g.tasks:
        count = max(0, -(-(horizon - t.r) // t.T))
        result[t.name] = [adjusted(t.name, n) for n in range(count)]
    return result


def oracle_mismatches(ts: EncodedTaskSet,
                      horizon: Optional[int] = None) -> List[str]:
    """
    Instances whose dynamic deadline differs from the brute-force one.
    """
    if horizon is None:
        horizon = ts.default_horizon()
    problems = []  # type: List[str]
    for name, deadlines in instance_graph_oracle(ts, horizon).items():
        task = ts.task(name)
        for n, expected in enumerate(deadlines):
            got = dynamic_deadline(task, n)
            if got != expected:
                problems.append("{}[{}]: dword deadline {}, oracle {}".format(
                    name, n, got, expected))
    return problems


def encoding_soundness_violations(ts: EncodedTaskSet,
                                  hyperperiods: int = 3) -> List[str]:
    """
    Checks ``D_i(n) <= D_j(g_ops(n)) - C_j`` on every delay-free precedence,
    for the instances of ``i`` released within ``hyperperiods``
    hyperperiods.
    """
    limit = hyperperiods * ts.hyperperiod
    problems = []  # type: List[str]
    for e in ts.delay_free_edges():
        t_i, t_j = ts.task(e.src), ts.task(e.dst)
        n = 0
        while t_i.release(n) < limit:
            m = g_ops(e.ops, n)
            if dynamic_deadline(t_i, n) > dynamic_deadline(t_j, m) - t_j.C:
                problems.append(
                    "{}: D_{}({}) = {} > D_{}({}) - C = {}".format(
                        e, t_i.name, n, dynamic_deadline(t_i, n), t_j.name, m,
                        dynamic_deadline(t_j, m) - t_j.C))
            n += 1
    return problems
