#!/usr/bin/env python

"""
syncrt/maths.py

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

**Integer and rational helpers: lcm, ceiling division, common ticks.**

"""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable


def lcm(a: int, b: int) -> int:
    """
    Least common multiple of two positive integers.
    """
    return a // gcd(a, b) * b


def lcm_all(values: Iterable[int]) -> int:
    """
    Least common multiple of some positive integers; 1 for none.
    """
    return reduce(lcm, values, 1)


def ceil_div(n: int, k: int) -> int:
    """
    ``ceil(n / k)`` for integers, ``k > 0``, without going through floats.
    """
    return -((-n) // k)


def common_denominator(values: Iterable[Fraction]) -> int:
    """
    Smallest ``L`` such that ``v * L`` is an integer for every ``v``.
    """
    return lcm_all(Fraction(v).denominator for v in values)


def format_rational(q: Fraction) -> str:
    """
    ``"num/den"``, the form used in task-set files (``"1/1"`` for one).
    """
    q = Fraction(q)
    return "{}/{}".format(q.numerator, q.denominator)


def parse_rational(text: str) -> Fraction:
    """
    Inverse of :func:`format_rational`; also accepts a bare integer.
    """
    return Fraction(text)
