#!/usr/bin/env python

"""
syncrt/test_comms.py

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

**Tests for communication buffers.**

"""

import pytest

from syncrt.comms import INIT_CELL, READ_CONSUMED_MOD2, READ_SAME
from syncrt.compiler import compile_sample, compile_source
from syncrt.exceptions import CommsError


def _buffers(compiled):
    return {b.name: b for b in compiled.plans}


def test_fcs_buffer_names() -> None:
    buffers = _buffers(compile_sample("fcs.mps"))
    assert sorted(buffers) == sorted([
        "pos_r_NL_i2", "angle_FL_i", "pos_PA_i", "acc_AA_i",
        "PA_o_NF_i", "NF_o_NL_i1", "AA_o_PF_i", "FL_o_PL_i1", "PF_o_PL_i2",
        "NL_o_PL_i3", "PL_o_order",
    ])


def test_same_rate_buffer() -> None:
    b = _buffers(compile_sample("fcs.mps"))["pos_PA_i"]
    assert b.size == 1
    assert b.init is None
    assert b.write_mask == (True, )
    assert b.read_rule == READ_SAME
    assert b.producer_cell(7) == 0
    assert b.consumer_cell(7) == 0


def test_undersampled_buffer_writes_once_per_consumer() -> None:
    b = _buffers(compile_sample("fcs.mps"))["PA_o_NF_i"]
    assert b.size == 1
    assert len(b.write_mask) == 12
    assert b.write_mask[0]
    assert not any(b.write_mask[1:])
    assert [b.should_write(n) for n in (0, 1, 12, 13)] == \
        [True, False, True, False]
    assert b.consumed(2) == 24


def test_delayed_buffer() -> None:
    b = _buffers(compile_sample("fcs.mps"))["NL_o_PL_i3"]
    assert b.size == 2
    assert b.init == 0
    assert b.write_mask == (True, )
    assert b.read_rule == READ_CONSUMED_MOD2
    # PL[0..2] read the initial value, PL[3..5] NL[0], PL[6..8] NL[1].
    assert [b.consumer_cell(m) for m in range(3)] == [INIT_CELL] * 3
    assert [b.consumed(m) for m in (3, 5, 6)] == [0, 0, 1]
    assert b.consumer_cell(3) == b.producer_cell(0) == 0
    assert b.consumer_cell(6) == b.producer_cell(1) == 1
    assert b.consumer_cell(9) == b.producer_cell(2) == 0


def test_write_ordinal() -> None:
    b = _buffers(compile_sample("dw_usefull.mps"))["A_o_B_i"]
    assert b.write_mask == (True, False)
    assert [b.write_ordinal(n) for n in range(5)] == [0, 1, 1, 2, 2]


def test_offset_buffer_has_two_cells() -> None:
    compiled = compile_source("""
        imported node F(a) returns (o) wcet 1;
        node M (i: rate (10, 0)) returns (o) let o = F(i ~> 1/2); tel
    """)
    b = _buffers(compiled)["i_F_a"]
    assert b.size == 2
    assert b.init is None
    assert b.read_rule == READ_CONSUMED_MOD2


def test_flipped_bit() -> None:
    b = _buffers(compile_sample("dw_usefull.mps"))["A_o_B_i"]
    flipped = b.with_flipped_bit(0)
    assert flipped.write_mask == (False, False)
    assert b.write_mask == (True, False)
    assert flipped.name == b.name


def test_chained_delays_rejected() -> None:
    with pytest.raises(CommsError):
        compile_source("""
            imported node F(a) returns (o) wcet 1;
            node M (i: rate (10, 0)) returns (o)
            let o = F(0 fby (0 fby i)); tel
        """)
