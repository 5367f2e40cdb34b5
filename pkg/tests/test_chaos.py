import math
import random
from fractions import Fraction

import numpy as np
import pytest

from mckba import chaos
from mckba.errors import DegenerateState, LengthMismatch


def step_oracle(raw):
    x = Fraction(raw, 2 ** 32)
    return math.floor(Fraction(chaos.MU_Q4_28, 2 ** 28) * x * (1 - x) * 2 ** 32)


def test_mu_constant():
    assert chaos.MU_Q4_28 == math.floor(3.9 * 2 ** 28 + 0.5)


def test_zero_is_fixed():
    assert chaos.logistic_step(0) == 0


def test_half():
    out = chaos.logistic_step(2 ** 31)
    assert out == (chaos.MU_Q4_28 * 2 ** 30) >> 28 == 4187593112
    assert abs(out / 2 ** 32 - 0.975) <= 2 ** -28


def test_paper_initial_condition():
    assert chaos.logistic_step(319684607) == step_oracle(319684607) == 1153969919


def test_step_matches_oracle_randomly():
    rng = random.Random(7)
    for _ in range(2000):
        raw = rng.randrange(2 ** 32)
        assert chaos.logistic_step(raw) == step_oracle(raw)


def test_generate_states():
    assert chaos.generate_states(123, 0) == []
    assert chaos.generate_states(123, 1) == [123]
    assert chaos.generate_states(2 ** 31, 3) == [2 ** 31, 4187593112, 408290334]
    s = chaos.generate_states(2 ** 31, 3)
    assert s[2] == step_oracle(step_oracle(2 ** 31))


def test_prbs_bit_order():
    assert chaos.states_to_prbs([2 ** 31]).bits.tolist() == [1] + [0] * 31
    assert chaos.states_to_prbs([1]).bits.tolist() == [0] * 31 + [1]
    cs = chaos.ControlSeq([1, 0, 1, 1])
    assert cs.codes.tolist() == [2, 3]


def test_bits_to_states():
    assert chaos.bits_to_states([1] + [0] * 31) == [2 ** 31]
    two = [0] * 31 + [1] + [1] + [0] * 31
    assert chaos.bits_to_states(two) == [1, 2 ** 31]
    with pytest.raises(LengthMismatch):
        chaos.bits_to_states([1, 0, 1])


def test_pack_unpack_laws(rng):
    states = [int(v) for v in rng.integers(0, 2 ** 32, size=50, dtype=np.uint64)]
    assert chaos.bits_to_states(chaos.states_to_prbs(states).bits) == states
    bits = rng.integers(0, 2, size=320).astype(np.uint8)
    assert np.array_equal(chaos.states_to_prbs(chaos.bits_to_states(bits)).bits, bits)


def test_codes_formula(rng):
    cs = chaos.states_to_prbs(chaos.generate_states(319684607, 8))
    b = cs.bits
    assert cs.bits.size == 32 * 8
    assert cs.codes.tolist() == [2 * b[2 * i] + b[2 * i + 1] for i in range(128)]
    assert np.array_equal(chaos.codes_to_bits(cs.codes), cs.bits)


def test_control_sequence_length():
    cs = chaos.control_sequence(319684607, 17)
    assert len(cs) == 17
    full = chaos.states_to_prbs(chaos.generate_states(319684607, 2))
    assert np.array_equal(cs.bits, full.bits[:34])


def test_mu_genuine_pairs_pass():
    rng = random.Random(3)
    checked = 0
    while checked < 2000:
        xk = rng.randrange(1, 2 ** 32)
        xk1 = chaos.logistic_step(xk)
        if xk1 < 2 ** 24:
            continue
        assert chaos.mu_consistent(xk, xk1).consistent
        checked += 1


def test_mu_half_half():
    res = chaos.mu_consistent(2 ** 31, 2 ** 31)
    assert res.estimate == 2.0
    assert res.m == 1
    assert res.bound == 2 ** 4 / 2 ** 32
    assert not res.consistent


def test_mu_degenerate():
    with pytest.raises(DegenerateState):
        chaos.mu_consistent(0, 5)
    with pytest.raises(DegenerateState):
        chaos.mu_consistent(5, 0)


def test_mu_unrelated_pairs_rejected():
    rng = random.Random(11)
    passes = sum(chaos.mu_consistent(rng.randrange(1, 2 ** 32), rng.randrange(1, 2 ** 32)).consistent
                 for _ in range(20000))
    assert passes == 0


def test_orbit_determinism():
    assert chaos.generate_states(319684607, 500) == chaos.generate_states(319684607, 500)
