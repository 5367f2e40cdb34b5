"""Fixed-point Logistic map, the PRBS derived from it, and the mu-consistency test.

States are Q0.32 integers ``raw`` standing for ``raw / 2**32``.  The control
parameter 3.9 is held in Q4.28.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateState, LengthMismatch

STATE_BITS = 32
ONE = 1 << STATE_BITS
STATE_MASK = ONE - 1
MU = 3.9
MU_Q4_28 = 1046898278  # round(3.9 * 2**28)


def logistic_step(raw):
    # Single truncation of the full-precision product keeps the orbit inside
    # the mu-consistency error bound.
    return ((MU_Q4_28 * raw * (ONE - raw)) >> (28 + STATE_BITS)) & STATE_MASK


def generate_states(x0, count):
    states = []
    x = int(x0)
    for _ in range(count):
        states.append(x)
        x = logistic_step(x)
    return states


@dataclass(frozen=True, eq=False)
class ControlSeq:
    """PRBS bits b(l) and the derived 2-bit branch codes B(i)."""

    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=np.uint8))

    @property
    def codes(self):
        pairs = self.bits[: self.bits.size // 2 * 2].reshape(-1, 2)
        return (2 * pairs[:, 0] + pairs[:, 1]).astype(np.uint8)

    def __len__(self):
        return self.bits.size // 2


def codes_to_bits(codes):
    codes = np.asarray(codes, dtype=np.uint8)
    return np.stack([codes >> 1, codes & 1], axis=1).ravel()


def states_to_prbs(states):
    arr = np.asarray(states, dtype=">u4")
    return ControlSeq(np.unpackbits(arr.view(np.uint8)))


def bits_to_states(bits):
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % STATE_BITS:
        raise LengthMismatch(f"bit count {bits.size} is not a multiple of {STATE_BITS}")
    return [int(v) for v in np.packbits(bits).view(">u4")]


def control_sequence(x0, code_count):
    """Codes for ``code_count`` elements, starting the PRBS at ``x0`` itself."""
    n_states = -(-2 * code_count // STATE_BITS)
    prbs = states_to_prbs(generate_states(x0, n_states))
    return ControlSeq(prbs.bits[: 2 * code_count])


@dataclass(frozen=True)
class MuCheck:
    consistent: bool
    estimate: float
    bound: float
    m: int


def mu_consistent(xk, xk1, mu=MU):
    """Check whether ``xk1`` can follow ``xk`` under the fixed-point map.

    Estimates mu from the pair and compares the error against
    ``2**(m+3) / 2**32`` where ``m`` is the smallest integer with
    ``x(k+1) >= 2**-m``.
    """
    xk, xk1 = int(xk), int(xk1)
    denom = xk * (ONE - xk)
    if denom <= 0 or xk1 <= 0:
        raise DegenerateState(f"pair ({xk}, {xk1}) has no usable mu estimate")
    estimate = xk1 * ONE / denom
    m = STATE_BITS - xk1.bit_length() + 1
    bound = 2.0 ** (m + 3) / 2.0 ** STATE_BITS
    return MuCheck(abs(estimate - mu) <= bound, estimate, bound, m)
