"""Lift an equivalent key to the full secret key (key1, key2, x0).

The branch code B(i) is rebuilt from two sieves: which sub-key's addend
element i used, and the parity of the ciphertext of the odd chosen plaintext
(odd addend + XOR gives an odd result, XNOR an even one).  Which addend is
key1 is unknown, so two PRBS hypotheses arise; only the right one repacks
into states that follow the Logistic map.
"""
from dataclasses import dataclass, field

import numpy as np

from . import chaos
from .attack import recover_equivalent_key
from .cipher import SecretKey
from .errors import (AmbiguousKeyUsage, CorruptEquivalentKey, DegenerateState,
                     UndecidableHypothesis)

DEFAULT_PAIRS = 3


@dataclass
class KeyHypothesis:
    key1: int
    key2: int
    bits: np.ndarray
    states: list
    evidence: list = field(default_factory=list)

    @property
    def codes(self):
        return chaos.ControlSeq(self.bits).codes


@dataclass
class RecoveredKey:
    key: SecretKey
    codes: np.ndarray
    chosen: KeyHypothesis
    rejected: KeyHypothesis
    addends: tuple


def distinct_addends(ek):
    if len(ek) == 0:
        raise AmbiguousKeyUsage("equivalent key is empty")
    values = np.unique(ek.addends)
    if values.size == 1:
        raise AmbiguousKeyUsage(
            f"only one addend ({int(values[0])}) observed; collect more elements")
    if values.size > 2:
        raise CorruptEquivalentKey(f"{values.size} distinct addends, expected 2")
    return int(values[0]), int(values[1])


def _hypothesis(key1, key2, high, low):
    bits = np.stack([high, low], axis=1).ravel().astype(np.uint8)
    usable = bits.size // chaos.STATE_BITS * chaos.STATE_BITS
    return KeyHypothesis(key1, key2, bits, chaos.bits_to_states(bits[:usable]))


def derive_control_hypotheses(ek, cipher_of_j1, ka, kb):
    """Two PRBS hypotheses: (ka is key1, kb is key1)."""
    c1 = cipher_of_j1.elements if hasattr(cipher_of_j1, "elements") else np.asarray(cipher_of_j1)
    if c1.size < len(ek):
        raise CorruptEquivalentKey("fewer J1 ciphertext elements than key entries")
    add = ek.addends
    is_a = add == np.uint64(ka)
    if not (is_a | (add == np.uint64(kb))).all():
        bad = int(np.flatnonzero(~(is_a | (add == np.uint64(kb))))[0])
        raise CorruptEquivalentKey(f"element {bad} addend matches neither sub-key")
    low = (c1[: len(ek)] & np.uint64(1)).astype(np.uint8)
    high = is_a.astype(np.uint8)
    return _hypothesis(ka, kb, high, low), _hypothesis(kb, ka, 1 - high, low)


def check_orbit(states, pairs=DEFAULT_PAIRS):
    """mu-check the first ``pairs`` usable consecutive state pairs."""
    evidence = []
    for k in range(len(states) - 1):
        try:
            res = chaos.mu_consistent(states[k], states[k + 1])
        except DegenerateState:
            continue
        evidence.append((k, res))
        if len(evidence) == pairs:
            break
    return evidence


def select_hypothesis(first, second, pairs=DEFAULT_PAIRS):
    for h in (first, second):
        if len(h.states) < 4:
            raise ValueError(f"hypothesis has {len(h.states)} states, need at least 4")
        h.evidence = check_orbit(h.states, pairs)
    verdict = [len(h.evidence) == pairs and all(r.consistent for _, r in h.evidence)
               for h in (first, second)]
    if verdict[0] == verdict[1]:
        state = "both pass" if verdict[0] else "both fail"
        raise UndecidableHypothesis(
            f"mu-consistency cannot separate the hypotheses ({state})",
            evidence=[h.evidence for h in (first, second)])
    return (first, second) if verdict[0] else (second, first)


def recover_secret_key(plains, ciphers, pairs=DEFAULT_PAIRS):
    ek = recover_equivalent_key(plains, ciphers)
    ka, kb = distinct_addends(ek)
    h1, h2 = derive_control_hypotheses(ek, ciphers[1], ka, kb)
    chosen, rejected = select_hypothesis(h1, h2, pairs)
    key = SecretKey(ek.n, chosen.key1, chosen.key2, chosen.states[0], canonical=True)
    return RecoveredKey(key, chosen.codes, chosen, rejected, (ka, kb))
