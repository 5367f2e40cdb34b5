import random

import numpy as np
import pytest

from conftest import PAPER_KEY, simulate
from mckba import attack, chaos, cipher, keyrecovery
from mckba.attack import EquivalentKey
from mckba.bitcodec import ElementSeq
from mckba.errors import AmbiguousKeyUsage, CorruptEquivalentKey, UndecidableHypothesis


def ek_of(addends, n=8):
    addends = np.asarray(addends, dtype=np.uint64)
    return EquivalentKey(n, addends, np.zeros_like(addends))


def test_distinct_addends():
    assert keyrecovery.distinct_addends(ek_of([5, 9, 5, 9, 9])) == (5, 9)
    with pytest.raises(AmbiguousKeyUsage):
        keyrecovery.distinct_addends(ek_of([5, 5, 5]))
    with pytest.raises(CorruptEquivalentKey):
        keyrecovery.distinct_addends(ek_of([1, 2, 3]))


@pytest.mark.parametrize("n", range(1, 13))
def test_parity_proposition_exhaustive(n):
    mod = 1 << n
    x = np.arange(mod, dtype=np.int64)
    for a in range(1, mod, 2):
        s = (a + x) % mod
        assert np.all((s ^ x) & 1 == 1)
        assert np.all(((mod - 1) ^ s ^ x) & 1 == 0)


def test_sieve_codes():
    ek = ek_of([3, 6, 3, 6])
    j1 = ElementSeq(8, [1, 0, 0, 1])
    h_a, h_b = keyrecovery.derive_control_hypotheses(ek, j1, 3, 6)
    assert h_a.codes.tolist() == [3, 0, 2, 1]
    assert h_b.codes.tolist() == [1, 2, 0, 3]


def test_sieve_rejects_foreign_addend():
    with pytest.raises(CorruptEquivalentKey):
        keyrecovery.derive_control_hypotheses(ek_of([3, 6, 7]), ElementSeq(8, [0, 0, 0]), 3, 6)


@pytest.mark.parametrize("seed", range(10))
def test_true_hypothesis_reproduces_prbs(seed):
    key = cipher.keygen(16, seed)
    plains, ciphers, codes = simulate(key, 512)
    ek = attack.recover_equivalent_key(plains, ciphers)
    ka, kb = keyrecovery.distinct_addends(ek)
    h1, h2 = keyrecovery.derive_control_hypotheses(ek, ciphers[1], ka, kb)
    true = h1 if h1.key1 == key.key1 % 2 ** 15 else h2
    other = h2 if true is h1 else h1
    assert np.array_equal(true.bits, codes.bits)
    # sibling law: every even-position bit flipped, odd positions untouched
    assert np.all(true.bits[0::2] != other.bits[0::2])
    assert np.array_equal(true.bits[1::2], other.bits[1::2])
    assert len(true.states) == true.bits.size // 32


def test_select_needs_four_states():
    h = keyrecovery.KeyHypothesis(1, 2, np.zeros(64, np.uint8), [1, 2])
    with pytest.raises(ValueError):
        keyrecovery.select_hypothesis(h, h)


def test_random_hypotheses_undecidable():
    rng = np.random.default_rng(1)
    for _ in range(50):
        hs = []
        for _ in range(2):
            bits = rng.integers(0, 2, 32 * 8).astype(np.uint8)
            hs.append(keyrecovery.KeyHypothesis(1, 2, bits, chaos.bits_to_states(bits)))
        with pytest.raises(UndecidableHypothesis) as err:
            keyrecovery.select_hypothesis(*hs)
        assert len(err.value.evidence) == 2


def test_sibling_false_accept_rate():
    """Monte-Carlo: sibling orbits never pass all three checks."""
    rng = random.Random(5)
    accepted = 0
    for _ in range(1000):
        states = chaos.generate_states(rng.randrange(1, 2 ** 32), 8)
        sibling = [s ^ 0xAAAAAAAA for s in states]
        ev = keyrecovery.check_orbit(sibling)
        accepted += all(r.consistent for _, r in ev)
        assert all(r.consistent for _, r in keyrecovery.check_orbit(states))
    assert accepted == 0


def test_degenerate_pairs_skipped():
    ev = keyrecovery.check_orbit([0, 0, 2 ** 31, chaos.logistic_step(2 ** 31),
                                  chaos.logistic_step(chaos.logistic_step(2 ** 31)), 7])
    assert [k for k, _ in ev] == [2, 3, 4]


def test_paper_configuration():
    plains, ciphers, codes = simulate(PAPER_KEY, 65536)
    rec = keyrecovery.recover_secret_key(plains, ciphers)
    assert rec.key.key1 == 3835288501 % 2 ** 31
    assert rec.key.key2 == 1437224678
    assert rec.key.x0 == 319684607
    assert rec.key.canonical
    assert np.array_equal(rec.codes, codes.codes)
    assert all(r.consistent for _, r in rec.chosen.evidence)
    assert len(rec.chosen.evidence) == 3


@pytest.mark.parametrize("n", [4, 8, 32])
def test_recovered_key_reencrypts(n):
    for seed in range(5):
        key = cipher.keygen(n, seed)
        plains, ciphers, _ = simulate(key, 1024)
        rec = keyrecovery.recover_secret_key(plains, ciphers)
        assert cipher.validate_key(rec.key) == []
        codes = chaos.control_sequence(rec.key.x0, 1024)
        for p, c in zip(plains, ciphers):
            assert cipher.encrypt_elements(p, rec.key, codes) == c
        img = np.random.default_rng(seed).integers(0, 256, (16, 16), dtype=np.uint8)
        assert np.array_equal(cipher.decrypt_image(cipher.encrypt_image(img, key), rec.key), img)


def test_more_pairs_knob():
    key = cipher.keygen(32, 77)
    plains, ciphers, _ = simulate(key, 4096)
    rec = keyrecovery.recover_secret_key(plains, ciphers, pairs=10)
    assert len(rec.chosen.evidence) == 10
    assert rec.key.x0 == key.x0
