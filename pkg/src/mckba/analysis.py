"""Measurements of the cipher's weak diffusion and of PRBS balance."""
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from . import chaos
from .cipher import encrypt_elements
from .errors import InsufficientData

MIN_MONOBIT_BITS = 1024


@dataclass
class DiffusionReport:
    flipped_position: tuple
    changed_bits: list

    @property
    def count(self):
        return len(self.changed_bits)


@dataclass
class KeyDiffusionReport:
    which: str
    bit: int
    per_element: np.ndarray
    histogram: dict = field(default_factory=dict)

    @property
    def total(self):
        return int(self.per_element.sum())


def _changed(before, after):
    diff = before ^ after
    out = []
    for idx in np.flatnonzero(diff):
        v = int(diff[idx])
        out.extend((int(idx), j) for j in range(v.bit_length()) if v >> j & 1)
    return out


def plaintext_diffusion(key, codes, seq, i, m):
    """Flip bit ``m`` of plain element ``i`` and report the changed cipher bits.

    Raises AssertionError if any change falls outside element ``i`` or below
    bit ``m``; modular addition only carries upward.
    """
    if not 0 <= i < len(seq) or not 0 <= m < seq.n:
        raise IndexError(f"position ({i}, {m}) outside {len(seq)} x {seq.n}")
    flipped = seq.elements.copy()
    flipped[i] ^= np.uint64(1 << m)
    base = encrypt_elements(seq, key, codes).elements
    other = encrypt_elements(seq.with_elements(flipped), key, codes).elements
    report = DiffusionReport((i, m), _changed(base, other))
    assert all(e == i and j >= m for e, j in report.changed_bits), report
    return report


def key_diffusion(key, codes, seq, which, t):
    if which not in ("key1", "key2"):
        raise ValueError(f"which must be 'key1' or 'key2', got {which!r}")
    if not 0 <= t < seq.n:
        raise IndexError(f"bit {t} outside {seq.n}-bit key")
    other_key = replace(key, **{which: getattr(key, which) ^ (1 << t)})
    diff = (encrypt_elements(seq, key, codes).elements
            ^ encrypt_elements(seq, other_key, codes).elements)
    counts = np.array([bin(int(v)).count("1") for v in diff], dtype=np.int64)
    return KeyDiffusionReport(which, t, counts, dict(sorted(Counter(counts.tolist()).items())))


@dataclass(frozen=True)
class MonobitStats:
    bits: int
    ones: int
    ones_fraction: float
    chi_square: float
    z_score: float


def monobit_stats(bits):
    if isinstance(bits, chaos.ControlSeq):
        bits = bits.bits
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size < MIN_MONOBIT_BITS:
        raise InsufficientData(f"need at least {MIN_MONOBIT_BITS} bits, got {bits.size}")
    total = int(bits.size)
    ones = int(bits.sum())
    zeros = total - ones
    chi2 = (ones - zeros) ** 2 / total
    return MonobitStats(total, ones, ones / total, chi2, (ones - zeros) / np.sqrt(total))
