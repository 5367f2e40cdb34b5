"""Four-chosen-plaintext differential attack producing an equivalent key.

For any branch, the XOR of two ciphertext elements is
``y = (a + x) ^ (b + x) mod 2**n`` with ``x`` the sub-key used as addend,
because the branch's XOR/XNOR mask cancels.  Three well-chosen plaintext
pairs pin down the low ``n - 1`` bits of ``x``; the top bit never matters
for decryption.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bitcodec import ElementSeq, element_mask
from .errors import LengthMismatch, UnresolvableBit

# Octal digits repeated across the element, low digit first.
CHOSEN_DIGITS = (1, 7, 4, 6)

# Next carry difference for inputs (x_i, c_i) across columns (a_i, b_i, yt_i),
# columns ordered (0,0,0), (0,0,1), (0,1,0), ..., (1,1,1).
TABLE1 = np.array([
    [[0, 0, 0, 1, 0, 0, 0, 1],   # x=0, c=0
     [0, 0, 1, 0, 1, 1, 0, 1]],  # x=0, c=1
    [[0, 1, 1, 1, 1, 0, 0, 0],   # x=1, c=0
     [0, 1, 0, 0, 0, 1, 0, 0]],  # x=1, c=1
], dtype=np.uint8)

# (a_i + 2 b_i + 4 yt_i) values for which yt_{i+1} reveals x_i.
DETERMINING = (1, 2, 4, 7)


class QueryObservation(NamedTuple):
    a: int
    b: int
    y: int


def repeated_digit(digit, n):
    return sum(digit << (3 * j) for j in range(-(-n // 3))) % (1 << n)


def chosen_plain_values(n):
    return tuple(repeated_digit(d, n) for d in CHOSEN_DIGITS)


def chosen_plain_sequences(n, element_count):
    return [ElementSeq(n, np.full(element_count, v, dtype=np.uint64))
            for v in chosen_plain_values(n)]


def corollary_queries(n):
    """The (a, b) pairs formed from the chosen plaintexts: (J0,J1), (J0,J2), (J3,J2)."""
    v0, v1, v2, v3 = chosen_plain_values(n)
    return ((v0, v1), (v0, v2), (v3, v2))


def _maj(x, y, z):
    return (x & y) ^ (x & z) ^ (y & z)


def table1_next(a_i, b_i, yt_i, x_i, c_i):
    """Carry-recursion value of yt_{i+1}; the tilde carry is c_i ^ yt_i."""
    return _maj(x_i, a_i, c_i) ^ _maj(x_i, b_i, c_i ^ yt_i)


def solve_modadd_xor_many(a, b, y, n):
    """Vectorised solver.

    ``a``, ``b``, ``y`` have shape (queries, elements) (or broadcast to it).
    Returns the low ``n - 1`` bits of x per element as uint64, top bit 0.
    """
    a, b, y = np.broadcast_arrays(*(np.asarray(v, dtype=np.uint64) for v in (a, b, y)))
    if a.ndim == 1:
        a, b, y = a[:, None], b[:, None], y[:, None]
    nq, ne = a.shape
    x = np.zeros(ne, dtype=np.uint64)
    if n <= 1:
        return x
    yt = y ^ a ^ b
    one = np.uint64(1)
    carry = np.zeros((nq, ne), dtype=np.uint8)
    cols = np.arange(ne)
    for i in range(n - 1):
        s = np.uint64(i)
        ai = ((a >> s) & one).astype(np.uint8)
        bi = ((b >> s) & one).astype(np.uint8)
        yti = ((yt >> s) & one).astype(np.uint8)
        yti1 = ((yt >> np.uint64(i + 1)) & one).astype(np.uint8)
        ok = np.isin(ai + 2 * bi + 4 * yti, DETERMINING)
        covered = ok.any(axis=0)
        if not covered.all():
            raise UnresolvableBit(i, int(np.flatnonzero(~covered)[0]))
        q = ok.argmax(axis=0)
        col = 4 * ai[q, cols] + 2 * bi[q, cols] + yti[q, cols]
        xi = yti1[q, cols] ^ TABLE1[0, carry[q, cols], col]
        x |= xi.astype(np.uint64) << s
        carry = _maj(xi[None, :], ai, carry)
    return x


def solve_modadd_xor(observations, n):
    """Recover x mod 2**(n-1) from observations of ``y = (a+x) ^ (b+x)``."""
    if n <= 1:
        return 0
    if not observations:
        raise UnresolvableBit(0)
    obs = np.array([tuple(o) for o in observations], dtype=np.uint64)
    return int(solve_modadd_xor_many(obs[:, 0], obs[:, 1], obs[:, 2], n)[0])


@dataclass(frozen=True, eq=False)
class EquivalentKey:
    """Per-element (addend, mask) pairs; decrypt as ``(c ^ mask) - addend``."""

    n: int
    addends: np.ndarray
    masks: np.ndarray

    def __len__(self):
        return self.addends.size

    @property
    def pairs(self):
        return list(zip(self.addends.tolist(), self.masks.tolist()))


def recover_equivalent_key(plains, ciphers):
    """Build the equivalent key from four chosen plaintexts and their ciphertexts.

    Observations per element are taken from the plaintexts actually supplied,
    so any set of sequences satisfying the coverage condition works.
    """
    if len(plains) != 4 or len(ciphers) != 4:
        raise ValueError("expected four plaintexts and four ciphertexts")
    n = plains[0].n
    lengths = {len(s) for s in (*plains, *ciphers)}
    if len(lengths) != 1 or any(s.n != n for s in (*plains, *ciphers)):
        raise LengthMismatch(f"chosen sequences disagree in length or width: {sorted(lengths)}")
    p = [s.elements for s in plains]
    c = [s.elements for s in ciphers]
    a = np.stack([p[0], p[0], p[3]])
    b = np.stack([p[1], p[2], p[2]])
    y = np.stack([c[0] ^ c[1], c[0] ^ c[2], c[3] ^ c[2]])
    addends = solve_modadd_xor_many(a, b, y, n)
    masks = c[1] ^ ((p[1] + addends) & element_mask(n))
    return EquivalentKey(n, addends, masks)


def equivalent_decrypt(cipher, ek):
    if len(cipher) > len(ek):
        raise LengthMismatch(f"cipher has {len(cipher)} elements, key covers {len(ek)}")
    if cipher.n != ek.n:
        raise LengthMismatch(f"cipher block width {cipher.n} != key width {ek.n}")
    m = len(cipher)
    out = ((cipher.elements ^ ek.masks[:m]) - ek.addends[:m]) & element_mask(ek.n)
    return cipher.with_elements(out)


def msb_invariance_check(a, x, n):
    """Both MSB-invariance identities for modular subtraction after XOR/XNOR."""
    mod = 1 << n
    full = mod - 1
    top = 1 << (n - 1)
    xt = x ^ top
    xor_form = ((a ^ x) - x) % mod == ((a ^ xt) - xt) % mod
    xnor_form = ((a ^ (full ^ x)) - x) % mod == ((a ^ (full ^ xt)) - xt) % mod
    return xor_form and xnor_form
