"""The MCKBA cipher: keys, element-wise encryption/decryption, image pipeline."""
import random
from dataclasses import dataclass

import numpy as np

from . import bitcodec, chaos
from .bitcodec import element_mask
from .errors import BadBlockWidth, InvalidKey, LengthMismatch


@dataclass(frozen=True)
class SecretKey:
    n: int
    key1: int
    key2: int
    x0: int  # Q0.32 raw initial state
    canonical: bool = False  # MSBs of key1/key2 forced to 0 after recovery


def popcount(v):
    return bin(v).count("1")


def validate_key(key):
    """Return a list of human-readable violations; empty means the key is valid."""
    problems = []
    n = key.n
    if not 1 <= n <= bitcodec.MAX_BLOCK_WIDTH:
        return [f"block width {n} outside [1, {bitcodec.MAX_BLOCK_WIDTH}]"]
    for name in ("key1", "key2"):
        v = getattr(key, name)
        if not 0 <= v < 1 << n:
            problems.append(f"{name}={v} is not an {n}-bit integer")
    if not 0 <= key.x0 < chaos.ONE:
        problems.append(f"x0 raw {key.x0} is not a 32-bit value")
    elif key.x0 == 0:
        problems.append("x0 must lie in (0, 1)")
    want = -(-n // 2)
    got = popcount(key.key1 ^ key.key2)
    # the recovered MSBs are arbitrary, so the popcount rule is not checked there
    if not key.canonical and got != want:
        problems.append(f"popcount(key1 ^ key2) = {got}, expected {want}")
    low = (1 << (n - 1)) - 1
    if (key.key1 ^ key.key2) & low == 0:
        problems.append(f"key1 and key2 agree on their low {n - 1} bits")
    return problems


def keygen(n, seed=None):
    if n < 4 or n > bitcodec.MAX_BLOCK_WIDTH:
        raise BadBlockWidth(f"keygen needs 4 <= n <= {bitcodec.MAX_BLOCK_WIDTH}, got {n}")
    rng = random.Random(seed)
    key1 = rng.getrandbits(n)
    diff = sum(1 << j for j in rng.sample(range(n), -(-n // 2)))
    x0 = rng.randrange(1, chaos.ONE)
    return SecretKey(n, key1, key1 ^ diff, x0)


def _codes(codes, count):
    if isinstance(codes, chaos.ControlSeq):
        codes = codes.codes
    codes = np.asarray(codes, dtype=np.uint8)
    if codes.size < count:
        raise LengthMismatch(f"{codes.size} control codes for {count} elements")
    return codes[:count]


def _branch_terms(n, key1, key2, codes):
    """Per-element addend and XOR mask selected by the branch codes."""
    mask = element_mask(n)
    addend = np.where(codes >= 2, np.uint64(key1), np.uint64(key2))
    xor = np.where(codes & 1, addend, ~addend & mask)
    return addend, xor


def encrypt_elements(seq, key, codes):
    codes = _codes(codes, len(seq))
    mask = element_mask(seq.n)
    addend, xor = _branch_terms(seq.n, key.key1, key.key2, codes)
    return seq.with_elements(((seq.elements + addend) & mask) ^ xor)


def decrypt_elements(seq, key, codes):
    codes = _codes(codes, len(seq))
    mask = element_mask(seq.n)
    addend, xor = _branch_terms(seq.n, key.key1, key.key2, codes)
    return seq.with_elements(((seq.elements ^ xor) - addend) & mask)


def _require_valid(key):
    problems = validate_key(key)
    if problems:
        raise InvalidKey("; ".join(problems))


def encrypt_image(image, key):
    _require_valid(key)
    image = bitcodec.check_image(image)
    seq = bitcodec.image_to_elements(image, key.n)
    out = encrypt_elements(seq, key, chaos.control_sequence(key.x0, len(seq)))
    return bitcodec.elements_to_image(out, image.shape[1], image.shape[0])


def decrypt_image(image, key):
    _require_valid(key)
    image = bitcodec.check_image(image)
    seq = bitcodec.image_to_elements(image, key.n)
    out = decrypt_elements(seq, key, chaos.control_sequence(key.x0, len(seq)))
    return bitcodec.elements_to_image(out, image.shape[1], image.shape[0])
