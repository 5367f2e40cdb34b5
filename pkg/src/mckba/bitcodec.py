"""Conversions between gray-scale images and n-bit element sequences.

Pixels are scanned in raster order. Within a pixel, and within an element,
bits are taken least-significant first.
"""
from dataclasses import dataclass

import numpy as np

from .errors import BadBlockWidth, EmptyImage, LengthMismatch

MAX_BLOCK_WIDTH = 64


def check_block_width(n):
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_BLOCK_WIDTH:
        raise BadBlockWidth(f"block width must be in [1, {MAX_BLOCK_WIDTH}], got {n!r}")
    return int(n)


def element_mask(n):
    return np.uint64((1 << n) - 1)


@dataclass(frozen=True, eq=False)
class ElementSeq:
    """An n-bit element sequence stored as a uint64 array."""

    n: int
    elements: np.ndarray
    pad_bits: int = 0

    def __post_init__(self):
        check_block_width(self.n)
        arr = np.ascontiguousarray(self.elements, dtype=np.uint64)
        if arr.ndim != 1:
            raise ValueError("elements must be one-dimensional")
        if self.n < 64 and arr.size and int(arr.max()) >> self.n:
            raise ValueError(f"element exceeds {self.n} bits")
        object.__setattr__(self, "elements", arr)

    def __len__(self):
        return self.elements.size

    def __eq__(self, other):
        if not isinstance(other, ElementSeq):
            return NotImplemented
        return (self.n == other.n and self.pad_bits == other.pad_bits
                and np.array_equal(self.elements, other.elements))

    def with_elements(self, elements):
        return ElementSeq(self.n, elements, self.pad_bits)


def check_image(image):
    """Coerce to a 2-D uint8 array (height x width) and reject empty images."""
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D gray-scale image, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyImage(f"image has shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def image_to_bits(image):
    return np.unpackbits(check_image(image).ravel(), bitorder="little")


def bits_to_elements(bits, n):
    n = check_block_width(n)
    pad = (-bits.size) % n
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    cols = bits.reshape(-1, n).astype(np.uint64)
    acc = np.zeros(cols.shape[0], dtype=np.uint64)
    for j in range(n):
        acc |= cols[:, j] << np.uint64(j)
    return ElementSeq(n, acc, pad)


def elements_to_bits(seq):
    n = seq.n
    out = np.empty((len(seq), n), dtype=np.uint8)
    for j in range(n):
        out[:, j] = (seq.elements >> np.uint64(j)) & np.uint64(1)
    return out.ravel()


def image_to_elements(image, n):
    check_block_width(n)
    return bits_to_elements(image_to_bits(image), n)


def elements_to_image(seq, width, height):
    if width <= 0 or height <= 0:
        raise EmptyImage(f"bad dimensions {width}x{height}")
    need = 8 * width * height
    bits = elements_to_bits(seq)
    surplus = bits.size - need
    if surplus < 0 or surplus >= seq.n:
        raise LengthMismatch(
            f"{bits.size} element bits cannot hold a {width}x{height} image exactly")
    pixels = np.packbits(bits[:need], bitorder="little")
    return pixels.reshape(height, width)


def block_count(width, height, n):
    return -(-8 * width * height // n)
