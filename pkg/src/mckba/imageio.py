"""Binary PGM (P5, maxval 255) and headerless raw 8-bit image files."""
import re

import numpy as np

from .errors import ParseError

_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\S+)")


def parse_pgm(data):
    tokens = []
    pos = 0
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if not m:
            raise ParseError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    magic, width, height, maxval = tokens
    if magic != b"P5":
        raise ParseError(f"not a binary PGM (magic {magic!r})")
    try:
        width, height, maxval = int(width), int(height), int(maxval)
    except ValueError:
        raise ParseError("non-numeric PGM header field") from None
    if maxval != 255:
        raise ParseError(f"only maxval 255 is supported, got {maxval}")
    if width <= 0 or height <= 0:
        raise ParseError(f"bad PGM dimensions {width}x{height}")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ParseError("missing raster separator")
    raster = data[pos + 1:pos + 1 + width * height]
    if len(raster) != width * height:
        raise ParseError(f"expected {width * height} raster bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def format_pgm(image):
    image = np.asarray(image, dtype=np.uint8)
    height, width = image.shape
    return b"P5\n%d %d\n255\n" % (width, height) + image.tobytes()


def parse_dims(text):
    m = re.fullmatch(r"(\d+)[xX](\d+)", text.strip())
    if not m:
        raise ParseError(f"expected WxH, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def read_image(path, raw=None):
    """Read a PGM file, or a raw row-major dump when ``raw=(width, height)``."""
    with open(path, "rb") as fh:
        data = fh.read()
    if raw is None:
        return parse_pgm(data)
    width, height = raw
    if len(data) != width * height:
        raise ParseError(f"raw file holds {len(data)} bytes, expected {width * height}")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width).copy()


def write_image(path, image, raw=False):
    image = np.asarray(image, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(image.tobytes() if raw else format_pgm(image))
