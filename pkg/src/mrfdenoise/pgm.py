"""Reading and writing PGM (portable graymap) images.

Supports the ASCII ``P2`` and binary ``P5`` variants with ``maxval`` up to
65535 (two-byte big-endian samples above 255).  Header comments introduced
by ``#`` run to end of line.  On input, raw gray values are quantized to the
requested number of labels by ``label = value * q // (maxval + 1)``; on
output, labels spread back over 0..255 via ``value = label * 255 // (q -
1)``.  The two maps invert each other exactly for ``q <= 256``.

Malformed input raises :class:`~mrfdenoise.errors.PgmParseError` carrying the
byte offset of the defect.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import PgmParseError
from .image import GrayImage

MAX_MAXVAL = 65535
_WHITESPACE = b" \t\r\n\x0b\x0c"


class _Lexer:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_separators(self) -> None:
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c == 0x23:  # '#' comment runs to end of line
                while self.pos < n and data[self.pos] != 0x0A:
                    self.pos += 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                return

    def next_token(self, what: str) -> tuple[bytes, int]:
        self.skip_separators()
        if self.pos >= len(self.data):
            raise PgmParseError(f"unexpected end of file while reading {what}", self.pos)
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] not in _WHITESPACE and data[self.pos] != 0x23:
            self.pos += 1
        return data[start : self.pos], start

    def next_int(self, what: str, lo: int, hi: int) -> int:
        token, offset = self.next_token(what)
        try:
            value = int(token)
        except ValueError:
            raise PgmParseError(f"expected an integer for {what}, got {token!r}", offset) from None
        if not lo <= value <= hi:
            raise PgmParseError(f"{what} {value} outside [{lo}, {hi}]", offset)
        return value


def read_pgm(path: str | os.PathLike, q: int) -> GrayImage:
    """Read a P2 or P5 PGM file and quantize it to ``q`` labels."""
    if q < 2:
        raise ValueError(f"need at least 2 gray levels, got q={q}")
    with open(path, "rb") as handle:
        data = handle.read()
    lex = _Lexer(data)
    magic, offset = lex.next_token("magic number")
    if magic not in (b"P2", b"P5"):
        raise PgmParseError(f"not a PGM file: magic {magic!r}", offset)
    width = lex.next_int("width", 1, 1 << 30)
    height = lex.next_int("height", 1, 1 << 30)
    maxval = lex.next_int("maxval", 1, MAX_MAXVAL)
    n = width * height
    if magic == b"P2":
        values = np.empty(n, dtype=np.int64)
        for k in range(n):
            values[k] = lex.next_int("pixel value", 0, maxval)
        lex.skip_separators()
        if lex.pos != len(data):
            raise PgmParseError("trailing data after pixel raster", lex.pos)
    else:
        if lex.pos >= len(data):
            raise PgmParseError("unexpected end of file before pixel raster", lex.pos)
        if data[lex.pos] not in _WHITESPACE:
            raise PgmParseError("expected single whitespace before pixel raster", lex.pos)
        start = lex.pos + 1
        wide = maxval > 255
        need = n * (2 if wide else 1)
        if len(data) - start < need:
            raise PgmParseError(
                f"pixel raster truncated: need {need} bytes, found {len(data) - start}",
                len(data),
            )
        if len(data) - start > need:
            raise PgmParseError("trailing data after pixel raster", start + need)
        raw = np.frombuffer(data, dtype=np.uint8, count=need, offset=start)
        if wide:
            values = (raw[0::2].astype(np.int64) << 8) | raw[1::2]
        else:
            values = raw.astype(np.int64)
        bad = np.nonzero(values > maxval)[0]
        if bad.size:
            first = int(bad[0])
            raise PgmParseError(
                f"sample value {int(values[first])} exceeds maxval {maxval}",
                start + first * (2 if wide else 1),
            )
    labels = values * q // (maxval + 1)
    return GrayImage(width, height, q, labels)


def write_pgm(image: GrayImage, path: str | os.PathLike, ascii_format: bool = False) -> None:
    """Write an image as PGM with maxval 255 (binary P5 unless ``ascii_format``)."""
    values = image.labels * 255 // (image.q - 1)
    header = f"{'P2' if ascii_format else 'P5'}\n{image.width} {image.height}\n255\n"
    with open(path, "wb") as handle:
        handle.write(header.encode("ascii"))
        if ascii_format:
            rows = values.reshape(image.height, image.width)
            body = "\n".join(" ".join(str(v) for v in row) for row in rows)
            handle.write(body.encode("ascii"))
            handle.write(b"\n")
        else:
            handle.write(values.astype(np.uint8).tobytes())
