"""Plain (P1) and raw (P4) PBM bitmaps. A black bit (1) is a target pixel."""
from __future__ import annotations

import numpy as np

from .geometry import BinaryImage

_WS = b" \t\r\n\v\f"


class PbmError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


def _skip(data: bytes, i: int) -> int:
    """Skip whitespace and '#' comments."""
    while i < len(data):
        c = data[i:i + 1]
        if c in (b"#",):
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c and c in _WS:
            i += 1
        else:
            break
    return i


def _int(data: bytes, i: int):
    i = _skip(data, i)
    j = i
    while j < len(data) and data[j:j + 1].isdigit():
        j += 1
    if j == i:
        raise PbmError("expected a decimal integer", i)
    return int(data[i:j]), j


def load_pbm(data: bytes) -> BinaryImage:
    if isinstance(data, str):
        data = data.encode("ascii")
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise PbmError(f"unsupported magic {magic!r} (only P1 and P4 are read)", 0)
    w, i = _int(data, 2)
    h, i = _int(data, i)
    if w < 1 or h < 1:
        raise PbmError(f"bad dimensions {w}x{h}", i)
    if magic == b"P1":
        bits = []
        while len(bits) < w * h:
            i = _skip(data, i)
            if i >= len(data):
                raise PbmError(f"truncated payload: {len(bits)} of {w * h} bits", i)
            c = data[i:i + 1]
            if c not in (b"0", b"1"):
                raise PbmError(f"unexpected byte {c!r} in bitmap", i)
            bits.append(c == b"1")
            i += 1
        if _skip(data, i) < len(data):
            raise PbmError("trailing data after bitmap", _skip(data, i))
        return BinaryImage(np.array(bits, dtype=bool).reshape(h, w))
    if i >= len(data) or data[i:i + 1] not in _WS:
        raise PbmError("expected one whitespace byte before the raster", i)
    i += 1
    row_bytes = (w + 7) // 8
    need = row_bytes * h
    raster = data[i:i + need]
    if len(raster) < need:
        raise PbmError(f"truncated payload: {len(raster)} of {need} bytes", i + len(raster))
    packed = np.frombuffer(raster, dtype=np.uint8).reshape(h, row_bytes)
    return BinaryImage(np.unpackbits(packed, axis=1)[:, :w].astype(bool))


def dump_pbm(image: BinaryImage, fmt: str = "P1") -> bytes:
    header = f"{fmt}\n{image.width} {image.height}\n".encode("ascii")
    if fmt == "P4":
        return header + np.packbits(image.pixels, axis=1).tobytes()
    if fmt != "P1":
        raise ValueError(f"unknown PBM format {fmt!r}")
    lines = []
    for row in image.to_rows():
        lines += [row[j:j + 70] for j in range(0, len(row), 70)]
    return header + ("\n".join(lines) + "\n").encode("ascii")
