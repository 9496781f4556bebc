"""On-disk coefficient cache.

Layout: magic ``b"SCQS"``, u16 version, u16 weight, u32 prec, then ``prec``
records of (u32 byte length, little-endian two's-complement integer).
"""
from __future__ import annotations

import struct
from pathlib import Path

MAGIC = b"SCQS"
VERSION = 1
_HEADER = struct.Struct("<4sHHI")


class CacheFormatError(ValueError):
    pass


def cache_path(cache_dir, weight: int, prec: int) -> Path:
    return Path(cache_dir) / f"eigenform_w{weight}_p{prec}.bin"


def write_cache(path, weight: int, coeffs) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    chunks = [_HEADER.pack(MAGIC, VERSION, weight, len(coeffs))]
    for c in coeffs:
        nbytes = (int(c).bit_length() + 8) // 8
        chunks.append(struct.pack("<I", nbytes))
        chunks.append(int(c).to_bytes(nbytes, "little", signed=True))
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(b"".join(chunks))
    tmp.replace(path)


def read_cache(path, weight: int | None = None, prec: int | None = None) -> list[int]:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError("truncated header")
    magic, version, w, p = _HEADER.unpack_from(data, 0)
    if magic != MAGIC or version != VERSION:
        raise CacheFormatError("bad magic or version")
    if weight is not None and w != weight:
        raise CacheFormatError(f"cache holds weight {w}, expected {weight}")
    if prec is not None and p != prec:
        raise CacheFormatError(f"cache holds prec {p}, expected {prec}")
    off = _HEADER.size
    out = []
    for _ in range(p):
        if off + 4 > len(data):
            raise CacheFormatError("truncated record")
        (n,) = struct.unpack_from("<I", data, off)
        off += 4
        out.append(int.from_bytes(data[off:off + n], "little", signed=True))
        off += n
    if off != len(data):
        raise CacheFormatError("trailing bytes")
    return out
