"""On-disk formats: NUSR coefficient files and IntervalUnion JSON."""

import json
import struct

import numpy as np

from .coeffs import CoeffSeq
from .intervals import IntervalUnion

MAGIC = b"NUSR"
VERSION = 1
_HEADER = struct.Struct("<4sIq")


class FormatError(ValueError):
    pass


def nusr_bytes(c):
    """Serialise: magic, u32 version, i64 degree, then (f64 re, f64 im) for l = -N..N."""
    body = np.empty(2 * c.coeffs.size, dtype="<f8")
    body[0::2] = c.coeffs.real
    body[1::2] = c.coeffs.imag
    return _HEADER.pack(MAGIC, VERSION, c.degree) + body.tobytes()


def nusr_from_bytes(data, real_valued=False):
    if len(data) < _HEADER.size:
        raise FormatError("truncated NUSR header")
    magic, version, degree = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported NUSR version {version}")
    if degree < 0:
        raise FormatError("negative degree")
    count = 2 * degree + 1
    expected = _HEADER.size + 16 * count
    if len(data) != expected:
        raise FormatError(f"NUSR payload has {len(data)} bytes, expected {expected}")
    body = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    return CoeffSeq(body[0::2] + 1j * body[1::2], real_valued=real_valued)


def write_nusr(path, c):
    data = nusr_bytes(c)
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def read_nusr(path, real_valued=False):
    with open(path, "rb") as fh:
        return nusr_from_bytes(fh.read(), real_valued=real_valued)


def support_json_bytes(union):
    """Compact, deterministic JSON: ``[[[num, den], [num, den]], ...]`` per interval."""
    return json.dumps(union.to_json_obj(), separators=(",", ":")).encode()


def write_support(path, union):
    data = support_json_bytes(union)
    with open(path, "wb") as fh:
        fh.write(data)
    return data


def read_support(path):
    with open(path, "rb") as fh:
        return IntervalUnion.from_json_obj(json.loads(fh.read()))
