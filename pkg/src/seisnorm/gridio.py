"""On-disk formats: the SGRD grid file and a minimal SEG-Y rev1 reader.

SGRD layout (little-endian)::

    offset  size  field
    0       4     magic b"SGRD"
    4       2     u16 version (= 1)
    6       4     u32 nt
    10      4     u32 nx
    14      8     f64 dt  (s)
    22      8     f64 dx  (m)
    30      8     f64 t0  (s)
    38      ...   nt*nx f32 samples, trace after trace
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np

from .grid import GridError, Section, validate

log = logging.getLogger(__name__)

MAGIC = b"SGRD"
VERSION = 1
_HEADER = struct.Struct("<4sHIIddd")


class GridFileError(GridError):
    pass


class BadMagicError(GridFileError):
    pass


class VersionError(GridFileError):
    pass


class TruncatedError(GridFileError):
    pass


class NonFiniteError(GridFileError):
    pass


class UnsupportedFormatError(GridFileError):
    pass


def encode_grid(section: Section) -> bytes:
    issues = validate(section)
    if issues:
        raise GridError(f"refusing to write invalid section: {issues[0].message}")
    with np.errstate(over="ignore"):
        samples = np.asarray(section.samples, dtype="<f4")
    if not np.all(np.isfinite(samples)):
        raise NonFiniteError("section overflows single precision")
    head = _HEADER.pack(
        MAGIC, VERSION, section.nt, section.nx, section.dt, section.dx, section.t0
    )
    return head + samples.T.tobytes()  # (nx, nt) C-order = trace-major


def decode_grid(data: bytes, name: str = "<bytes>") -> Section:
    if len(data) < _HEADER.size:
        raise TruncatedError(f"{name}: {len(data)} bytes is shorter than the {_HEADER.size}-byte header")
    magic, version, nt, nx, dt, dx, t0 = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagicError(f"{name}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise VersionError(f"{name}: unsupported version {version}, expected {VERSION}")
    if nt < 1 or nx < 1:
        raise GridFileError(f"{name}: empty grid {nt}x{nx}")
    need = _HEADER.size + 4 * nt * nx
    if len(data) < need:
        raise TruncatedError(
            f"{name}: payload has {len(data) - _HEADER.size} bytes, need {4 * nt * nx}"
        )
    if len(data) > need:
        raise GridFileError(f"{name}: {len(data) - need} unexpected trailing bytes")
    samples = np.frombuffer(data, dtype="<f4", count=nt * nx, offset=_HEADER.size)
    samples = samples.reshape(nx, nt).T.astype(np.float64)
    bad = np.argwhere(~np.isfinite(samples))
    if bad.size:
        raise NonFiniteError(f"{name}: non-finite sample at (row, trace) {tuple(bad[0])}")
    section = Section(samples, dt, dx, t0)
    issues = validate(section)
    if issues:
        raise GridFileError(f"{name}: {issues[0].message}")
    return section


def write_grid(section: Section, path) -> None:
    Path(path).write_bytes(encode_grid(section))


def read_grid(path) -> Section:
    return decode_grid(Path(path).read_bytes(), str(path))


# --- SEG-Y ---------------------------------------------------------------

TEXT_HEADER = 3200
BINARY_HEADER = 400
TRACE_HEADER = 240
SUPPORTED_FORMATS = {1: "IBM float", 5: "IEEE float"}


def ibm_to_ieee(words) -> np.ndarray:
    """Decode big-endian IBM System/360 single-precision words (as uint32)."""
    w = np.asarray(words, dtype=np.uint32).astype(np.int64)
    sign = np.where(w >> 31, -1.0, 1.0)
    exponent = (w >> 24) & 0x7F
    fraction = (w & 0x00FFFFFF).astype(np.float64) / float(1 << 24)
    return sign * fraction * np.power(16.0, exponent - 64)


def _coordinate(h: bytes) -> float:
    scalar = struct.unpack_from(">h", h, 70)[0]
    sx, gx = struct.unpack_from(">i", h, 72)[0], struct.unpack_from(">i", h, 80)[0]
    cdpx = struct.unpack_from(">i", h, 180)[0]
    raw = cdpx or gx or sx
    if scalar > 0:
        return raw * float(scalar)
    if scalar < 0:
        return raw / float(-scalar)
    return float(raw)


def import_segy_minimal(path) -> Section:
    """Read a SEG-Y rev1 file with uniform traces in format code 1 or 5."""
    path = Path(path)
    data = path.read_bytes()
    start = TEXT_HEADER + BINARY_HEADER
    if len(data) < start:
        raise TruncatedError(f"{path}: shorter than the SEG-Y file headers")
    interval_us, = struct.unpack_from(">H", data, 3216)
    ns, = struct.unpack_from(">H", data, 3220)
    fmt, = struct.unpack_from(">h", data, 3224)
    n_ext, = struct.unpack_from(">h", data, 3504)
    if fmt not in SUPPORTED_FORMATS:
        raise UnsupportedFormatError(
            f"{path}: sample format code {fmt} not supported (only 1 and 5)"
        )
    if ns < 1 or interval_us < 1:
        raise GridFileError(f"{path}: binary header gives ns={ns}, interval={interval_us} us")
    pos = start + TEXT_HEADER * max(n_ext, 0)
    traces, coords = [], []
    while pos < len(data):
        if pos + TRACE_HEADER > len(data):
            raise TruncatedError(f"{path}: trace {len(traces)} header truncated")
        head = data[pos : pos + TRACE_HEADER]
        tr_ns, = struct.unpack_from(">H", head, 114)
        if tr_ns not in (0, ns):
            raise GridFileError(
                f"{path}: trace {len(traces)} has {tr_ns} samples, expected {ns} (varying trace lengths)"
            )
        body = pos + TRACE_HEADER
        if body + 4 * ns > len(data):
            raise TruncatedError(f"{path}: trace {len(traces)} samples truncated")
        raw = np.frombuffer(data, dtype=">u4", count=ns, offset=body)
        if fmt == 1:
            traces.append(ibm_to_ieee(raw))
        else:
            traces.append(raw.view(">f4").astype(np.float64))
        coords.append(_coordinate(head))
        pos = body + 4 * ns
    if not traces:
        raise GridFileError(f"{path}: no traces")
    samples = np.column_stack(traces)
    bad = np.argwhere(~np.isfinite(samples))
    if bad.size:
        raise NonFiniteError(f"{path}: non-finite sample at (row, trace) {tuple(bad[0])}")
    steps = np.abs(np.diff(coords))
    steps = steps[steps > 0]
    if steps.size:
        dx = float(np.median(steps))
    else:
        dx = 1.0
        log.warning("%s: no trace coordinates; assuming dx = 1.0 m", path)
    return Section(samples, interval_us * 1e-6, dx)
