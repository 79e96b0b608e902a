"""Binary field snapshots.

Layout (all little-endian)::

    magic     5s   b"HMHD1"
    version   u32
    mode      u8 length + ASCII tag
    dims      u8 count + u32 each
    t         f64
    eps       f64  (NaN when not applicable)
    nbytes    u64  payload length
    crc32     u32  of the payload
    payload   arrays in declared order, each: u8 kind (0 f64, 1 c128),
              u8 ndim, u32 shape..., raw data

Array order per mode: hall3d [B], coupled3d [u, B], maxreg [B, E],
axi [psi, b], kmc [b].
"""

from __future__ import annotations

import math
import os
import struct
import zlib
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import (ChecksumError, ModeMismatchError, SnapshotError,
                      TruncatedSnapshotError, VersionMismatchError)

MAGIC = b"HMHD1"
VERSION = 1
ARRAY_NAMES = {
    "hall3d": ("B",),
    "coupled3d": ("u", "B"),
    "maxreg": ("B", "E"),
    "axi": ("psi", "b"),
    "kmc": ("b",),
}
_KINDS = {0: np.dtype("<f8"), 1: np.dtype("<c16")}


@dataclass(frozen=True, eq=False)
class Snapshot:
    mode: str
    dims: Tuple[int, ...]
    t: float
    arrays: Tuple[np.ndarray, ...]
    eps: float = math.nan

    def __post_init__(self):
        if self.mode not in ARRAY_NAMES:
            raise ValueError(f"unknown snapshot mode {self.mode!r}")
        if len(self.arrays) != len(ARRAY_NAMES[self.mode]):
            raise ValueError(f"mode {self.mode} stores {ARRAY_NAMES[self.mode]}")

    def named(self):
        return dict(zip(ARRAY_NAMES[self.mode], self.arrays))


def _encode_array(a):
    a = np.asarray(a)
    kind = 1 if np.iscomplexobj(a) else 0
    a = np.ascontiguousarray(a, dtype=_KINDS[kind])
    head = struct.pack(f"<BB{a.ndim}I", kind, a.ndim, *a.shape)
    return head + a.tobytes()


def encode(snap: Snapshot) -> bytes:
    payload = b"".join(_encode_array(a) for a in snap.arrays)
    tag = snap.mode.encode("ascii")
    head = MAGIC + struct.pack("<IB", VERSION, len(tag)) + tag
    head += struct.pack(f"<B{len(snap.dims)}I", len(snap.dims), *snap.dims)
    head += struct.pack("<ddQI", snap.t, snap.eps, len(payload), zlib.crc32(payload))
    return head + payload


class _Reader:
    def __init__(self, buf):
        self.buf = buf
        self.pos = 0

    def take(self, fmt):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.buf):
            raise TruncatedSnapshotError("snapshot ends inside the header")
        out = struct.unpack_from(fmt, self.buf, self.pos)
        self.pos += size
        return out

    def raw(self, n):
        if self.pos + n > len(self.buf):
            raise TruncatedSnapshotError(
                f"snapshot truncated: need {n} bytes at offset {self.pos}, "
                f"have {len(self.buf) - self.pos}")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out


def decode(buf: bytes, expect_mode=None) -> Snapshot:
    r = _Reader(buf)
    if len(buf) < len(MAGIC) or r.raw(len(MAGIC)) != MAGIC:
        raise SnapshotError("not a snapshot file (bad magic)")
    version, taglen = r.take("<IB")
    if version != VERSION:
        raise VersionMismatchError(
            f"snapshot version {version}, reader supports {VERSION}; "
            f"re-export it with the release that wrote it, or convert with "
            f"a reader of version {version}")
    mode = r.raw(taglen).decode("ascii", errors="replace")
    if mode not in ARRAY_NAMES:
        raise SnapshotError(f"unknown mode tag {mode!r}")
    if expect_mode is not None and mode != expect_mode:
        raise ModeMismatchError(f"snapshot holds mode {mode!r}, expected {expect_mode!r}")
    (ndims,) = r.take("<B")
    dims = r.take(f"<{ndims}I")
    t, eps, nbytes, crc = r.take("<ddQI")
    payload = r.raw(nbytes)
    if r.pos != len(buf):
        raise SnapshotError(f"{len(buf) - r.pos} trailing bytes after payload")
    if zlib.crc32(payload) != crc:
        raise ChecksumError("payload checksum mismatch")
    p = _Reader(payload)
    arrays = []
    for _ in ARRAY_NAMES[mode]:
        kind, ndim = p.take("<BB")
        if kind not in _KINDS:
            raise SnapshotError(f"unknown array kind {kind}")
        shape = p.take(f"<{ndim}I")
        dt = _KINDS[kind]
        count = int(np.prod(shape, dtype=np.int64))
        arrays.append(np.frombuffer(p.raw(count * dt.itemsize), dtype=dt).reshape(shape).copy())
    if p.pos != len(payload):
        raise SnapshotError("payload length does not match the declared arrays")
    return Snapshot(mode, tuple(dims), t, tuple(arrays), eps)


def save_snapshot(snap: Snapshot, path) -> None:
    data = encode(snap)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def load_snapshot(path, expect_mode=None) -> Snapshot:
    with open(path, "rb") as fh:
        return decode(fh.read(), expect_mode)


def from_state(state, mode, t=None) -> Snapshot:
    """Wrap a solver state (MhdState, MaxwellRegState, AxiState or a KMC profile)."""
    t = float(getattr(state, "t", 0.0) if t is None else t)
    if mode == "hall3d":
        return Snapshot(mode, (state.grid.n,) * 3, t, (state.B_hat.coeffs,))
    if mode == "coupled3d":
        return Snapshot(mode, (state.grid.n,) * 3, t, (state.u_hat.coeffs, state.B_hat.coeffs))
    if mode == "maxreg":
        n = state.B_hat.grid.n
        return Snapshot(mode, (n,) * 3, t, (state.B_hat.coeffs, state.E_hat.coeffs), state.eps)
    if mode == "axi":
        return Snapshot(mode, tuple(state.b.shape), t, (state.psi, state.b))
    if mode == "kmc":
        b = np.asarray(state)
        return Snapshot(mode, tuple(b.shape), t, (b,))
    raise ValueError(f"unknown snapshot mode {mode!r}")


def to_state(snap: Snapshot):
    from .. import spectral as sp
    from ..axisym import AxiState
    from ..hall import MhdState
    from ..maxreg import MaxwellRegState

    if snap.mode in ("hall3d", "coupled3d", "maxreg"):
        g = sp.Grid3(snap.dims[0])
        fields = [sp.SpectralVectorField(g, a) for a in snap.arrays]
        if snap.mode == "hall3d":
            return MhdState(None, fields[0], snap.t)
        if snap.mode == "coupled3d":
            return MhdState(fields[0], fields[1], snap.t)
        return MaxwellRegState(fields[0], fields[1], snap.eps, snap.t)
    if snap.mode == "axi":
        return AxiState(snap.arrays[0], snap.arrays[1], snap.t)
    return snap.arrays[0]
