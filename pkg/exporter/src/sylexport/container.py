"""SYL2 kind-0 (frames) writer.

Byte layout, all little-endian:

    magic b"SYL2" | u32 version=1 | u32 kind=0 | f32 frame_rate_hz |
    u32 dim | u64 n_frames | f32 payload (row-major)
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"SYL2"
VERSION = 1
KIND_FRAMES = 0

_HEADER = struct.Struct("<4sIIfIQ")


def write_frames_syl2(data: np.ndarray, frame_rate_hz: float, path) -> None:
    payload = np.ascontiguousarray(data, dtype="<f4")
    if payload.ndim != 2:
        raise ValueError("frame data must be 2-D")
    if not np.isfinite(payload).all():
        raise ValueError("frame data must be finite")
    n_frames, dim = payload.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, KIND_FRAMES, frame_rate_hz, dim, n_frames))
        payload.tofile(fh)
