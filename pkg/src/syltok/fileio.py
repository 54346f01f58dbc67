"""SYL2 binary container and JSONL annotation I/O.

Layout (all integers and floats little-endian):

    offset  size  field
    0       4     magic  b"SYL2"
    4       4     u32    version (currently 1)
    8       4     u32    kind: 0 = frames, 1 = tokens
    12      4     f32    frame_rate_hz

    kind 0 (frames):
    16      4     u32    dim
    20      8     u64    n_frames
    28      -     f32[n_frames * dim] row-major payload

    kind 1 (tokens):
    16      4     u32    content_dim
    20      4     u32    acoustic_dim
    24      8     u64    n_tokens
    32      -     records: u32 duration, f32[content_dim], f32[acoustic_dim]

The payload is read straight into one array (no intermediate bytes object),
so peak memory stays close to the payload size. Utterance ids are not stored;
readers derive them from the file stem.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .core import FrameMatrix
from .codec import SyllabicToken, TokenStream
from .evaluate import BoundaryAnnotation

MAGIC = b"SYL2"
VERSION = 1
KIND_FRAMES = 0
KIND_TOKENS = 1

_COMMON = struct.Struct("<4sIIf")
_FRAMES_EXTRA = struct.Struct("<IQ")
_TOKENS_EXTRA = struct.Struct("<IIQ")


class ContainerError(Exception):
    """Base for SYL2 format errors; ``code`` is a stable machine-readable tag."""

    code = "container-error"


class BadMagicError(ContainerError):
    code = "bad-magic"


class BadVersionError(ContainerError):
    code = "bad-version"


class WrongKindError(ContainerError):
    code = "wrong-kind"


class TruncatedPayloadError(ContainerError):
    code = "truncated-payload"


class TrailingDataError(ContainerError):
    code = "trailing-data"


class PayloadValueError(ContainerError):
    code = "bad-payload-values"


def _read_exact(fh, n: int, what: str) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise TruncatedPayloadError(f"truncated payload: short read in {what}")
    return buf


def _read_common_header(fh, path) -> tuple[int, float]:
    head = fh.read(_COMMON.size)
    if len(head) < 4 or head[:4] != MAGIC:
        raise BadMagicError(f"{path}: not a SYL2 file (bad magic)")
    if len(head) != _COMMON.size:
        raise TruncatedPayloadError(f"{path}: truncated header")
    _, version, kind, frame_rate = _COMMON.unpack(head)
    if version != VERSION:
        raise BadVersionError(f"{path}: unsupported version {version}")
    if not frame_rate > 0:
        raise PayloadValueError(f"{path}: non-positive frame rate {frame_rate}")
    return kind, float(frame_rate)


def _check_kind(kind: int, expected: int, path) -> None:
    if kind != expected:
        names = {KIND_FRAMES: "frames", KIND_TOKENS: "tokens"}
        raise WrongKindError(
            f"{path}: expected a {names[expected]} file, found kind {kind}"
        )


def _check_eof(fh, path) -> None:
    if fh.read(1):
        raise TrailingDataError(f"{path}: trailing bytes after payload")


def _to_f32(data: np.ndarray, what: str) -> np.ndarray:
    out = np.ascontiguousarray(data, dtype="<f4")
    if out.size and not np.isfinite(out).all():
        raise PayloadValueError(f"{what} overflow or became non-finite in float32")
    return out


def write_frames(frames: FrameMatrix, path) -> None:
    path = Path(path)
    payload = _to_f32(frames.data, "frame features")
    with open(path, "wb") as fh:
        fh.write(_COMMON.pack(MAGIC, VERSION, KIND_FRAMES, frames.frame_rate_hz))
        fh.write(_FRAMES_EXTRA.pack(frames.dim, frames.n_frames))
        payload.tofile(fh)


def read_frames(path) -> FrameMatrix:
    path = Path(path)
    with open(path, "rb") as fh:
        kind, frame_rate = _read_common_header(fh, path)
        _check_kind(kind, KIND_FRAMES, path)
        dim, count = _FRAMES_EXTRA.unpack(_read_exact(fh, _FRAMES_EXTRA.size, "frames header"))
        if dim < 1:
            raise PayloadValueError(f"{path}: dim must be >= 1, got {dim}")
        data = np.fromfile(fh, dtype="<f4", count=count * dim)
        if data.size != count * dim:
            raise TruncatedPayloadError(
                f"{path}: expected {count * dim} floats, found {data.size}"
            )
        _check_eof(fh, path)
    if data.size and not np.isfinite(data).all():
        raise PayloadValueError(f"{path}: payload contains NaN or Inf")
    return FrameMatrix(data.reshape(count, dim), frame_rate, path.stem)


def _token_dtype(content_dim: int, acoustic_dim: int) -> np.dtype:
    return np.dtype(
        [
            ("duration", "<u4"),
            ("content", "<f4", (content_dim,)),
            ("acoustic", "<f4", (acoustic_dim,)),
        ]
    )


def write_tokens(stream: TokenStream, path) -> None:
    path = Path(path)
    if stream.n_tokens:
        content_dim = stream.tokens[0].content.shape[0]
        acoustic_dim = stream.tokens[0].acoustic.shape[0]
    else:
        content_dim = acoustic_dim = 0
    records = np.zeros(stream.n_tokens, dtype=_token_dtype(content_dim, acoustic_dim))
    for k, tok in enumerate(stream.tokens):
        records[k]["duration"] = tok.duration_frames
        records[k]["content"] = _to_f32(tok.content, f"token {k} content")
        records[k]["acoustic"] = _to_f32(tok.acoustic, f"token {k} acoustic")
    with open(path, "wb") as fh:
        fh.write(_COMMON.pack(MAGIC, VERSION, KIND_TOKENS, stream.frame_rate_hz))
        fh.write(_TOKENS_EXTRA.pack(content_dim, acoustic_dim, stream.n_tokens))
        records.tofile(fh)


def read_tokens(path) -> TokenStream:
    path = Path(path)
    with open(path, "rb") as fh:
        kind, frame_rate = _read_common_header(fh, path)
        _check_kind(kind, KIND_TOKENS, path)
        content_dim, acoustic_dim, count = _TOKENS_EXTRA.unpack(
            _read_exact(fh, _TOKENS_EXTRA.size, "tokens header")
        )
        dtype = _token_dtype(content_dim, acoustic_dim)
        records = np.fromfile(fh, dtype=dtype, count=count)
        if records.size != count:
            raise TruncatedPayloadError(f"{path}: expected {count} tokens, found {records.size}")
        _check_eof(fh, path)
    tokens = []
    for rec in records:
        if rec["duration"] < 1:
            raise PayloadValueError(f"{path}: token duration must be >= 1")
        if not (np.isfinite(rec["content"]).all() and np.isfinite(rec["acoustic"]).all()):
            raise PayloadValueError(f"{path}: token embeddings contain NaN or Inf")
        tokens.append(SyllabicToken(int(rec["duration"]), rec["content"], rec["acoustic"]))
    return TokenStream(tokens, frame_rate, path.stem)


def read_boundary_trace(path):
    """Read a kind-0 file with dim 1 as a boundary-probability trace."""
    from .boundary import BoundaryTrace

    frames = read_frames(path)
    if frames.dim != 1:
        raise PayloadValueError(f"{path}: boundary traces must have dim 1, got {frames.dim}")
    probs = frames.data[:, 0].astype(np.float64)
    if probs.size and (probs.min() < 0.0 or probs.max() > 1.0):
        raise PayloadValueError(f"{path}: trace values must lie in [0, 1]")
    return BoundaryTrace(probs), frames.frame_rate_hz, frames.utt_id


def write_boundary_trace(trace, frame_rate_hz: float, path) -> None:
    probs = np.asarray(trace.probs, dtype=np.float64).reshape(-1, 1)
    write_frames(FrameMatrix(probs, frame_rate_hz), path)


def read_annotations(path) -> list[BoundaryAnnotation]:
    """Parse JSONL records with ``utt_id`` and ``boundaries_s`` fields."""
    path = Path(path)
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                out.append(BoundaryAnnotation(rec["utt_id"], rec["boundaries_s"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise PayloadValueError(f"{path}:{lineno}: bad annotation record: {exc}") from exc
    return out


def write_annotations(annotations: list[BoundaryAnnotation], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ann in annotations:
            fh.write(json.dumps({"utt_id": ann.utt_id, "boundaries_s": ann.boundaries_s}) + "\n")
