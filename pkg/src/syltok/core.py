"""Shared numeric primitives: normalization, cosine similarity, similarity matrices.

All arithmetic runs in 64-bit floats regardless of input dtype; feature
matrices loaded from disk may stay 32-bit until they hit an operation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Norms below this are treated as zero (silent or padded frames).
NORM_EPS = 1e-12


@dataclass
class FrameMatrix:
    """A T x D matrix of frame-level features at a fixed frame rate."""

    data: np.ndarray
    frame_rate_hz: float = 50.0
    utt_id: str = ""

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 2:
            raise ValueError(f"frame data must be 2-D, got shape {data.shape}")
        if data.shape[1] < 1:
            raise ValueError("frame data needs at least one feature dimension")
        if data.dtype not in (np.float32, np.float64):
            data = data.astype(np.float64)
        if not np.isfinite(data).all():
            raise ValueError("frame data contains NaN or Inf")
        if not self.frame_rate_hz > 0:
            raise ValueError(f"frame_rate_hz must be positive, got {self.frame_rate_hz}")
        self.data = data
        self.frame_rate_hz = float(self.frame_rate_hz)

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_frames / self.frame_rate_hz


@dataclass
class SimilarityMatrix:
    """Pairwise cosine similarities between frames, values in [-1, 1]."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {values.shape}")
        if values.size and (not np.isfinite(values).all() or values.min() < -1.0 or values.max() > 1.0):
            raise ValueError("similarity values must be finite and within [-1, 1]")
        self.values = values

    @property
    def n_frames(self) -> int:
        return self.values.shape[0]


def l2_normalize(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to unit L2 norm; vectors with norm <= 1e-12 map to zeros."""
    v = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm > NORM_EPS:
        return v / norm
    return np.zeros_like(v)


def cosine_sim(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity clamped to [-1, 1]; 0 when either norm is ~zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < NORM_EPS or nv < NORM_EPS:
        return 0.0
    c = float(np.dot(u, v)) / (nu * nv)
    return min(1.0, max(-1.0, c))


def normalize_rows(data: np.ndarray) -> np.ndarray:
    """Row-wise L2 normalization with the same zero-vector rule as l2_normalize."""
    data = np.asarray(data, dtype=np.float64)
    norms = np.linalg.norm(data, axis=1, keepdims=True)
    safe = np.where(norms > NORM_EPS, norms, 1.0)
    out = data / safe
    out[norms[:, 0] <= NORM_EPS] = 0.0
    return out


def similarity_matrix(frames: FrameMatrix) -> SimilarityMatrix:
    """All-pairs cosine similarity between the rows of ``frames``."""
    if frames.n_frames == 0:
        return SimilarityMatrix(np.zeros((0, 0)))
    unit = normalize_rows(frames.data)
    values = np.clip(unit @ unit.T, -1.0, 1.0)
    return SimilarityMatrix(values)
