"""Synthetic fixture generation.

Piecewise-constant random unit directions per segment plus optional Gaussian
noise, with the ground-truth partition returned alongside. Deterministic per
seed, which keeps every downstream check reproducible.
"""

from __future__ import annotations

import numpy as np

from .core import FrameMatrix
from .segmenter import SegmentSet

# Segment durations are drawn uniformly from +/- 20% of the requested mean so
# that corpus-level token frequency concentrates tightly around
# frame_rate / mean_dur_frames.
DUR_JITTER = 0.2


def gen_synthetic(
    n_segments: int,
    mean_dur_frames: float = 10.0,
    dim: int = 16,
    noise_sigma: float = 0.0,
    seed: int = 0,
    frame_rate_hz: float = 50.0,
    utt_id: str = "synthetic",
) -> tuple[FrameMatrix, SegmentSet]:
    """Generate one utterance of block-structured features with ground truth."""
    if n_segments < 1:
        raise ValueError("n_segments must be >= 1")
    if mean_dur_frames < 1:
        raise ValueError("mean_dur_frames must be >= 1")
    rng = np.random.default_rng(seed)
    lo = max(1, int(round((1.0 - DUR_JITTER) * mean_dur_frames)))
    hi = max(lo, int(round((1.0 + DUR_JITTER) * mean_dur_frames)))
    durations = rng.integers(lo, hi + 1, size=n_segments)

    directions = rng.standard_normal((n_segments, dim))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    directions /= np.where(norms > 0, norms, 1.0)

    data = np.repeat(directions, durations, axis=0)
    if noise_sigma > 0:
        data = data + rng.normal(0.0, noise_sigma, size=data.shape)
    segs = SegmentSet.from_durations(durations)
    return FrameMatrix(data, frame_rate_hz, utt_id), segs


def gen_corpus(
    n_utts: int,
    n_segments: int,
    mean_dur_frames: float = 10.0,
    dim: int = 16,
    noise_sigma: float = 0.0,
    seed: int = 0,
    frame_rate_hz: float = 50.0,
) -> list[tuple[FrameMatrix, SegmentSet]]:
    """Independent utterances with per-utterance seeds derived from ``seed``."""
    if n_utts < 1:
        raise ValueError("n_utts must be >= 1")
    out = []
    for k in range(n_utts):
        frames, segs = gen_synthetic(
            n_segments,
            mean_dur_frames,
            dim,
            noise_sigma,
            seed=seed + k,
            frame_rate_hz=frame_rate_hz,
            utt_id=f"utt_{k:04d}",
        )
        out.append((frames, segs))
    return out
