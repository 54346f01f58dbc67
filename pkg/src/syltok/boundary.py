"""Peak-detection boundary extraction and boundary-target construction.

Turns a per-frame boundary-probability trace into a full-coverage segment
partition, builds binary targets from reference segments, and scores
predicted traces against them with binary cross-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .segmenter import SegmentSet

BCE_CLAMP = 1e-7


@dataclass
class BoundaryTrace:
    """Length-T vector of boundary probabilities in [0, 1]."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64).reshape(-1)
        if probs.size and (not np.isfinite(probs).all() or probs.min() < 0.0 or probs.max() > 1.0):
            raise ValueError("boundary probabilities must be finite and within [0, 1]")
        self.probs = probs

    @property
    def n_frames(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class PeakConfig:
    """Acceptance thresholds for probability peaks.

    A peak survives when its height is >= min_peak and either its topographic
    prominence strictly exceeds min_prominence or its height strictly exceeds
    hard_prob.
    """

    min_peak: float = 0.2
    min_prominence: float = 0.05
    hard_prob: float = 0.8

    def __post_init__(self) -> None:
        for name in ("min_peak", "min_prominence", "hard_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


def peak_indices(probs: np.ndarray) -> list[int]:
    """Leftmost indices of local-maximum plateaus.

    A plateau is a maximal run of equal values with strictly smaller values on
    both sides; runs touching either end of the trace do not count as peaks.
    """
    n = probs.shape[0]
    peaks = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and probs[j + 1] == probs[i]:
            j += 1
        if i > 0 and j < n - 1 and probs[i - 1] < probs[i] and probs[j + 1] < probs[i]:
            peaks.append(i)
        i = j + 1
    return peaks


def prominence(probs: np.ndarray, peak: int) -> float:
    """Topographic prominence of the peak at ``peak``.

    Height above the higher of the two valley minima separating the peak from
    the nearest strictly higher point on each side; the trace edges act as
    virtual higher peaks.
    """
    h = probs[peak]
    left_min = h
    j = peak - 1
    while j >= 0 and probs[j] <= h:
        if probs[j] < left_min:
            left_min = probs[j]
        j -= 1
    right_min = h
    j = peak + 1
    n = probs.shape[0]
    while j < n and probs[j] <= h:
        if probs[j] < right_min:
            right_min = probs[j]
        j += 1
    return float(h - max(left_min, right_min))


def detect_boundaries(trace: BoundaryTrace, cfg: PeakConfig = PeakConfig()) -> SegmentSet:
    """Split [0, T) at accepted probability peaks; frame 0 is always a boundary."""
    probs = trace.probs
    n = probs.shape[0]
    if n == 0:
        return SegmentSet([], 0)
    accepted = [
        i
        for i in peak_indices(probs)
        if probs[i] >= cfg.min_peak
        and (prominence(probs, i) > cfg.min_prominence or probs[i] > cfg.hard_prob)
    ]
    return SegmentSet.from_boundaries(accepted, n)


def boundary_targets(segs: SegmentSet) -> BoundaryTrace:
    """Binary trace with 1 at every segment start (including frame 0)."""
    probs = np.zeros(segs.total_frames, dtype=np.float64)
    for start in segs.starts():
        probs[start] = 1.0
    return BoundaryTrace(probs)


def bce_loss(pred: BoundaryTrace, target: BoundaryTrace) -> float:
    """Mean binary cross-entropy; predictions are clamped to [1e-7, 1 - 1e-7]."""
    if pred.n_frames != target.n_frames:
        raise ValueError(f"length mismatch: {pred.n_frames} vs {target.n_frames}")
    p = np.clip(pred.probs, BCE_CLAMP, 1.0 - BCE_CLAMP)
    t = target.probs
    return float(np.mean(-(t * np.log(p) + (1.0 - t) * np.log(1.0 - p))))
