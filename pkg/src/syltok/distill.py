"""Distillation-target math at desk scale.

EMA teacher parameter updates, segment-averaged regression targets,
frame-wise MSE, and the staged merge-threshold sampler used by the
segmentation curriculum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FrameMatrix
from .codec import segment_means
from .segmenter import SegmentSet

# Canonical curriculum: the two segmentation-driven stages sample their merge
# threshold from a fixed interval and pair it with a fixed refine threshold.
STAGE_THRESHOLDS = {
    2: ((0.5, 0.7), 0.5),
    3: ((0.7, 0.9), 0.7),
}


@dataclass
class EmaState:
    """Flattened teacher parameters tracked as an EMA of the student."""

    teacher_params: np.ndarray
    decay: float = 0.999

    def __post_init__(self) -> None:
        params = np.asarray(self.teacher_params, dtype=np.float64).reshape(-1)
        if not np.isfinite(params).all():
            raise ValueError("teacher parameters must be finite")
        if not 0.0 < self.decay < 1.0:
            raise ValueError(f"decay must lie in (0, 1), got {self.decay}")
        self.teacher_params = params


@dataclass(frozen=True)
class StageConfig:
    """Threshold configuration for one training stage (1-4)."""

    stage: int
    merge_threshold_range: tuple[float, float]
    refine_threshold: float

    def __post_init__(self) -> None:
        if self.stage not in (1, 2, 3, 4):
            raise ValueError(f"stage must be 1-4, got {self.stage}")
        lo, hi = self.merge_threshold_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"invalid merge threshold range [{lo}, {hi}]")
        if not 0.0 <= self.refine_threshold <= 1.0:
            raise ValueError("refine_threshold must lie in [0, 1]")
        if self.stage in STAGE_THRESHOLDS:
            want_range, want_refine = STAGE_THRESHOLDS[self.stage]
            if (lo, hi) != want_range or self.refine_threshold != want_refine:
                raise ValueError(
                    f"stage {self.stage} is pinned to merge range {want_range} "
                    f"with refine threshold {want_refine}"
                )

    @classmethod
    def for_stage(cls, stage: int) -> "StageConfig":
        if stage not in STAGE_THRESHOLDS:
            raise ValueError(f"no canonical thresholds for stage {stage}")
        rng, refine = STAGE_THRESHOLDS[stage]
        return cls(stage, rng, refine)


def ema_update(state: EmaState, student_params: np.ndarray) -> EmaState:
    """One EMA step: teacher <- decay * teacher + (1 - decay) * student."""
    student = np.asarray(student_params, dtype=np.float64).reshape(-1)
    if student.shape != state.teacher_params.shape:
        raise ValueError(
            f"parameter length mismatch: {state.teacher_params.shape[0]} vs {student.shape[0]}"
        )
    updated = state.decay * state.teacher_params + (1.0 - state.decay) * student
    return EmaState(updated, state.decay)


def segment_average_targets(teacher_frames: FrameMatrix, segs: SegmentSet) -> FrameMatrix:
    """Replace each frame by its segment's mean: the piecewise-constant target."""
    if teacher_frames.n_frames != segs.total_frames:
        raise ValueError(
            f"frame count {teacher_frames.n_frames} does not match segments ({segs.total_frames})"
        )
    if len(segs) == 0:
        return FrameMatrix(
            np.zeros((0, teacher_frames.dim)), teacher_frames.frame_rate_hz, teacher_frames.utt_id
        )
    means = segment_means(teacher_frames.data, segs)
    data = np.repeat(means, segs.durations(), axis=0)
    return FrameMatrix(data, teacher_frames.frame_rate_hz, teacher_frames.utt_id)


def framewise_mse(student_frames: FrameMatrix, target_frames: FrameMatrix) -> float:
    """Mean squared difference over all T x D entries."""
    if student_frames.data.shape != target_frames.data.shape:
        raise ValueError(
            f"shape mismatch: {student_frames.data.shape} vs {target_frames.data.shape}"
        )
    diff = student_frames.data.astype(np.float64) - target_frames.data.astype(np.float64)
    return float(np.mean(diff * diff))


def sample_merge_threshold(cfg: StageConfig, rng_seed: int) -> float:
    """Uniform draw from the stage's merge-threshold range, deterministic per seed."""
    lo, hi = cfg.merge_threshold_range
    if lo > hi:
        raise ValueError(f"invalid range [{lo}, {hi}]")
    if lo == hi:
        return float(lo)
    return float(np.random.default_rng(rng_seed).uniform(lo, hi))
