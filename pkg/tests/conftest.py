import numpy as np
import pytest

from syltok import FrameMatrix, SegmentSet


def rand_frames(seed, n_frames, dim, frame_rate=50.0, scale=1.0):
    rng = np.random.default_rng(seed)
    return FrameMatrix(rng.standard_normal((n_frames, dim)) * scale, frame_rate, f"rand{seed}")


def rand_segment_set(rng, total_frames, min_dur=1):
    """Random contiguous partition of [0, total_frames)."""
    durations = []
    left = total_frames
    while left > 0:
        d = int(rng.integers(min_dur, min(left, 4 * min_dur + 8) + 1))
        d = min(d, left)
        if left - d < min_dur and left - d > 0:
            d = left
        durations.append(d)
        left -= d
    return SegmentSet.from_durations(durations)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
