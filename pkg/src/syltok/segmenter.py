"""Unsupervised segmentation of frame sequences.

Greedy single-sweep grouping against the running segment centroid, a
short-segment refinement pass, min-duration filtering for evaluation sweeps,
and a deliberately naive reference implementation used by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import NORM_EPS, FrameMatrix, cosine_sim, normalize_rows


@dataclass(frozen=True)
class Segment:
    """Half-open frame range [start, end)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid segment [{self.start}, {self.end})")

    @property
    def duration_frames(self) -> int:
        return self.end - self.start

    def duration_ms(self, frame_rate_hz: float) -> float:
        return self.duration_frames * 1000.0 / frame_rate_hz


@dataclass
class SegmentSet:
    """Contiguous, exhaustive partition of [0, total_frames) into segments."""

    segments: list[Segment] = field(default_factory=list)
    total_frames: int = 0

    def __post_init__(self) -> None:
        if self.total_frames < 0:
            raise ValueError("total_frames must be >= 0")
        if not self.segments:
            if self.total_frames != 0:
                raise ValueError("empty segment list requires total_frames == 0")
            return
        if self.segments[0].start != 0:
            raise ValueError("first segment must start at frame 0")
        for prev, cur in zip(self.segments, self.segments[1:]):
            if prev.end != cur.start:
                raise ValueError(f"gap or overlap at frame {prev.end}")
        if self.segments[-1].end != self.total_frames:
            raise ValueError("last segment must end at total_frames")

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def starts(self) -> list[int]:
        return [s.start for s in self.segments]

    def durations(self) -> np.ndarray:
        return np.array([s.duration_frames for s in self.segments], dtype=np.int64)

    def boundary_times_s(self, frame_rate_hz: float, include_initial: bool = False) -> list[float]:
        """Segment-start times in seconds; frame 0 included only on request."""
        starts = self.starts() if include_initial else self.starts()[1:]
        return [s / frame_rate_hz for s in starts]

    @classmethod
    def from_boundaries(cls, starts, total_frames: int) -> "SegmentSet":
        """Build from interior boundary frame indices (frame 0 implied)."""
        if total_frames == 0:
            return cls([], 0)
        edges = sorted({0, *[int(s) for s in starts if 0 < int(s) < total_frames], total_frames})
        segs = [Segment(a, b) for a, b in zip(edges, edges[1:])]
        return cls(segs, total_frames)

    @classmethod
    def from_durations(cls, durations) -> "SegmentSet":
        segs = []
        pos = 0
        for d in durations:
            segs.append(Segment(pos, pos + int(d)))
            pos += int(d)
        return cls(segs, pos)


def greedy_segment(frames: FrameMatrix, merge_threshold: float, *, normalize: bool = False) -> SegmentSet:
    """Single left-to-right sweep grouping frames by centroid similarity.

    A frame joins the open segment when its cosine similarity to the running
    centroid (arithmetic mean of the segment so far) is >= merge_threshold;
    otherwise it starts a new segment. With ``normalize`` the comparison runs
    on L2-normalized frames, which changes the centroids but not the
    individual cosines.
    """
    data = np.asarray(frames.data, dtype=np.float64)
    n = data.shape[0]
    if n == 0:
        return SegmentSet([], 0)
    if normalize:
        data = normalize_rows(data)

    row_norms = np.linalg.norm(data, axis=1)
    starts = [0]
    seg_sum = data[0].copy()
    count = 1
    for i in range(1, n):
        centroid = seg_sum / count
        cnorm = float(np.linalg.norm(centroid))
        if row_norms[i] < NORM_EPS or cnorm < NORM_EPS:
            cos = 0.0
        else:
            cos = float(np.dot(data[i], centroid)) / (row_norms[i] * cnorm)
            cos = min(1.0, max(-1.0, cos))
        if cos >= merge_threshold:
            seg_sum += data[i]
            count += 1
        else:
            starts.append(i)
            seg_sum = data[i].copy()
            count = 1
    return SegmentSet.from_boundaries(starts[1:], n)


def oracle_segment(frames: FrameMatrix, merge_threshold: float, *, normalize: bool = False) -> SegmentSet:
    """Naive re-derivation of greedy_segment for testing.

    Recomputes the open segment's centroid from scratch at every step instead
    of keeping a running sum. Quadratic; intended for sequences up to ~1000
    frames.
    """
    data = np.asarray(frames.data, dtype=np.float64)
    n = data.shape[0]
    if n == 0:
        return SegmentSet([], 0)
    if normalize:
        data = normalize_rows(data)

    starts = [0]
    seg_start = 0
    for i in range(1, n):
        centroid = data[seg_start:i].mean(axis=0)
        if cosine_sim(data[i], centroid) >= merge_threshold:
            continue
        starts.append(i)
        seg_start = i
    return SegmentSet.from_boundaries(starts[1:], n)


def _segment_sums(data: np.ndarray, segs: SegmentSet) -> tuple[list[np.ndarray], list[int]]:
    sums = [data[s.start:s.end].sum(axis=0, dtype=np.float64) for s in segs]
    counts = [s.duration_frames for s in segs]
    return sums, counts


def _merge_pass(spans, sums, counts, rate, min_ms, threshold):
    """One left-to-right sweep; returns True when at least one merge happened.

    ``threshold`` None means unconditional merging (min-duration filtering);
    otherwise a short segment is absorbed only when its best adjacent centroid
    similarity strictly exceeds the threshold. Ties go to the left neighbor.
    """
    changed = False
    k = 0
    while k < len(spans):
        dur_ms = (spans[k][1] - spans[k][0]) * 1000.0 / rate
        if dur_ms >= min_ms or len(spans) == 1:
            k += 1
            continue
        centroid = sums[k] / counts[k]
        sim_left = cosine_sim(centroid, sums[k - 1] / counts[k - 1]) if k > 0 else None
        sim_right = cosine_sim(centroid, sums[k + 1] / counts[k + 1]) if k + 1 < len(spans) else None
        if sim_left is not None and (sim_right is None or sim_left >= sim_right):
            best, into = sim_left, k - 1
        else:
            best, into = sim_right, k + 1
        if threshold is not None and not best > threshold:
            k += 1
            continue
        lo, hi = min(k, into), max(k, into)
        spans[lo] = (spans[lo][0], spans[hi][1])
        sums[lo] = sums[lo] + sums[hi]
        counts[lo] = counts[lo] + counts[hi]
        del spans[hi], sums[hi], counts[hi]
        changed = True
        k = lo
    return changed


def _merge_until_stable(segs, frames, rate, min_ms, threshold) -> SegmentSet:
    if len(segs) <= 1:
        return SegmentSet(list(segs.segments), segs.total_frames)
    data = np.asarray(frames.data, dtype=np.float64)
    sums, counts = _segment_sums(data, segs)
    spans = [(s.start, s.end) for s in segs]
    while _merge_pass(spans, sums, counts, rate, min_ms, threshold):
        pass
    return SegmentSet([Segment(a, b) for a, b in spans], segs.total_frames)


def refine(
    segs: SegmentSet,
    frames: FrameMatrix,
    refine_threshold: float = 0.7,
    min_ms: float = 80.0,
    frame_rate_hz: float | None = None,
) -> SegmentSet:
    """Absorb sub-``min_ms`` segments into sufficiently similar neighbors.

    Sweeps left to right until a fixed point: a short segment merges into the
    adjacent segment whose centroid it is most similar to, provided that
    similarity strictly exceeds ``refine_threshold``.
    """
    rate = frames.frame_rate_hz if frame_rate_hz is None else frame_rate_hz
    return _merge_until_stable(segs, frames, rate, min_ms, refine_threshold)


def filter_min_duration(
    segs: SegmentSet,
    frames: FrameMatrix,
    min_ms: float,
    frame_rate_hz: float | None = None,
) -> SegmentSet:
    """Unconditionally merge every sub-``min_ms`` segment into its closer neighbor.

    Evaluation-only post-processing; the codec path keeps all segments. A
    single-segment input is returned unchanged.
    """
    rate = frames.frame_rate_hz if frame_rate_hz is None else frame_rate_hz
    return _merge_until_stable(segs, frames, rate, min_ms, None)
