"""Syllabic-token codec.

Encoding mean-pools content and acoustic frame features over a shared segment
partition into (duration, content, acoustic) tokens; decoding expands tokens
back to frame rate and appends a within-segment positional encoding looked up
by relative position from an 11-entry template.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FrameMatrix
from .segmenter import SegmentSet

TEMPLATE_ENTRIES = 11


@dataclass
class SyllabicToken:
    """One variable-duration token: frame count plus two embeddings."""

    duration_frames: int
    content: np.ndarray
    acoustic: np.ndarray

    def __post_init__(self) -> None:
        if self.duration_frames < 1:
            raise ValueError("duration_frames must be >= 1")
        self.content = np.asarray(self.content, dtype=np.float64).reshape(-1)
        self.acoustic = np.asarray(self.acoustic, dtype=np.float64).reshape(-1)
        if not (np.isfinite(self.content).all() and np.isfinite(self.acoustic).all()):
            raise ValueError("token embeddings must be finite")


@dataclass
class TokenStream:
    """Ordered token sequence for one utterance."""

    tokens: list[SyllabicToken] = field(default_factory=list)
    frame_rate_hz: float = 50.0
    utt_id: str = ""

    def __post_init__(self) -> None:
        if not self.frame_rate_hz > 0:
            raise ValueError("frame_rate_hz must be positive")
        dims = {(t.content.shape[0], t.acoustic.shape[0]) for t in self.tokens}
        if len(dims) > 1:
            raise ValueError(f"inconsistent embedding dims across tokens: {sorted(dims)}")

    @property
    def n_tokens(self) -> int:
        return len(self.tokens)

    @property
    def total_frames(self) -> int:
        return sum(t.duration_frames for t in self.tokens)

    @property
    def duration_s(self) -> float:
        return self.total_frames / self.frame_rate_hz

    def durations(self) -> np.ndarray:
        return np.array([t.duration_frames for t in self.tokens], dtype=np.int64)


@dataclass
class WSegPETemplate:
    """Positional-encoding template with exactly 11 entries.

    Relative position p in [0, 1] maps to the continuous index q = 10 * p and
    is resolved by linear interpolation between the two nearest entries.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != TEMPLATE_ENTRIES:
            raise ValueError(f"template must have exactly {TEMPLATE_ENTRIES} entries, got {entries.shape}")
        if entries.shape[1] < 1 or not np.isfinite(entries).all():
            raise ValueError("template entries must be finite vectors")
        self.entries = entries

    @property
    def dim(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def sinusoidal(cls, dim: int) -> "WSegPETemplate":
        """Deterministic sin/cos table indexed by entry position; no RNG involved."""
        pos = np.arange(TEMPLATE_ENTRIES, dtype=np.float64)[:, None]
        idx = np.arange(dim, dtype=np.float64)[None, :]
        angles = pos / np.power(10.0, 2.0 * (idx // 2) / dim)
        entries = np.where(idx % 2 == 0, np.sin(angles), np.cos(angles))
        return cls(entries)

    @classmethod
    def random(cls, dim: int, seed: int) -> "WSegPETemplate":
        rng = np.random.default_rng(seed)
        return cls(rng.standard_normal((TEMPLATE_ENTRIES, dim)))


def encode(content_frames: FrameMatrix, acoustic_frames: FrameMatrix, segs: SegmentSet) -> TokenStream:
    """Mean-pool both feature streams over the shared segment partition."""
    if content_frames.n_frames != segs.total_frames:
        raise ValueError(
            f"content frame count {content_frames.n_frames} does not match segments ({segs.total_frames})"
        )
    if acoustic_frames.n_frames != segs.total_frames:
        raise ValueError(
            f"acoustic frame count {acoustic_frames.n_frames} does not match segments ({segs.total_frames})"
        )
    if content_frames.frame_rate_hz != acoustic_frames.frame_rate_hz:
        raise ValueError("content and acoustic streams must share a frame rate")
    if len(segs) == 0:
        return TokenStream([], content_frames.frame_rate_hz, content_frames.utt_id)

    content_means = segment_means(content_frames.data, segs)
    acoustic_means = segment_means(acoustic_frames.data, segs)
    tokens = [
        SyllabicToken(seg.duration_frames, content_means[k], acoustic_means[k])
        for k, seg in enumerate(segs)
    ]
    return TokenStream(tokens, content_frames.frame_rate_hz, content_frames.utt_id)


def segment_means(data: np.ndarray, segs: SegmentSet) -> np.ndarray:
    """Per-segment arithmetic means of ``data`` rows, in 64-bit."""
    starts = np.array(segs.starts(), dtype=np.intp)
    sums = np.add.reduceat(np.asarray(data), starts, axis=0, dtype=np.float64)
    return sums / segs.durations()[:, None]


def wsegpe(duration: int, template: WSegPETemplate) -> np.ndarray:
    """Positional-encoding rows for a segment of ``duration`` frames.

    Positions run 0 to 1 inclusive as i / (duration - 1); a single-frame
    segment sits at position 0. Rows are convex combinations of the two
    template entries bracketing q = 10 * position.
    """
    if duration < 1:
        raise ValueError("duration must be >= 1")
    entries = template.entries
    if duration == 1:
        return entries[0:1].copy()
    q = np.arange(duration, dtype=np.float64) / (duration - 1) * (TEMPLATE_ENTRIES - 1)
    lo = np.minimum(np.floor(q).astype(np.intp), TEMPLATE_ENTRIES - 1)
    hi = np.minimum(lo + 1, TEMPLATE_ENTRIES - 1)
    frac = (q - lo)[:, None]
    return (1.0 - frac) * entries[lo] + frac * entries[hi]


def decode_expand(stream: TokenStream, template: WSegPETemplate) -> FrameMatrix:
    """Expand tokens back to frame rate: [content | acoustic | positional] rows."""
    if stream.n_tokens == 0:
        raise ValueError("cannot decode an empty token stream")
    durations = stream.durations()
    content = np.repeat(np.stack([t.content for t in stream.tokens]), durations, axis=0)
    acoustic = np.repeat(np.stack([t.acoustic for t in stream.tokens]), durations, axis=0)
    pe_cache: dict[int, np.ndarray] = {}
    pe_blocks = []
    for d in durations:
        d = int(d)
        if d not in pe_cache:
            pe_cache[d] = wsegpe(d, template)
        pe_blocks.append(pe_cache[d])
    positional = np.concatenate(pe_blocks, axis=0)
    data = np.hstack([content, acoustic, positional])
    return FrameMatrix(data, stream.frame_rate_hz, stream.utt_id)


def token_frequency(stream: TokenStream) -> float:
    """Tokens per second of audio covered by the stream."""
    if stream.n_tokens == 0:
        raise ValueError("token frequency is undefined for an empty stream")
    return stream.n_tokens / stream.duration_s
