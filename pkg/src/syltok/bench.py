"""Wall-clock benchmark harness reporting real-time factors per pipeline stage.

Stages mirror the encode/decode decomposition: segmentation, content pooling,
acoustic pooling (their sum is total_encode), token expansion (decode), and
the end-to-end total. RTF is stage seconds divided by seconds of audio
covered by the inputs.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .codec import SyllabicToken, TokenStream, WSegPETemplate, decode_expand, segment_means
from .core import FrameMatrix
from .segmenter import greedy_segment, refine

STAGE_KEYS = ("content", "segmentation", "acoustic", "total_encode", "decode", "e2e")


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for the benchmarked encode/decode pipeline."""

    merge_threshold: float = 0.8
    refine_threshold: float = 0.7
    refine_min_ms: float = 80.0
    apply_refine: bool = True
    normalize: bool = False
    pe_dim: int = 16


@dataclass
class RtfReport:
    """Median stage timings and their real-time factors."""

    audio_seconds: float
    stage_seconds: dict[str, float]
    rtf: dict[str, float]
    batch_size: int

    def as_dict(self) -> dict:
        return {
            "audio_seconds": self.audio_seconds,
            "stage_seconds": dict(self.stage_seconds),
            "rtf": dict(self.rtf),
            "batch_size": self.batch_size,
        }


def _run_once(config: PipelineConfig, inputs: list[FrameMatrix], template: WSegPETemplate) -> dict[str, float]:
    t_seg = t_content = t_acoustic = 0.0
    streams: list[TokenStream] = []
    for frames in inputs:
        t0 = time.perf_counter()
        segs = greedy_segment(frames, config.merge_threshold, normalize=config.normalize)
        if config.apply_refine:
            segs = refine(segs, frames, config.refine_threshold, config.refine_min_ms)
        t1 = time.perf_counter()
        content_means = segment_means(frames.data, segs)
        t2 = time.perf_counter()
        # The harness reuses the input as the acoustic stream; token assembly
        # is charged to this window as the tail of the encode path.
        acoustic_means = segment_means(frames.data, segs)
        tokens = [
            SyllabicToken(seg.duration_frames, content_means[k], acoustic_means[k])
            for k, seg in enumerate(segs)
        ]
        t3 = time.perf_counter()
        t_seg += t1 - t0
        t_content += t2 - t1
        t_acoustic += t3 - t2
        streams.append(TokenStream(tokens, frames.frame_rate_hz, frames.utt_id))
    t4 = time.perf_counter()
    for stream in streams:
        decode_expand(stream, template)
    t_decode = time.perf_counter() - t4
    total_encode = t_seg + t_content + t_acoustic
    return {
        "content": t_content,
        "segmentation": t_seg,
        "acoustic": t_acoustic,
        "total_encode": total_encode,
        "decode": t_decode,
        "e2e": total_encode + t_decode,
    }


def bench_rtf(
    config: PipelineConfig,
    inputs: list[FrameMatrix],
    batch_size: int = 1,
    warmup: int = 3,
    runs: int = 10,
) -> RtfReport:
    """Time the pipeline over ``inputs``; median over ``runs`` after ``warmup``."""
    if not inputs:
        raise ValueError("benchmark needs at least one input")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    template = WSegPETemplate.sinusoidal(config.pe_dim)
    audio_seconds = sum(f.duration_s for f in inputs)

    for _ in range(warmup):
        _run_once(config, inputs, template)
    measurements = [_run_once(config, inputs, template) for _ in range(runs)]

    # Medians are taken per base stage; the totals are derived afterwards so
    # the accounting identities (total_encode = content + segmentation +
    # acoustic, e2e = total_encode + decode) hold exactly in every report.
    stage_seconds = {
        key: float(statistics.median(m[key] for m in measurements))
        for key in ("content", "segmentation", "acoustic", "decode")
    }
    stage_seconds["total_encode"] = (
        stage_seconds["content"] + stage_seconds["segmentation"] + stage_seconds["acoustic"]
    )
    stage_seconds["e2e"] = stage_seconds["total_encode"] + stage_seconds["decode"]
    rtf = {key: stage_seconds[key] / audio_seconds for key in STAGE_KEYS}
    return RtfReport(audio_seconds, stage_seconds, rtf, batch_size)
