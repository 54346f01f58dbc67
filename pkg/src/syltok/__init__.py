"""Syllabic-token codec and segmentation toolkit for frame-level speech features."""

from .core import FrameMatrix, SimilarityMatrix, cosine_sim, l2_normalize, similarity_matrix
from .segmenter import (
    Segment,
    SegmentSet,
    filter_min_duration,
    greedy_segment,
    oracle_segment,
    refine,
)
from .boundary import BoundaryTrace, PeakConfig, bce_loss, boundary_targets, detect_boundaries
from .codec import (
    SyllabicToken,
    TokenStream,
    WSegPETemplate,
    decode_expand,
    encode,
    token_frequency,
    wsegpe,
)
from .distill import (
    EmaState,
    StageConfig,
    ema_update,
    framewise_mse,
    sample_merge_threshold,
    segment_average_targets,
)
from .evaluate import (
    BoundaryAnnotation,
    EvalReport,
    aggregate,
    f1_score,
    match_boundaries,
    prf,
    r_value,
    score_boundaries,
)
from .fileio import read_annotations, read_frames, read_tokens, write_annotations, write_frames, write_tokens
from .bench import PipelineConfig, RtfReport, bench_rtf
from .synth import gen_corpus, gen_synthetic

__version__ = "0.1.0"

__all__ = [
    "FrameMatrix",
    "SimilarityMatrix",
    "cosine_sim",
    "l2_normalize",
    "similarity_matrix",
    "Segment",
    "SegmentSet",
    "greedy_segment",
    "oracle_segment",
    "refine",
    "filter_min_duration",
    "BoundaryTrace",
    "PeakConfig",
    "detect_boundaries",
    "boundary_targets",
    "bce_loss",
    "SyllabicToken",
    "TokenStream",
    "WSegPETemplate",
    "encode",
    "decode_expand",
    "wsegpe",
    "token_frequency",
    "EmaState",
    "StageConfig",
    "ema_update",
    "segment_average_targets",
    "framewise_mse",
    "sample_merge_threshold",
    "BoundaryAnnotation",
    "EvalReport",
    "match_boundaries",
    "prf",
    "f1_score",
    "r_value",
    "score_boundaries",
    "aggregate",
    "read_frames",
    "write_frames",
    "read_tokens",
    "write_tokens",
    "read_annotations",
    "write_annotations",
    "PipelineConfig",
    "RtfReport",
    "bench_rtf",
    "gen_synthetic",
    "gen_corpus",
]
