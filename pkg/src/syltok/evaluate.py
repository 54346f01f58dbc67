"""Boundary-detection scoring and corpus-level aggregation.

Greedy time-ordered matching at a fixed tolerance, precision/recall/F1, the
hit-rate/over-segmentation composite score, and pooled or macro aggregation
over per-utterance reports. Metrics are stored as fractions and rendered as
percentages in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_TOLERANCE_S = 0.05
_INITIAL_EPS_S = 1e-9


@dataclass
class BoundaryAnnotation:
    """Reference boundary times (seconds) for one utterance."""

    utt_id: str
    boundaries_s: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        times = [float(t) for t in self.boundaries_s]
        if any(t < 0 for t in times):
            raise ValueError("boundary times must be non-negative")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("boundary times must be strictly increasing")
        self.boundaries_s = times


@dataclass
class EvalReport:
    """Detection metrics (fractions) plus optional token-frequency statistics."""

    precision: float
    recall: float
    f1: float
    r_value: float | None
    n_ref: int
    n_hyp: int
    n_hit: int
    utt_id: str | None = None
    tokfreq_hz: float | None = None
    n_tokens: int | None = None
    audio_seconds: float | None = None

    def __post_init__(self) -> None:
        if self.n_hit > min(self.n_ref, self.n_hyp):
            raise ValueError("n_hit cannot exceed min(n_ref, n_hyp)")

    def as_dict(self, percent: bool = True) -> dict:
        scale = 100.0 if percent else 1.0
        out = {
            "precision": self.precision * scale,
            "recall": self.recall * scale,
            "f1": self.f1 * scale,
            "r_value": None if self.r_value is None else self.r_value * scale,
            "n_ref": self.n_ref,
            "n_hyp": self.n_hyp,
            "n_hit": self.n_hit,
        }
        if self.utt_id is not None:
            out["utt_id"] = self.utt_id
        if self.tokfreq_hz is not None:
            out["tokfreq_hz"] = self.tokfreq_hz
        if self.n_tokens is not None:
            out["n_tokens"] = self.n_tokens
        if self.audio_seconds is not None:
            out["audio_seconds"] = self.audio_seconds
        return out


def match_boundaries(
    ref_s: list[float], hyp_s: list[float], tolerance_s: float = DEFAULT_TOLERANCE_S
) -> tuple[int, int, int]:
    """Greedy one-to-one matching of sorted boundary lists.

    References are scanned left to right; each takes the nearest unmatched
    hypothesis within the tolerance (ties go to the earlier hypothesis). Each
    hypothesis matches at most one reference. Returns (n_hit, n_ref, n_hyp).
    """
    if any(b < a for a, b in zip(ref_s, ref_s[1:])):
        raise ValueError("reference boundaries must be sorted")
    if any(b < a for a, b in zip(hyp_s, hyp_s[1:])):
        raise ValueError("hypothesis boundaries must be sorted")
    matched = [False] * len(hyp_s)
    hits = 0
    for r in ref_s:
        best = None
        best_dist = None
        for j, h in enumerate(hyp_s):
            if matched[j]:
                continue
            if h > r + tolerance_s:
                break
            dist = abs(h - r)
            # Strict < keeps the earlier hypothesis on ties.
            if dist <= tolerance_s and (best is None or dist < best_dist):
                best, best_dist = j, dist
        if best is not None:
            matched[best] = True
            hits += 1
    return hits, len(ref_s), len(hyp_s)


def prf(n_hit: int, n_ref: int, n_hyp: int) -> tuple[float, float, float]:
    """Precision, recall, F1 from match counts; zero denominators yield 0."""
    if min(n_hit, n_ref, n_hyp) < 0:
        raise ValueError("counts must be non-negative")
    precision = n_hit / n_hyp if n_hyp else 0.0
    recall = n_hit / n_ref if n_ref else 0.0
    return precision, recall, f1_score(precision, recall)


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def r_value(precision: float, recall: float) -> float:
    """Composite of hit rate and over-segmentation; 1.0 at a perfect match.

    Uses the standard hit-rate (HR = 100 * recall) and over-segmentation
    (OS = 100 * (recall / precision - 1)) form:

        r1 = sqrt((100 - HR)^2 + OS^2)
        r2 = (-OS + HR - 100) / sqrt(2)
        R  = 1 - (|r1| + |r2|) / 200

    Undefined (raises) at precision 0. Extreme over-segmentation can push the
    value below 0.
    """
    if precision <= 0.0:
        raise ValueError("r_value is undefined at precision 0")
    hr = 100.0 * recall
    os_ = 100.0 * (recall / precision - 1.0)
    r1 = math.hypot(100.0 - hr, os_)
    r2 = (-os_ + hr - 100.0) / math.sqrt(2.0)
    return 1.0 - (abs(r1) + abs(r2)) / 200.0


def strip_initial(times_s: list[float]) -> list[float]:
    """Drop the utterance-initial boundary (t = 0) from a time list."""
    return [t for t in times_s if t > _INITIAL_EPS_S]


def score_boundaries(
    ref_s: list[float],
    hyp_s: list[float],
    tolerance_s: float = DEFAULT_TOLERANCE_S,
    include_initial: bool = False,
    utt_id: str | None = None,
) -> EvalReport:
    """Match and score one utterance; t = 0 is excluded from both sides by default."""
    if not include_initial:
        ref_s = strip_initial(ref_s)
        hyp_s = strip_initial(hyp_s)
    n_hit, n_ref, n_hyp = match_boundaries(ref_s, hyp_s, tolerance_s)
    precision, recall, f1 = prf(n_hit, n_ref, n_hyp)
    r = r_value(precision, recall) if precision > 0 else None
    return EvalReport(precision, recall, f1, r, n_ref, n_hyp, n_hit, utt_id=utt_id)


def _pooled_tokfreq(reports: list[EvalReport]) -> tuple[float | None, int | None, float | None]:
    usable = [r for r in reports if r.n_tokens is not None and r.audio_seconds is not None]
    if not usable:
        return None, None, None
    total_tokens = sum(r.n_tokens for r in usable)
    total_seconds = sum(r.audio_seconds for r in usable)
    if total_seconds <= 0:
        return None, total_tokens, total_seconds
    return total_tokens / total_seconds, total_tokens, total_seconds


def aggregate(reports: list[EvalReport], mode: str = "pooled") -> EvalReport:
    """Corpus-level report: pooled recomputes from summed counts, macro averages.

    Token frequency is always pooled (total tokens / total seconds) since a
    mean of rates would weight short utterances up.
    """
    if not reports:
        raise ValueError("cannot aggregate an empty report list")
    if mode not in ("pooled", "macro"):
        raise ValueError(f"unknown aggregation mode {mode!r}")
    n_ref = sum(r.n_ref for r in reports)
    n_hyp = sum(r.n_hyp for r in reports)
    n_hit = sum(r.n_hit for r in reports)
    tokfreq, total_tokens, total_seconds = _pooled_tokfreq(reports)
    if mode == "pooled":
        precision, recall, f1 = prf(n_hit, n_ref, n_hyp)
        r = r_value(precision, recall) if precision > 0 else None
    else:
        precision = sum(r.precision for r in reports) / len(reports)
        recall = sum(r.recall for r in reports) / len(reports)
        f1 = sum(r.f1 for r in reports) / len(reports)
        defined = [r.r_value for r in reports if r.r_value is not None]
        r = sum(defined) / len(defined) if defined else None
    return EvalReport(
        precision,
        recall,
        f1,
        r,
        n_ref,
        n_hyp,
        n_hit,
        tokfreq_hz=tokfreq,
        n_tokens=total_tokens,
        audio_seconds=total_seconds,
    )
