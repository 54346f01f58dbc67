"""Export orchestration: audio file in, SYL2 frame file out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .audio import read_wav
from .container import write_frames_syl2
from .features import extract


@dataclass
class ExportManifest:
    """One export job."""

    audio_path: str
    output_path: str
    utt_id: str = ""
    model_name: str = "fbank"
    layer_index: int = 0
    frame_rate_hz: float = 50.0
    feature_dim: int = 64

    def __post_init__(self) -> None:
        if self.layer_index < 0:
            raise ValueError("layer_index must be >= 0")
        if self.frame_rate_hz <= 0:
            raise ValueError("frame_rate_hz must be positive")
        if not self.utt_id:
            self.utt_id = Path(self.audio_path).stem


def export_features(manifest: ExportManifest) -> dict:
    """Run the extractor and write a SYL2 kind-0 file; returns a summary dict.

    The produced frame count must stay within one frame of
    audio_duration * frame_rate_hz, otherwise the chosen model's hop does not
    match the requested rate and the export fails.
    """
    samples, sample_rate = read_wav(manifest.audio_path)
    feats = extract(
        samples,
        sample_rate,
        manifest.model_name,
        manifest.layer_index,
        manifest.frame_rate_hz,
        manifest.feature_dim,
    )
    expected = samples.shape[0] / sample_rate * manifest.frame_rate_hz
    if abs(feats.shape[0] - expected) > 1.0:
        raise ValueError(
            f"extractor produced {feats.shape[0]} frames, expected ~{expected:.1f}; "
            f"frame_rate_hz does not match the model hop"
        )
    write_frames_syl2(feats, manifest.frame_rate_hz, manifest.output_path)
    return {
        "utt_id": manifest.utt_id,
        "audio_path": str(manifest.audio_path),
        "output_path": str(manifest.output_path),
        "n_frames": int(feats.shape[0]),
        "dim": int(feats.shape[1]),
        "frame_rate_hz": manifest.frame_rate_hz,
        "audio_seconds": samples.shape[0] / sample_rate,
    }
