"""Minimal WAV reading: PCM 16/32-bit and 8-bit unsigned, mono-folded."""

from __future__ import annotations

import wave

import numpy as np


class AudioReadError(Exception):
    pass


def read_wav(path) -> tuple[np.ndarray, int]:
    """Return (mono float64 samples in [-1, 1], sample_rate)."""
    try:
        with wave.open(str(path), "rb") as wf:
            n_channels = wf.getnchannels()
            sampwidth = wf.getsampwidth()
            sample_rate = wf.getframerate()
            n_frames = wf.getnframes()
            raw = wf.readframes(n_frames)
    except (wave.Error, OSError, EOFError) as exc:
        raise AudioReadError(f"cannot read {path}: {exc}") from exc

    if sampwidth == 2:
        samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    elif sampwidth == 4:
        samples = np.frombuffer(raw, dtype="<i4").astype(np.float64) / 2147483648.0
    elif sampwidth == 1:
        samples = (np.frombuffer(raw, dtype="u1").astype(np.float64) - 128.0) / 128.0
    else:
        raise AudioReadError(f"unsupported sample width {sampwidth} bytes in {path}")

    if n_channels > 1:
        samples = samples.reshape(-1, n_channels).mean(axis=1)
    if sample_rate <= 0:
        raise AudioReadError(f"bad sample rate in {path}")
    return samples, sample_rate
