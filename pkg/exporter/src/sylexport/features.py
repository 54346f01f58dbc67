"""Frame-level feature extractors.

The builtin "fbank" extractor (log mel filterbank energies) needs nothing
beyond numpy and works offline. Any other model name is treated as a local
Hugging Face model directory or id and run through transformers, selecting
one hidden-state layer; that path requires torch and transformers to be
installed and the weights to be available locally.
"""

from __future__ import annotations

import numpy as np


class ModelLoadError(Exception):
    pass


def _mel_filterbank(n_mels: int, n_fft: int, sample_rate: int) -> np.ndarray:
    def hz_to_mel(f):
        return 2595.0 * np.log10(1.0 + f / 700.0)

    def mel_to_hz(m):
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)

    n_bins = n_fft // 2 + 1
    mel_points = np.linspace(hz_to_mel(0.0), hz_to_mel(sample_rate / 2.0), n_mels + 2)
    hz_points = mel_to_hz(mel_points)
    bins = np.floor((n_fft + 1) * hz_points / sample_rate).astype(int)
    bins = np.clip(bins, 0, n_bins - 1)
    fb = np.zeros((n_mels, n_bins))
    for m in range(1, n_mels + 1):
        left, center, right = bins[m - 1], bins[m], bins[m + 1]
        if center == left:
            center = min(left + 1, n_bins - 1)
        if right == center:
            right = min(center + 1, n_bins - 1)
        for k in range(left, center):
            fb[m - 1, k] = (k - left) / (center - left)
        for k in range(center, right):
            fb[m - 1, k] = (right - k) / (right - center)
    return fb


def fbank_features(
    samples: np.ndarray, sample_rate: int, frame_rate_hz: float, dim: int = 64
) -> np.ndarray:
    """Log mel energies at ``frame_rate_hz``; finite even on pure silence.

    Frames are centered, so the frame count stays within one frame of
    duration * frame_rate.
    """
    if frame_rate_hz <= 0:
        raise ValueError("frame_rate_hz must be positive")
    hop = int(round(sample_rate / frame_rate_hz))
    if hop < 1:
        raise ValueError("frame rate too high for this sample rate")
    win = 2 * hop
    padded = np.pad(samples.astype(np.float64), (hop, hop))
    if padded.shape[0] < win:
        padded = np.pad(padded, (0, win - padded.shape[0]))
    windows = np.lib.stride_tricks.sliding_window_view(padded, win)[::hop]
    spectrum = np.fft.rfft(windows * np.hanning(win), axis=1)
    power = np.abs(spectrum) ** 2
    fb = _mel_filterbank(dim, win, sample_rate)
    feats = np.log(power @ fb.T + 1e-10)
    return feats.astype(np.float32)


def _transformers_features(
    samples: np.ndarray, sample_rate: int, model_name: str, layer_index: int
) -> np.ndarray:
    try:
        import torch
        from transformers import AutoModel
    except ImportError as exc:
        raise ModelLoadError(
            f"model {model_name!r} needs torch and transformers installed"
        ) from exc
    try:
        model = AutoModel.from_pretrained(model_name)
    except Exception as exc:
        raise ModelLoadError(f"cannot load model {model_name!r}: {exc}") from exc
    model.eval()
    with torch.no_grad():
        wav = torch.as_tensor(samples, dtype=torch.float32).unsqueeze(0)
        out = model(wav, output_hidden_states=True)
    hidden = out.hidden_states
    if not 0 <= layer_index < len(hidden):
        raise ModelLoadError(
            f"layer {layer_index} out of range, model exposes {len(hidden)} layers"
        )
    return hidden[layer_index].squeeze(0).cpu().numpy().astype(np.float32)


def extract(
    samples: np.ndarray,
    sample_rate: int,
    model_name: str,
    layer_index: int,
    frame_rate_hz: float,
    feature_dim: int = 64,
) -> np.ndarray:
    if model_name == "fbank":
        if layer_index != 0:
            raise ModelLoadError("the fbank extractor exposes a single layer (index 0)")
        return fbank_features(samples, sample_rate, frame_rate_hz, feature_dim)
    return _transformers_features(samples, sample_rate, model_name, layer_index)
