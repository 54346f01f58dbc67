"""Command-line entry point for the exporter."""

from __future__ import annotations

import argparse
import json
import sys

from .audio import AudioReadError
from .export import ExportManifest, export_features
from .features import ModelLoadError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sylexport", description=__doc__)
    ap.add_argument("--audio", required=True, help="input WAV file")
    ap.add_argument("--output", required=True, help="output SYL2 frame file")
    ap.add_argument("--utt-id", default="", help="utterance id (default: audio file stem)")
    ap.add_argument("--model", default="fbank",
                    help="'fbank' or a local transformers model id/path")
    ap.add_argument("--layer", type=int, default=0, help="hidden-state layer to export")
    ap.add_argument("--frame-rate", type=float, default=50.0)
    ap.add_argument("--feature-dim", type=int, default=64,
                    help="feature dimension (fbank only)")
    return ap


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    manifest = ExportManifest(
        audio_path=args.audio,
        output_path=args.output,
        utt_id=args.utt_id,
        model_name=args.model,
        layer_index=args.layer,
        frame_rate_hz=args.frame_rate,
        feature_dim=args.feature_dim,
    )
    try:
        summary = export_features(manifest)
    except (AudioReadError, ModelLoadError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary, indent=2))
    return 0


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
