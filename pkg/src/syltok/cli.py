"""Command-line interface.

Subcommands: synth, segment, encode, decode, eval-boundaries, tokfreq, bench.
Exit codes: 0 success, 1 usage error, 2 data error. JSON output renders
floats to 6 significant digits. Per-utterance work runs on a bounded worker
pool (--jobs, overridden by the SYLTOK_JOBS environment variable) with output
ordered by utterance id.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import fileio
from .bench import PipelineConfig, bench_rtf
from .boundary import PeakConfig, detect_boundaries
from .codec import WSegPETemplate, decode_expand, encode, token_frequency
from .evaluate import BoundaryAnnotation, aggregate, score_boundaries
from .fileio import ContainerError
from .segmenter import SegmentSet, filter_min_duration, greedy_segment, refine
from .synth import gen_corpus


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _sig6(x: float):
    return float(f"{x:.6g}")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return _sig6(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    return obj


def _emit(records, args):
    """Write records as a JSON array or JSONL, to --output or stdout."""
    fmt = getattr(args, "format", "json")
    if fmt == "jsonl":
        if not isinstance(records, list):
            records = [records]
        text = "\n".join(json.dumps(_jsonify(r)) for r in records) + "\n"
    else:
        text = json.dumps(_jsonify(records), indent=2) + "\n"
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _resolve_jobs(args) -> int:
    env = os.environ.get("SYLTOK_JOBS")
    if env is not None:
        try:
            jobs = int(env)
        except ValueError as exc:
            raise UsageError(f"SYLTOK_JOBS must be an integer, got {env!r}") from exc
    else:
        jobs = args.jobs
    if jobs < 1:
        raise UsageError("jobs must be >= 1")
    return jobs


def _map_jobs(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _add_format_flags(p, default="json"):
    p.add_argument("--format", choices=["json", "jsonl", "binary"], default=default)
    p.add_argument("--output", help="output path (default: stdout for text formats)")


def _add_segment_flags(p):
    p.add_argument("--merge-threshold", type=float, default=0.8)
    p.add_argument("--refine-threshold", type=float, default=0.7)
    p.add_argument("--refine-min-ms", type=float, default=80.0)
    p.add_argument("--no-refine", action="store_true", help="skip the short-segment refinement pass")
    p.add_argument("--normalize", action="store_true", help="L2-normalize frames before the sweep")
    p.add_argument(
        "--min-dur-ms",
        type=float,
        default=0.0,
        help="if > 0, merge segments shorter than this after segmentation (evaluation sweeps only)",
    )


def _segment_one(path: str, args) -> dict:
    if args.mode == "peaks":
        trace, rate, utt_id = fileio.read_boundary_trace(path)
        cfg = PeakConfig(args.min_peak, args.min_prominence, args.hard_prob)
        segs = detect_boundaries(trace, cfg)
        frames = None
    else:
        frames = fileio.read_frames(path)
        rate, utt_id = frames.frame_rate_hz, frames.utt_id
        segs = greedy_segment(frames, args.merge_threshold, normalize=args.normalize)
        if not args.no_refine:
            segs = refine(segs, frames, args.refine_threshold, args.refine_min_ms)
    if args.min_dur_ms > 0:
        if frames is None:
            raise UsageError("--min-dur-ms requires frame features (greedy mode)")
        segs = filter_min_duration(segs, frames, args.min_dur_ms)
    return {
        "utt_id": utt_id,
        "total_frames": segs.total_frames,
        "frame_rate_hz": rate,
        "segments": [[s.start, s.end] for s in segs],
        "boundaries_s": segs.boundary_times_s(rate),
    }


def cmd_segment(args) -> int:
    jobs = _resolve_jobs(args)
    records = _map_jobs(lambda p: _segment_one(p, args), list(args.inputs), jobs)
    records.sort(key=lambda r: r["utt_id"])
    if args.format == "binary":
        raise UsageError("segment output is JSON/JSONL only")
    _emit(records, args)
    return 0


def _load_segment_records(path) -> dict[str, SegmentSet]:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read().strip()
    records = json.loads(text) if text.startswith("[") else [json.loads(l) for l in text.splitlines() if l.strip()]
    for rec in records:
        segs = SegmentSet.from_boundaries(
            [s for s, _ in rec["segments"][1:]], rec["total_frames"]
        )
        out[rec["utt_id"]] = segs
    return out


def cmd_encode(args) -> int:
    content = fileio.read_frames(args.content)
    acoustic = fileio.read_frames(args.acoustic) if args.acoustic else content
    if args.segments:
        table = _load_segment_records(args.segments)
        if content.utt_id not in table:
            raise fileio.PayloadValueError(f"no segments found for utterance {content.utt_id!r}")
        segs = table[content.utt_id]
    else:
        segs = greedy_segment(content, args.merge_threshold, normalize=args.normalize)
        if not args.no_refine:
            segs = refine(segs, content, args.refine_threshold, args.refine_min_ms)
    stream = encode(content, acoustic, segs)
    fileio.write_tokens(stream, args.output)
    summary = {
        "utt_id": stream.utt_id,
        "n_tokens": stream.n_tokens,
        "total_frames": stream.total_frames,
        "tokfreq_hz": token_frequency(stream) if stream.n_tokens else None,
        "output": str(args.output),
    }
    if args.format in ("json", "jsonl"):
        _emit(summary, argparse.Namespace(format=args.format, output=None))
    return 0


def _template(args) -> WSegPETemplate:
    if args.template_seed is not None:
        return WSegPETemplate.random(args.pe_dim, args.template_seed)
    return WSegPETemplate.sinusoidal(args.pe_dim)


def cmd_decode(args) -> int:
    stream = fileio.read_tokens(args.input)
    frames = decode_expand(stream, _template(args))
    fileio.write_frames(frames, args.output)
    summary = {
        "utt_id": stream.utt_id,
        "n_tokens": stream.n_tokens,
        "n_frames": frames.n_frames,
        "dim": frames.dim,
        "output": str(args.output),
    }
    if args.format in ("json", "jsonl"):
        _emit(summary, argparse.Namespace(format=args.format, output=None))
    return 0


def cmd_eval_boundaries(args) -> int:
    refs = {a.utt_id: a for a in fileio.read_annotations(args.ref)}
    hyps = {a.utt_id: a for a in fileio.read_annotations(args.hyp)}
    missing = sorted(set(refs) - set(hyps))
    if missing:
        raise fileio.PayloadValueError(f"hypothesis missing utterances: {', '.join(missing)}")
    tolerance_s = args.tolerance_ms / 1000.0
    jobs = _resolve_jobs(args)

    def score(utt_id: str):
        return score_boundaries(
            refs[utt_id].boundaries_s,
            hyps[utt_id].boundaries_s,
            tolerance_s,
            include_initial=args.include_initial,
            utt_id=utt_id,
        )

    reports = _map_jobs(score, sorted(refs), jobs)
    result = {"aggregate": aggregate(reports, args.aggregate).as_dict()}
    if args.per_utt:
        result["per_utt"] = [r.as_dict() for r in reports]
    _emit(result, args)
    return 0


def cmd_tokfreq(args) -> int:
    jobs = _resolve_jobs(args)

    def one(path):
        stream = fileio.read_tokens(path)
        return {
            "utt_id": stream.utt_id,
            "n_tokens": stream.n_tokens,
            "audio_seconds": stream.duration_s,
            "tokfreq_hz": token_frequency(stream) if stream.n_tokens else None,
        }

    records = _map_jobs(one, list(args.inputs), jobs)
    records.sort(key=lambda r: r["utt_id"])
    total_tokens = sum(r["n_tokens"] for r in records)
    total_seconds = sum(r["audio_seconds"] for r in records)
    result = {
        "per_utt": records,
        "aggregate": {
            "n_tokens": total_tokens,
            "audio_seconds": total_seconds,
            "tokfreq_hz": total_tokens / total_seconds if total_seconds > 0 else None,
        },
    }
    _emit(result, args)
    return 0


def cmd_synth(args) -> int:
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus = gen_corpus(
        args.n_utts,
        args.n_segments,
        args.mean_dur_frames,
        args.dim,
        args.noise_sigma,
        seed=args.seed,
        frame_rate_hz=args.frame_rate,
    )
    annotations = []
    files = []
    for frames, segs in corpus:
        path = out_dir / f"{frames.utt_id}.syl2"
        fileio.write_frames(frames, path)
        annotations.append(
            BoundaryAnnotation(frames.utt_id, segs.boundary_times_s(frames.frame_rate_hz))
        )
        files.append(str(path))
    refs_path = out_dir / "refs.jsonl"
    fileio.write_annotations(annotations, refs_path)
    manifest = {
        "n_utts": len(files),
        "frame_rate_hz": args.frame_rate,
        "files": files,
        "refs": str(refs_path),
    }
    _emit(manifest, argparse.Namespace(format=args.format, output=None))
    return 0


def cmd_bench(args) -> int:
    corpus = gen_corpus(
        args.n_utts,
        args.n_segments,
        args.mean_dur_frames,
        args.dim,
        args.noise_sigma,
        seed=args.seed,
        frame_rate_hz=args.frame_rate,
    )
    config = PipelineConfig(
        merge_threshold=args.merge_threshold,
        refine_threshold=args.refine_threshold,
        refine_min_ms=args.refine_min_ms,
        apply_refine=not args.no_refine,
        normalize=args.normalize,
        pe_dim=args.pe_dim,
    )
    report = bench_rtf(
        config,
        [frames for frames, _ in corpus],
        batch_size=args.batch_size,
        warmup=args.warmup,
        runs=args.runs,
    )
    _emit(report.as_dict(), args)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="syltok", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("segment", help="segment frame features or boundary traces")
    p.add_argument("inputs", nargs="+", help="SYL2 frame files (greedy) or dim-1 trace files (peaks)")
    p.add_argument("--mode", choices=["greedy", "peaks"], default="greedy")
    _add_segment_flags(p)
    p.add_argument("--min-peak", type=float, default=0.2)
    p.add_argument("--min-prominence", type=float, default=0.05)
    p.add_argument("--hard-prob", type=float, default=0.8)
    p.add_argument("--jobs", type=int, default=1)
    _add_format_flags(p, default="jsonl")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("encode", help="encode frames into syllabic tokens")
    p.add_argument("--content", required=True, help="SYL2 frame file with content features")
    p.add_argument("--acoustic", help="SYL2 frame file with acoustic features (default: content)")
    p.add_argument("--segments", help="segment JSON/JSONL from the segment subcommand")
    _add_segment_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["json", "jsonl", "binary"], default="json")
    p.add_argument("--output", required=True, help="output SYL2 token file")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="expand tokens back to frame rate")
    p.add_argument("input", help="SYL2 token file")
    p.add_argument("--pe-dim", type=int, default=16)
    p.add_argument("--template-seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["json", "jsonl", "binary"], default="json")
    p.add_argument("--output", required=True, help="output SYL2 frame file")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("eval-boundaries", help="score hypothesis boundaries against references")
    p.add_argument("--ref", required=True, help="reference JSONL (utt_id, boundaries_s)")
    p.add_argument("--hyp", required=True, help="hypothesis JSONL (utt_id, boundaries_s)")
    p.add_argument("--tolerance-ms", type=float, default=50.0)
    p.add_argument("--include-initial", action="store_true", help="score the t=0 boundary too")
    p.add_argument("--aggregate", choices=["pooled", "macro"], default="pooled")
    p.add_argument("--per-utt", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    _add_format_flags(p)
    p.set_defaults(func=cmd_eval_boundaries)

    p = sub.add_parser("tokfreq", help="token-frequency statistics for token files")
    p.add_argument("inputs", nargs="+", help="SYL2 token files")
    p.add_argument("--jobs", type=int, default=1)
    _add_format_flags(p)
    p.set_defaults(func=cmd_tokfreq)

    p = sub.add_parser("bench", help="real-time-factor benchmark on synthetic data")
    p.add_argument("--n-utts", type=int, default=2)
    p.add_argument("--n-segments", type=int, default=500)
    p.add_argument("--mean-dur-frames", type=float, default=10.0)
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--noise-sigma", type=float, default=0.01)
    p.add_argument("--frame-rate", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=1)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--runs", type=int, default=10)
    _add_segment_flags(p)
    p.add_argument("--pe-dim", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1)
    _add_format_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a synthetic corpus with reference boundaries")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--n-utts", type=int, default=4)
    p.add_argument("--n-segments", type=int, default=100)
    p.add_argument("--mean-dur-frames", type=float, default=10.0)
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--noise-sigma", type=float, default=0.01)
    p.add_argument("--frame-rate", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["json", "jsonl", "binary"], default="json")
    p.set_defaults(func=cmd_synth)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ContainerError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
