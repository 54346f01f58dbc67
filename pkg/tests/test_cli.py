import json

import numpy as np
import pytest

from syltok import BoundaryTrace, fileio
from syltok.cli import cli_main


def run(capsys, *argv):
    rc = cli_main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def make_corpus(tmp_path, capsys, n_utts=2, n_segments=60, seed=7):
    out_dir = tmp_path / "corpus"
    rc, out = run(
        capsys,
        "synth",
        "--output", str(out_dir),
        "--n-utts", str(n_utts),
        "--n-segments", str(n_segments),
        "--seed", str(seed),
    )
    assert rc == 0
    return out_dir, json.loads(out)


def test_synth_segment_encode_decode_pipeline(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys)
    assert manifest["n_utts"] == 2

    segs_path = tmp_path / "segs.jsonl"
    rc, _ = run(capsys, "segment", *manifest["files"], "--output", str(segs_path))
    assert rc == 0 and segs_path.exists()

    tokens_path = tmp_path / "utt0.tokens.syl2"
    rc, out = run(
        capsys,
        "encode",
        "--content", manifest["files"][0],
        "--segments", str(segs_path),
        "--output", str(tokens_path),
    )
    assert rc == 0
    summary = json.loads(out)
    assert summary["n_tokens"] > 0

    decoded_path = tmp_path / "decoded.syl2"
    rc, out = run(capsys, "decode", str(tokens_path), "--output", str(decoded_path))
    assert rc == 0
    info = json.loads(out)
    frames = fileio.read_frames(decoded_path)
    assert frames.n_frames == summary["total_frames"]
    assert frames.dim == info["dim"]
    # content columns of the decoded stream are piecewise constant per token
    stream = fileio.read_tokens(tokens_path)
    pos = 0
    for tok in stream.tokens[:5]:
        block = frames.data[pos:pos + tok.duration_frames, : tok.content.shape[0]]
        np.testing.assert_allclose(block, np.tile(block[0], (tok.duration_frames, 1)), atol=1e-6)
        pos += tok.duration_frames


def test_eval_boundaries_identical_is_100(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys)
    rc, out = run(
        capsys,
        "eval-boundaries",
        "--ref", manifest["refs"],
        "--hyp", manifest["refs"],
    )
    assert rc == 0
    report = json.loads(out)["aggregate"]
    assert report["f1"] == 100.0
    assert report["precision"] == 100.0


def test_segment_then_eval_high_f1(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_segments=120)
    segs_path = tmp_path / "hyp.jsonl"
    rc, _ = run(capsys, "segment", *manifest["files"], "--output", str(segs_path))
    assert rc == 0
    rc, out = run(
        capsys,
        "eval-boundaries",
        "--ref", manifest["refs"],
        "--hyp", str(segs_path),
        "--per-utt",
    )
    assert rc == 0
    result = json.loads(out)
    assert result["aggregate"]["f1"] > 99.0
    assert len(result["per_utt"]) == 2


def test_tokfreq_five_segments_per_second(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_utts=3, n_segments=100)
    token_files = []
    for k, f in enumerate(manifest["files"]):
        tok = tmp_path / f"tok{k}.syl2"
        rc, _ = run(capsys, "encode", "--content", f, "--output", str(tok))
        assert rc == 0
        token_files.append(str(tok))
    rc, out = run(capsys, "tokfreq", *token_files)
    assert rc == 0
    agg = json.loads(out)["aggregate"]
    assert agg["tokfreq_hz"] == pytest.approx(5.0, abs=0.1)


def test_segment_peaks_mode(tmp_path, capsys):
    probs = np.zeros(50)
    probs[10] = 0.9
    probs[30] = 0.9
    trace_path = tmp_path / "trace.syl2"
    fileio.write_boundary_trace(BoundaryTrace(probs), 50.0, trace_path)
    rc, out = run(capsys, "segment", str(trace_path), "--mode", "peaks", "--format", "json")
    assert rc == 0
    rec = json.loads(out)[0]
    assert rec["segments"] == [[0, 10], [10, 30], [30, 50]]


def test_usage_error_exit_1(capsys):
    assert cli_main(["segment"]) == 1  # missing inputs
    assert cli_main(["--bogus"]) == 1
    assert cli_main(["nosuchcommand"]) == 1
    assert cli_main([]) == 1


def test_data_error_exit_2(tmp_path, capsys):
    missing = tmp_path / "missing.syl2"
    assert cli_main(["segment", str(missing)]) == 2
    bad = tmp_path / "bad.syl2"
    bad.write_bytes(b"JUNKJUNKJUNKJUNK" + b"\x00" * 32)
    assert cli_main(["segment", str(bad)]) == 2


def test_unsupported_binary_format_is_usage_error(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_utts=1)
    assert cli_main(["segment", manifest["files"][0], "--format", "binary"]) == 1


def test_eval_missing_hypothesis_utterance_is_data_error(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_utts=2)
    partial = tmp_path / "partial.jsonl"
    partial.write_text(open(manifest["refs"]).readline())
    assert cli_main(["eval-boundaries", "--ref", manifest["refs"], "--hyp", str(partial)]) == 2


def test_synth_deterministic_given_seed(tmp_path, capsys):
    d1 = tmp_path / "c1"
    d2 = tmp_path / "c2"
    for d in (d1, d2):
        rc, _ = run(capsys, "synth", "--output", str(d), "--n-utts", "1", "--seed", "5")
        assert rc == 0
    assert (d1 / "utt_0000.syl2").read_bytes() == (d2 / "utt_0000.syl2").read_bytes()
    assert (d1 / "refs.jsonl").read_text() == (d2 / "refs.jsonl").read_text()


def test_json_six_significant_digits(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_utts=1, n_segments=33)
    tok = tmp_path / "t.syl2"
    rc, _ = run(capsys, "encode", "--content", manifest["files"][0], "--output", str(tok))
    assert rc == 0
    rc, out = run(capsys, "tokfreq", str(tok))
    assert rc == 0
    text_value = json.loads(out)["aggregate"]["tokfreq_hz"]
    assert text_value == float(f"{text_value:.6g}")


def test_jobs_env_override(tmp_path, capsys, monkeypatch):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_utts=3)
    monkeypatch.setenv("SYLTOK_JOBS", "2")
    rc, out = run(capsys, "segment", *manifest["files"], "--format", "json")
    assert rc == 0
    recs = json.loads(out)
    assert [r["utt_id"] for r in recs] == sorted(r["utt_id"] for r in recs)
    monkeypatch.setenv("SYLTOK_JOBS", "zero")
    assert cli_main(["segment", *manifest["files"]]) == 1


def test_bench_subcommand_smoke(capsys):
    rc, out = run(
        capsys,
        "bench",
        "--n-utts", "1",
        "--n-segments", "40",
        "--warmup", "0",
        "--runs", "2",
    )
    assert rc == 0
    report = json.loads(out)
    assert report["rtf"]["e2e"] > 0
    assert report["stage_seconds"]["e2e"] == pytest.approx(
        report["stage_seconds"]["total_encode"] + report["stage_seconds"]["decode"], rel=0.02
    )


def test_min_dur_filter_flag(tmp_path, capsys):
    out_dir, manifest = make_corpus(tmp_path, capsys, n_utts=1, n_segments=80)
    rc, out_plain = run(capsys, "segment", manifest["files"][0], "--format", "json")
    assert rc == 0
    rc, out_filtered = run(
        capsys, "segment", manifest["files"][0], "--min-dur-ms", "120", "--format", "json"
    )
    assert rc == 0
    n_plain = len(json.loads(out_plain)[0]["segments"])
    n_filtered = len(json.loads(out_filtered)[0]["segments"])
    assert n_filtered <= n_plain
