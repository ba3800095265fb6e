import json

import numpy as np
import pytest
from click.testing import CliRunner

from mattekit import core_io, synth
from mattekit.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def spec_json(tmp_path):
    spec = synth.SynthSpec(
        width=24, height=24, frame_count=3, shape="feathered_disk",
        center_start=(12.0, 11.0), center_velocity=(0.0, 0.5), radius=6.0,
        feather_width=2.0, fg_color=(240, 180, 90), bg_color=(20, 60, 190),
    )
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_json()))
    return path, spec


class TestSynthAndComposite:
    def test_synth_writes_clip(self, runner, tmp_path):
        path, spec = spec_json(tmp_path)
        res = runner.invoke(main, ["synth", "--spec", str(path), "--out", str(tmp_path / "clip")])
        assert res.exit_code == 0, res.output
        alpha = core_io.load_matte_sequence(tmp_path / "clip" / "alpha")
        assert alpha.frame_count == spec.frame_count

    def test_composite_roundtrip(self, runner, tmp_path):
        path, spec = spec_json(tmp_path)
        runner.invoke(main, ["synth", "--spec", str(path), "--out", str(tmp_path / "clip")])
        frames, alpha = synth.synthesize_clip(spec)
        shape = (spec.frame_count, spec.height, spec.width, 3)
        fg = np.broadcast_to(np.asarray(spec.fg_color, np.uint8), shape).copy()
        bg = np.broadcast_to(np.asarray(spec.bg_color, np.uint8), shape).copy()
        core_io.save_frame_sequence(core_io.FrameSequence(fg), tmp_path / "fg")
        core_io.save_frame_sequence(core_io.FrameSequence(bg), tmp_path / "bg")
        res = runner.invoke(main, [
            "composite", "--fg", str(tmp_path / "fg"), "--bg", str(tmp_path / "bg"),
            "--alpha", str(tmp_path / "clip" / "alpha"), "--out", str(tmp_path / "comp"),
        ])
        assert res.exit_code == 0, res.output
        got = core_io.load_frame_sequence(tmp_path / "comp")
        assert got.frame_count == spec.frame_count


class TestDegradeTrimap:
    def test_degrade_downsample(self, runner, tmp_path):
        path, spec = spec_json(tmp_path)
        runner.invoke(main, ["synth", "--spec", str(path), "--out", str(tmp_path / "clip")])
        res = runner.invoke(main, [
            "degrade", "--kind", "downsample", "--factor", "4",
            "--in", str(tmp_path / "clip" / "masks"), "--out", str(tmp_path / "deg"),
        ])
        assert res.exit_code == 0, res.output
        assert core_io.load_mask_sequence(tmp_path / "deg").frame_count == spec.frame_count

    def test_degrade_polygon_level(self, runner, tmp_path):
        path, _ = spec_json(tmp_path)
        runner.invoke(main, ["synth", "--spec", str(path), "--out", str(tmp_path / "clip")])
        res = runner.invoke(main, [
            "degrade", "--kind", "polygon", "--level", "hard",
            "--in", str(tmp_path / "clip" / "masks"), "--out", str(tmp_path / "deg"),
        ])
        assert res.exit_code == 0, res.output
        assert "polygon_hard" in res.output

    def test_trimap(self, runner, tmp_path):
        path, spec = spec_json(tmp_path)
        runner.invoke(main, ["synth", "--spec", str(path), "--out", str(tmp_path / "clip")])
        res = runner.invoke(main, [
            "trimap", "--alpha", str(tmp_path / "clip" / "alpha"), "--kernel", "5",
            "--out", str(tmp_path / "trimaps"),
        ])
        assert res.exit_code == 0, res.output
        tri = core_io.load_trimap(tmp_path / "trimaps" / "00000.png")
        assert tri.labels.shape == (spec.height, spec.width)


class TestEval:
    def test_masks_as_input_with_outputs(self, runner, corpus_root, tmp_path):
        res = runner.invoke(main, [
            "eval", "--gt", str(corpus_root), "--masks-as-input",
            "--report", str(tmp_path / "rep.json"),
            "--csv", str(tmp_path / "rep.csv"),
            "--figure", str(tmp_path / "rep.png"),
        ])
        assert res.exit_code == 0, res.output
        agg = json.loads(res.output)
        assert set(agg) == {"MAD", "MAD_T", "MSE", "GRAD", "J", "F", "JandF"}
        assert (tmp_path / "rep.json").is_file()
        assert (tmp_path / "rep.png").stat().st_size > 0
        header = (tmp_path / "rep.csv").read_text().splitlines()[0]
        assert header.startswith("clip_id,MAD,")

    def test_perfect_external_predictions(self, runner, corpus_root, tmp_path):
        for rec in core_io.load_manifest(corpus_root):
            alpha = core_io.load_matte_sequence(corpus_root / rec.alpha_dir)
            core_io.save_matte_sequence(alpha, tmp_path / "preds" / rec.clip_id)
        res = runner.invoke(main, [
            "eval", "--gt", str(corpus_root), "--pred", str(tmp_path / "preds"),
        ])
        assert res.exit_code == 0, res.output
        agg = json.loads(res.output)
        assert agg["MAD"] == 0.0 and agg["J"] == 100.0

    def test_missing_prediction_enumerated(self, runner, corpus_root, tmp_path):
        res = runner.invoke(main, [
            "eval", "--gt", str(corpus_root), "--pred", str(tmp_path / "empty"),
        ])
        assert res.exit_code != 0
        assert "missing predictions" in str(res.exception)

    def test_requires_an_input(self, runner, corpus_root):
        res = runner.invoke(main, ["eval", "--gt", str(corpus_root)])
        assert res.exit_code != 0
        assert "provide --pred or --masks-as-input" in res.output


class TestLossCmd:
    def test_prints_json(self, runner, tmp_path, rng):
        p = core_io.MatteSequence(rng.random((2, 32, 32)))
        g = core_io.MatteSequence(rng.random((2, 32, 32)))
        core_io.save_matte_sequence(p, tmp_path / "p")
        core_io.save_matte_sequence(g, tmp_path / "g")
        res = runner.invoke(main, [
            "loss", "--pred", str(tmp_path / "p"), "--gt", str(tmp_path / "g"),
            "--lambda-lap", "0.5",
        ])
        assert res.exit_code == 0, res.output
        obj = json.loads(res.output)
        assert obj["mat"] == pytest.approx(obj["l1"] + 0.5 * obj["laplacian"], rel=1e-9)


class TestChunkPlanCmd:
    def test_default_segment_length(self, runner):
        res = runner.invoke(main, ["chunk-plan", "--frames", "27"])
        assert res.exit_code == 0
        obj = json.loads(res.output)
        assert obj["segments"] == [[0, 12], [12, 24], [24, 27]]


class TestBenchCmd:
    def bench_spec(self, corpus_root, tmp_path):
        spec = {
            "dataset_root": str(corpus_root),
            "degradations": [
                {"kind": "downsample", "factor": 8, "level_name": "down8x"},
                {"kind": "polygon", "level": "easy"},
            ],
        }
        path = tmp_path / "bench.json"
        path.write_text(json.dumps(spec))
        return path

    def test_bench_writes_report_and_figure(self, runner, corpus_root, tmp_path):
        spec = self.bench_spec(corpus_root, tmp_path)
        out = tmp_path / "bench" / "report.json"
        res = runner.invoke(main, [
            "bench", "--spec", str(spec), "--out", str(out),
            "--work-dir", str(tmp_path / "work"),
        ])
        assert res.exit_code == 0, res.output
        obj = json.loads(out.read_text())
        labels = {r["degradation"] for r in obj["table"]}
        assert labels == {"gt_mask", "down8x", "polygon_easy"}
        assert out.with_suffix(".png").stat().st_size > 0
        assert (tmp_path / "work" / "degraded" / "down8x").is_dir()


class TestMakeDatasetCmd:
    def test_roundtrip(self, runner, corpus_root, tmp_path):
        for rec in core_io.load_manifest(corpus_root):
            alpha = core_io.load_matte_sequence(corpus_root / rec.alpha_dir)
            core_io.save_matte_sequence(alpha, tmp_path / "preds" / rec.clip_id)
        res = runner.invoke(main, [
            "make-dataset", "--manifest", str(corpus_root),
            "--pred", str(tmp_path / "preds"), "--out", str(tmp_path / "out"),
        ])
        assert res.exit_code == 0, res.output
        assert len(core_io.load_manifest(tmp_path / "out")) == 6
