"""Command line interface."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import core_io, pipeline, report, synth
from .compositing import composite
from .core_io import SequenceError
from .degradation import POLYGON_EPSILON, DegradationConfig
from .losses import l1_loss, laplacian_pyramid_loss, mat_loss
from .metrics import MetricConfig, EvalReport, evaluate_clip
from .morphology import make_trimap


@click.group()
def main():
    """Video matting evaluation and data-pipeline toolkit."""


@main.command("synth")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def synth_cmd(spec_path, out_dir):
    """Generate a synthetic clip (frames, masks, alpha) from a spec JSON."""
    spec = synth.load_spec(spec_path)
    synth.write_clip(spec, out_dir)
    click.echo(f"wrote clip to {out_dir}")


@main.command("composite")
@click.option("--fg", required=True, type=click.Path(exists=True))
@click.option("--bg", required=True, type=click.Path(exists=True))
@click.option("--alpha", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def composite_cmd(fg, bg, alpha, out):
    """Blend a foreground over a background using an alpha matte."""
    result = composite(
        core_io.load_frame_sequence(fg),
        core_io.load_frame_sequence(bg),
        core_io.load_matte_sequence(alpha),
    )
    core_io.save_frame_sequence(result, out)
    click.echo(f"wrote {result.frame_count} frames to {out}")


@main.command("degrade")
@click.option("--kind", required=True, type=click.Choice(["downsample", "polygon"]))
@click.option("--factor", type=int, default=None)
@click.option("--epsilon-fraction", type=float, default=None)
@click.option("--level", type=click.Choice(sorted(POLYGON_EPSILON)), default=None,
              help="Named polygon difficulty level (sets --epsilon-fraction).")
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def degrade_cmd(kind, factor, epsilon_fraction, level, in_dir, out_dir):
    """Apply a mask degradation operator to a mask directory."""
    if kind == "polygon" and epsilon_fraction is None and level is not None:
        epsilon_fraction = POLYGON_EPSILON[level]
    cfg = DegradationConfig(
        kind=kind,
        downsample_factor=factor,
        epsilon_fraction=epsilon_fraction,
        level_name=f"polygon_{level}" if level else "",
    )
    from .degradation import apply_degradation

    masks = core_io.load_mask_sequence(in_dir)
    core_io.save_mask_sequence(apply_degradation(masks, cfg), out_dir)
    click.echo(f"wrote degraded masks ({cfg.label}) to {out_dir}")


@main.command("trimap")
@click.option("--alpha", required=True, type=click.Path(exists=True))
@click.option("--kernel", type=int, default=10, show_default=True)
@click.option("--out", required=True, type=click.Path())
def trimap_cmd(alpha, kernel, out):
    """Generate per-frame trimaps from a ground-truth alpha directory."""
    m = core_io.load_matte_sequence(alpha)
    out = Path(out)
    for t in range(m.frame_count):
        core_io.save_trimap(make_trimap(m.data[t], kernel), out / f"{t:05d}.png")
    click.echo(f"wrote {m.frame_count} trimaps to {out}")


def _metric_config(obj: dict | None) -> MetricConfig:
    return MetricConfig(**obj) if obj else MetricConfig()


@main.command("eval")
@click.option("--gt", "gt_root", required=True, type=click.Path(exists=True))
@click.option("--pred", "pred_dir", type=click.Path(), default=None)
@click.option("--masks-as-input", is_flag=True,
              help="Score the dataset's own masks embedded as mattes.")
@click.option("--bin-threshold", type=float, default=0.5, show_default=True)
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--csv", "csv_path", type=click.Path(), default=None)
@click.option("--figure", "figure_path", type=click.Path(), default=None)
def eval_cmd(gt_root, pred_dir, masks_as_input, bin_threshold, report_path, csv_path, figure_path):
    """Evaluate matte predictions against a ground-truth dataset."""
    if pred_dir is None and not masks_as_input:
        raise click.UsageError("provide --pred or --masks-as-input")
    records = core_io.load_manifest(gt_root)
    root = Path(gt_root)
    cfg = MetricConfig()
    if pred_dir is not None:
        missing = [r.clip_id for r in records if not (Path(pred_dir) / r.clip_id).is_dir()]
        if missing:
            raise SequenceError("missing predictions for clips: " + ", ".join(sorted(missing)))
    per_clip = {}
    for rec in sorted(records, key=lambda r: r.clip_id):
        gt_alpha = core_io.load_matte_sequence(root / rec.alpha_dir)
        if masks_as_input:
            pred = core_io.mask_as_matte(core_io.load_mask_sequence(root / rec.masks_dir))
        else:
            pred = core_io.load_matte_sequence(Path(pred_dir) / rec.clip_id)
        per_clip[rec.clip_id] = evaluate_clip(pred, gt_alpha, cfg, bin_threshold)
    rep = EvalReport(per_clip, cfg, "input masks" if masks_as_input else str(pred_dir))
    if report_path:
        report.write_report_json(rep, report_path)
    if csv_path:
        report.write_report_csv(rep, csv_path)
    if figure_path:
        report.render_report_figure(rep, figure_path)
    click.echo(json.dumps(rep.aggregate, indent=2, sort_keys=True))


@main.command("loss")
@click.option("--pred", required=True, type=click.Path(exists=True))
@click.option("--gt", required=True, type=click.Path(exists=True))
@click.option("--lambda-lap", type=float, default=1.0, show_default=True)
@click.option("--levels", type=int, default=5, show_default=True)
def loss_cmd(pred, gt, lambda_lap, levels):
    """Print reference loss values for two matte directories as JSON."""
    p = core_io.load_matte_sequence(pred)
    g = core_io.load_matte_sequence(gt)
    if p.shape != g.shape:
        raise SequenceError(f"shape mismatch: {p.shape} vs {g.shape}")
    l1_vals, lap_vals, mat_vals = [], [], []
    for t in range(p.frame_count):
        l1_vals.append(l1_loss(p.data[t], g.data[t]).value)
        lap_vals.append(laplacian_pyramid_loss(p.data[t], g.data[t], levels).value)
        mat_vals.append(mat_loss(p.data[t], g.data[t], lambda_lap, levels).value)
    click.echo(json.dumps({
        "l1": sum(l1_vals) / len(l1_vals),
        "laplacian": sum(lap_vals) / len(lap_vals),
        "mat": sum(mat_vals) / len(mat_vals),
        "lambda_lap": lambda_lap,
    }, indent=2, sort_keys=True))


@main.command("chunk-plan")
@click.option("--frames", "total", required=True, type=int)
@click.option("--segment-length", "n", type=int, default=12, show_default=True)
def chunk_plan_cmd(total, n):
    """Print the 12-frame (by default) segment plan for a clip length."""
    plan = pipeline.plan_chunks(total, n)
    click.echo(json.dumps({"segment_length": n, "segments": list(plan.segments)}))


def _parse_degradation(obj: dict) -> DegradationConfig:
    kind = obj["kind"]
    if kind == "polygon" and "epsilon_fraction" not in obj and "level" in obj:
        return DegradationConfig(
            kind="polygon",
            epsilon_fraction=POLYGON_EPSILON[obj["level"]],
            level_name=obj.get("level_name", f"polygon_{obj['level']}"),
        )
    return DegradationConfig(
        kind=kind,
        downsample_factor=obj.get("factor", obj.get("downsample_factor")),
        epsilon_fraction=obj.get("epsilon_fraction"),
        level_name=obj.get("level_name", ""),
    )


@main.command("bench")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--pred-root", type=click.Path(), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--work-dir", type=click.Path(), default=None,
              help="Where degraded masks are emitted (default: alongside --out).")
@click.option("--figure/--no-figure", default=True, show_default=True)
def bench_cmd(spec_path, pred_root, out_path, work_dir, figure):
    """Run the degradation benchmark described by a spec JSON."""
    obj = json.loads(Path(spec_path).read_text("utf-8"))
    spec = pipeline.BenchmarkSpec(
        dataset_root=Path(obj["dataset_root"]),
        degradations=tuple(_parse_degradation(d) for d in obj.get("degradations", [])),
        prediction_source=obj.get("prediction_source", "input_mask_as_matte"),
        metric_config=_metric_config(obj.get("metric_config")),
        include_identity=obj.get("include_identity", True),
        bin_threshold=obj.get("bin_threshold", 0.5),
    )
    pred_root = pred_root or obj.get("pred_root")
    out_path = Path(out_path)
    work_dir = Path(work_dir) if work_dir else out_path.parent
    reports = pipeline.run_benchmark(spec, pred_root=pred_root, out_root=work_dir)
    result = pipeline.benchmark_report_json(reports)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(result, indent=2, sort_keys=True) + "\n", "utf-8")
    if figure:
        report.render_benchmark_figure(result, out_path.with_suffix(".png"))
    click.echo(f"wrote benchmark report to {out_path}")


@main.command("make-dataset")
@click.option("--manifest", "manifest_root", required=True, type=click.Path(exists=True))
@click.option("--pred", "pred_root", required=True, type=click.Path(exists=True))
@click.option("--out", "out_root", required=True, type=click.Path())
@click.option("--symlink-frames", is_flag=True, help="Symlink frames instead of copying.")
def make_dataset_cmd(manifest_root, pred_root, out_root, symlink_frames):
    """Write a pseudo-labeled dataset: source frames/masks, predicted alpha."""
    records = pipeline.write_pseudo_dataset(
        manifest_root, pred_root, out_root, copy_frames=not symlink_frames
    )
    click.echo(f"wrote {len(records)} clips to {out_root}")


if __name__ == "__main__":
    sys.exit(main())
