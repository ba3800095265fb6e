"""Chunked inference planning, prediction merging, the benchmark harness,
and the pseudo-label dataset writer."""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import core_io
from .core_io import ClipRecord, MaskSequence, MatteSequence, SequenceError
from .degradation import DegradationConfig, apply_degradation
from .metrics import MetricConfig, EvalReport, evaluate_clip


@dataclass(frozen=True)
class ChunkPlan:
    segment_length: int
    segments: tuple  # ((start, end), ...) half-open, contiguous

    @property
    def total(self) -> int:
        return self.segments[-1][1] if self.segments else 0


def plan_chunks(total: int, n: int = 12) -> ChunkPlan:
    """Split [0, total) into contiguous segments of length n; the last
    segment may be shorter."""
    if total < 1 or n < 1:
        raise ValueError(f"T and n must be >= 1, got T={total}, n={n}")
    starts = range(0, total, n)
    return ChunkPlan(n, tuple((s, min(s + n, total)) for s in starts))


def split_sequence(m: MatteSequence, plan: ChunkPlan) -> list[MatteSequence]:
    if m.frame_count != plan.total:
        raise ValueError(f"sequence length {m.frame_count} does not match plan total {plan.total}")
    return [MatteSequence(m.data[s:e]) for s, e in plan.segments]


def merge_predictions(segments: list[MatteSequence], plan: ChunkPlan) -> MatteSequence:
    """Concatenate per-segment predictions back into one sequence."""
    if len(segments) != len(plan.segments):
        raise ValueError(f"expected {len(plan.segments)} segments, got {len(segments)}")
    for i, (seg, (s, e)) in enumerate(zip(segments, plan.segments)):
        if seg.frame_count != e - s:
            raise ValueError(f"segment {i} has length {seg.frame_count}, expected {e - s}")
    return MatteSequence(np.concatenate([seg.data for seg in segments]))


@dataclass(frozen=True)
class BenchmarkSpec:
    dataset_root: Path
    degradations: tuple  # DegradationConfig entries
    prediction_source: str = "input_mask_as_matte"  # or "external_dir"
    metric_config: MetricConfig = field(default_factory=MetricConfig)
    include_identity: bool = True
    bin_threshold: float = 0.5

    def __post_init__(self):
        if self.prediction_source not in ("input_mask_as_matte", "external_dir"):
            raise ValueError(f"unknown prediction source: {self.prediction_source!r}")
        if not self.degradations and not self.include_identity:
            raise ValueError("at least one degradation (or the identity case) is required")


def _degradation_cases(spec: BenchmarkSpec) -> list[tuple]:
    cases = []
    if spec.include_identity:
        cases.append(("gt_mask", None))
    cases.extend((cfg.label, cfg) for cfg in spec.degradations)
    return cases


def run_benchmark(spec: BenchmarkSpec, pred_root=None, out_root=None) -> dict:
    """Score every (degradation x clip) cell of the benchmark.

    For each degradation the ground-truth masks are degraded, written under
    ``<out_root>/degraded/<label>/<clip_id>/`` for external predictors, and
    scored twice against the ground-truth alpha: once as the "Input" row
    (mask embedded as matte) and once as the prediction. Returns
    {label: {"input": EvalReport, "prediction": EvalReport}} plus a
    combined row-per-degradation table under "table".
    """
    records = core_io.load_manifest(spec.dataset_root)
    if not records:
        raise SequenceError("no clips in manifest")
    root = Path(spec.dataset_root)
    cases = _degradation_cases(spec)

    if spec.prediction_source == "external_dir":
        if pred_root is None:
            raise ValueError("prediction_source external_dir requires pred_root")
        missing = [
            f"{label}/{rec.clip_id}"
            for label, _ in cases
            for rec in records
            if not (Path(pred_root) / label / rec.clip_id).is_dir()
        ]
        if missing:
            raise SequenceError("missing predictions: " + ", ".join(missing))

    reports: dict = {}
    for label, cfg in cases:
        input_rows = {}
        pred_rows = {}
        for rec in sorted(records, key=lambda r: r.clip_id):
            gt_alpha = core_io.load_matte_sequence(root / rec.alpha_dir)
            masks = core_io.load_mask_sequence(root / rec.masks_dir)
            degraded = masks if cfg is None else apply_degradation(masks, cfg)
            if out_root is not None:
                core_io.save_mask_sequence(
                    degraded, Path(out_root) / "degraded" / label / rec.clip_id
                )
            input_matte = core_io.mask_as_matte(degraded)
            input_rows[rec.clip_id] = evaluate_clip(
                input_matte, gt_alpha, spec.metric_config, spec.bin_threshold
            )
            if spec.prediction_source == "input_mask_as_matte":
                pred_matte = input_matte
            else:
                pred_matte = core_io.load_matte_sequence(Path(pred_root) / label / rec.clip_id)
            pred_rows[rec.clip_id] = evaluate_clip(
                pred_matte, gt_alpha, spec.metric_config, spec.bin_threshold
            )
        reports[label] = {
            "input": EvalReport(input_rows, spec.metric_config, f"{label} (input mask)"),
            "prediction": EvalReport(pred_rows, spec.metric_config, f"{label} (prediction)"),
        }
    return reports


def benchmark_report_json(reports: dict) -> dict:
    """Stable JSON form: per-degradation reports plus a combined table."""
    out = {"degradations": {}, "table": []}
    for label in reports:
        out["degradations"][label] = {
            "input": reports[label]["input"].to_json(),
            "prediction": reports[label]["prediction"].to_json(),
        }
        for role in ("input", "prediction"):
            row = {"degradation": label, "role": role}
            row.update(reports[label][role].aggregate)
            out["table"].append(row)
    return out


def write_pseudo_dataset(
    manifest_root,
    predictions_root,
    out_root,
    copy_frames: bool = True,
) -> list[ClipRecord]:
    """Assemble a dataset whose alpha labels are externally produced mattes.

    Frames and masks come from the source dataset, alpha from
    ``<predictions_root>/<clip_id>/``. Every clip is validated before
    anything is written, and each clip directory is staged and renamed so a
    failure leaves no partial clip behind.
    """
    records = core_io.load_manifest(manifest_root)
    if not records:
        raise SequenceError("no clips in manifest")
    src_root = Path(manifest_root)
    predictions_root = Path(predictions_root)
    out_root = Path(out_root)

    # Validate all predictions up front: all-or-nothing per run.
    for rec in records:
        pred_dir = predictions_root / rec.clip_id
        for i in range(rec.frame_count):
            if not (pred_dir / f"{i:05d}.png").is_file():
                raise SequenceError(
                    f"clip {rec.clip_id}: missing prediction frame {i:05d}.png"
                )

    out_records = []
    out_root.mkdir(parents=True, exist_ok=True)
    for rec in sorted(records, key=lambda r: r.clip_id):
        pred = core_io.load_matte_sequence(predictions_root / rec.clip_id)
        masks = core_io.load_mask_sequence(src_root / rec.masks_dir)
        if pred.frame_count != rec.frame_count:
            raise SequenceError(
                f"clip {rec.clip_id}: prediction has {pred.frame_count} frames, "
                f"expected {rec.frame_count}"
            )
        staging = out_root / f".tmp-{rec.clip_id}"
        if staging.exists():
            shutil.rmtree(staging)
        try:
            if copy_frames:
                shutil.copytree(src_root / rec.frames_dir, staging / "frames")
            else:
                (staging / "frames").parent.mkdir(parents=True, exist_ok=True)
                (staging / "frames").symlink_to((src_root / rec.frames_dir).resolve())
            core_io.save_mask_sequence(masks, staging / "masks")
            core_io.save_matte_sequence(pred, staging / "alpha")
        except BaseException:
            shutil.rmtree(staging, ignore_errors=True)
            raise
        final = out_root / rec.clip_id
        if final.exists():
            shutil.rmtree(final)
        staging.rename(final)
        out_records.append(
            ClipRecord(
                clip_id=rec.clip_id,
                frames_dir=f"{rec.clip_id}/frames",
                masks_dir=f"{rec.clip_id}/masks",
                alpha_dir=f"{rec.clip_id}/alpha",
                frame_count=rec.frame_count,
            )
        )
    core_io.save_manifest(out_records, out_root)
    return out_records
