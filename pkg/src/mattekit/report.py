"""Report writers: JSON, CSV, and matplotlib summary figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .metrics import METRIC_NAMES, EvalReport

CSV_COLUMNS = ("clip_id",) + METRIC_NAMES


def write_report_json(report: EvalReport, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n", "utf-8")


def write_report_csv(report: EvalReport, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for clip_id in sorted(report.per_clip):
            row = report.per_clip[clip_id]
            writer.writerow([clip_id] + [f"{row[m]:.6f}" for m in METRIC_NAMES])
        agg = report.aggregate
        writer.writerow(["aggregate"] + [f"{agg[m]:.6f}" for m in METRIC_NAMES])


def render_report_figure(report: EvalReport, path, title: str = "") -> None:
    """Per-clip bar chart for each metric, one panel per metric."""
    clips = sorted(report.per_clip)
    fig, axes = plt.subplots(1, len(METRIC_NAMES), figsize=(3.2 * len(METRIC_NAMES), 3.6))
    x = np.arange(len(clips))
    for ax, name in zip(axes, METRIC_NAMES):
        ax.bar(x, [report.per_clip[c][name] for c in clips], color="tab:blue")
        ax.axhline(report.aggregate[name], color="tab:red", lw=1, ls="--")
        ax.set_title(name)
        ax.set_xticks(x)
        ax.set_xticklabels(clips, rotation=90, fontsize=7)
    fig.suptitle(title or report.input_descriptor)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_benchmark_figure(report_json: dict, path) -> None:
    """Grouped bars of aggregate metrics per degradation, input vs prediction."""
    table = report_json["table"]
    labels = []
    for row in table:
        if row["degradation"] not in labels:
            labels.append(row["degradation"])
    plot_metrics = ("MAD", "MAD_T", "MSE", "GRAD")
    fig, axes = plt.subplots(1, len(plot_metrics), figsize=(3.6 * len(plot_metrics), 3.8))
    x = np.arange(len(labels))
    for ax, name in zip(axes, plot_metrics):
        for offset, role, color in ((-0.2, "input", "tab:gray"), (0.2, "prediction", "tab:blue")):
            vals = [
                next(r[name] for r in table if r["degradation"] == lab and r["role"] == role)
                for lab in labels
            ]
            ax.bar(x + offset, vals, width=0.4, label=role, color=color)
        ax.set_title(name)
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    axes[0].legend()
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
