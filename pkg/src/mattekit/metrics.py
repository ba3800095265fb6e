"""Evaluation metrics: MAD, MSE, MAD-T, Gradient error, and binarized
VOS metrics J (region Jaccard), F (boundary F-measure), J&F.

MAD/MSE/Gradient are scaled by MetricConfig.scale (default 1000); MAD-T
carries its own x1000 by definition. J and F are reported x100.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core_io import TRIMAP_UNKNOWN, MaskSequence, MatteSequence, binarize_matte
from .morphology import make_trimap


@dataclass(frozen=True)
class MetricConfig:
    scale: float = 1000.0
    madt_kernel: int = 10
    grad_sigma: float = 1.4
    boundary_tolerance_fraction: float = 0.008

    def __post_init__(self):
        for name in ("scale", "madt_kernel", "grad_sigma", "boundary_tolerance_fraction"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


METRIC_NAMES = ("MAD", "MAD_T", "MSE", "GRAD", "J", "F", "JandF")


@dataclass(frozen=True)
class EvalReport:
    per_clip: dict  # clip_id -> {metric name -> value}
    config: MetricConfig
    input_descriptor: str = ""

    @property
    def aggregate(self) -> dict:
        clips = sorted(self.per_clip)
        return {
            name: float(np.mean([self.per_clip[c][name] for c in clips]))
            for name in METRIC_NAMES
        }

    def to_json(self) -> dict:
        return {
            "input_descriptor": self.input_descriptor,
            "config": {
                "scale": self.config.scale,
                "madt_kernel": self.config.madt_kernel,
                "grad_sigma": self.config.grad_sigma,
                "boundary_tolerance_fraction": self.config.boundary_tolerance_fraction,
            },
            "per_clip": {cid: self.per_clip[cid] for cid in sorted(self.per_clip)},
            "aggregate": self.aggregate,
        }


def _check(pred, gt):
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs gt {gt.shape}")


def mad(pred: MatteSequence, gt: MatteSequence, cfg: MetricConfig = MetricConfig()) -> float:
    _check(pred, gt)
    return float(np.abs(pred.data - gt.data).mean() * cfg.scale)


def mse(pred: MatteSequence, gt: MatteSequence, cfg: MetricConfig = MetricConfig()) -> float:
    _check(pred, gt)
    return float(((pred.data - gt.data) ** 2).mean() * cfg.scale)


def mad_t(pred: MatteSequence, gt: MatteSequence, cfg: MetricConfig = MetricConfig()) -> float:
    """MAD restricted to the per-frame unknown trimap region of the ground
    truth; frames with no unknown pixels score 0. Always scaled x1000."""
    _check(pred, gt)
    scores = []
    for t in range(gt.frame_count):
        trimap = make_trimap(gt.data[t], cfg.madt_kernel)
        unknown = trimap.labels == TRIMAP_UNKNOWN
        n = int(unknown.sum())
        if n > 0:
            diff = np.abs(pred.data[t] - gt.data[t])
            scores.append(diff[unknown].sum() / n * 1000.0)
        else:
            scores.append(0.0)
    return float(np.mean(scores))


def gaussian_derivative_kernels(sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """2-D separable first-order Gaussian derivative kernels along x and y,
    radius ceil(3*sigma), each L2-normalized."""
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(x**2) / (2 * sigma**2)) / (sigma * math.sqrt(2 * math.pi))
    dg = -x * g / sigma**2
    kx = g[:, None] * dg[None, :]
    kx /= math.sqrt((kx**2).sum())
    return kx, kx.T.copy()


def gradient_magnitude(frame: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian-derivative gradient magnitude with reflective padding."""
    kx, ky = gaussian_derivative_kernels(sigma)
    radius = kx.shape[0] // 2
    if min(frame.shape) <= 2 * radius:
        raise ValueError(
            f"frame {frame.shape} smaller than kernel support {2 * radius + 1}"
        )
    gx = ndimage.correlate(frame, kx, mode="reflect")
    gy = ndimage.correlate(frame, ky, mode="reflect")
    return np.sqrt(gx**2 + gy**2)


def gradient_error(pred: MatteSequence, gt: MatteSequence, cfg: MetricConfig = MetricConfig()) -> float:
    _check(pred, gt)
    errors = [
        ((gradient_magnitude(pred.data[t], cfg.grad_sigma)
          - gradient_magnitude(gt.data[t], cfg.grad_sigma)) ** 2).mean()
        for t in range(gt.frame_count)
    ]
    return float(np.mean(errors) * cfg.scale)


def jaccard(pred: MaskSequence, gt: MaskSequence) -> float:
    """Temporal mean of per-frame IoU, x100; empty-vs-empty counts as 1."""
    _check(pred, gt)
    p = pred.data.astype(bool)
    g = gt.data.astype(bool)
    scores = []
    for t in range(p.shape[0]):
        union = (p[t] | g[t]).sum()
        scores.append(1.0 if union == 0 else (p[t] & g[t]).sum() / union)
    return float(np.mean(scores) * 100.0)


def _boundary(mask: np.ndarray) -> np.ndarray:
    """Set pixels 4-adjacent to an unset or out-of-bounds pixel."""
    padded = np.pad(mask, 1, constant_values=False)
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return mask & ~interior


def _disk_offsets(radius: int) -> np.ndarray:
    r = np.arange(-radius, radius + 1)
    return (r[:, None] ** 2 + r[None, :] ** 2) <= radius**2


def boundary_f(pred: MaskSequence, gt: MaskSequence, cfg: MetricConfig = MetricConfig()) -> float:
    """DAVIS-style boundary F-measure via dilation matching, x100."""
    _check(pred, gt)
    _, h, w = pred.shape
    radius = round(cfg.boundary_tolerance_fraction * math.hypot(h, w))
    disk = _disk_offsets(radius)
    scores = []
    for t in range(pred.frame_count):
        pb = _boundary(pred.data[t].astype(bool))
        gb = _boundary(gt.data[t].astype(bool))
        if not pb.any() and not gb.any():
            scores.append(1.0)
            continue
        gb_dil = ndimage.binary_dilation(gb, structure=disk)
        pb_dil = ndimage.binary_dilation(pb, structure=disk)
        precision = (pb & gb_dil).sum() / pb.sum() if pb.any() else 0.0
        recall = (gb & pb_dil).sum() / gb.sum() if gb.any() else 0.0
        scores.append(0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall))
    return float(np.mean(scores) * 100.0)


def evaluate_clip(
    pred_alpha: MatteSequence,
    gt_alpha: MatteSequence,
    cfg: MetricConfig = MetricConfig(),
    bin_threshold: float = 0.5,
) -> dict:
    """All seven metrics for one clip; J/F run on binarized sequences."""
    _check(pred_alpha, gt_alpha)
    pred_mask = binarize_matte(pred_alpha, bin_threshold)
    gt_mask = binarize_matte(gt_alpha, bin_threshold)
    j = jaccard(pred_mask, gt_mask)
    f = boundary_f(pred_mask, gt_mask, cfg)
    return {
        "MAD": mad(pred_alpha, gt_alpha, cfg),
        "MAD_T": mad_t(pred_alpha, gt_alpha, cfg),
        "MSE": mse(pred_alpha, gt_alpha, cfg),
        "GRAD": gradient_error(pred_alpha, gt_alpha, cfg),
        "J": j,
        "F": f,
        "JandF": (j + f) / 2.0,
    }
