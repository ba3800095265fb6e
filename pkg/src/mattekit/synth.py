"""Synthetic clip generation with analytic ground-truth alpha.

A single feathered shape moves linearly across a constant background; the
alpha ramp is closed-form so compositing round trips are testable exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import compositing, core_io
from .core_io import FrameSequence, MatteSequence


@dataclass(frozen=True)
class SynthSpec:
    width: int
    height: int
    frame_count: int
    shape: str = "feathered_disk"  # or "feathered_rect"
    center_start: tuple = (0.0, 0.0)  # (row, col) px
    center_velocity: tuple = (0.0, 0.0)  # (row, col) px per frame
    radius: float = 4.0  # disk radius or rect half-extent (both axes)
    feather_width: float = 0.0
    fg_color: tuple = (255, 255, 255)
    bg_color: tuple = (0, 0, 0)
    seed: int = 0

    def __post_init__(self):
        if self.shape not in ("feathered_disk", "feathered_rect"):
            raise ValueError(f"unknown shape: {self.shape!r}")
        if self.feather_width < 0:
            raise ValueError("feather_width must be >= 0")
        if self.frame_count < 1 or self.width < 1 or self.height < 1:
            raise ValueError("frame_count, width, height must be >= 1")
        reach = self.radius + self.feather_width / 2.0
        for t in range(self.frame_count):
            r, c = self.center_at(t)
            if r - reach < 0 or c - reach < 0 or r + reach > self.height - 1 or c + reach > self.width - 1:
                raise ValueError(f"shape exits frame bounds at frame {t}")

    def center_at(self, t: int) -> tuple:
        return (
            self.center_start[0] + t * self.center_velocity[0],
            self.center_start[1] + t * self.center_velocity[1],
        )

    def to_json(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "frame_count": self.frame_count,
            "shape": self.shape,
            "center_start": list(self.center_start),
            "center_velocity": list(self.center_velocity),
            "radius": self.radius,
            "feather_width": self.feather_width,
            "fg_color": list(self.fg_color),
            "bg_color": list(self.bg_color),
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SynthSpec":
        kwargs = dict(obj)
        for key in ("center_start", "center_velocity", "fg_color", "bg_color"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


def _shape_distance(spec: SynthSpec, rr: np.ndarray, cc: np.ndarray, t: int) -> np.ndarray:
    """Signed distance-like field: <= 0 inside the hard shape."""
    cr, ccenter = spec.center_at(t)
    if spec.shape == "feathered_disk":
        return np.hypot(rr - cr, cc - ccenter) - spec.radius
    # Rect uses the Chebyshev analog of the disk distance.
    return np.maximum(np.abs(rr - cr), np.abs(cc - ccenter)) - spec.radius


def alpha_frame(spec: SynthSpec, t: int) -> np.ndarray:
    """Analytic alpha at frame t: a linear ramp of width feather_width
    centered on the shape edge, a hard indicator when the width is 0."""
    rr, cc = np.meshgrid(
        np.arange(spec.height, dtype=np.float64),
        np.arange(spec.width, dtype=np.float64),
        indexing="ij",
    )
    d = _shape_distance(spec, rr, cc, t)
    if spec.feather_width == 0:
        return (d <= 0).astype(np.float64)
    return np.clip((spec.feather_width / 2.0 - d) / spec.feather_width, 0.0, 1.0)


def synthesize_clip(spec: SynthSpec) -> tuple[FrameSequence, MatteSequence]:
    """Render a clip and its ground-truth matte; deterministic in the spec."""
    alpha = MatteSequence(np.stack([alpha_frame(spec, t) for t in range(spec.frame_count)]))
    shape = (spec.frame_count, spec.height, spec.width, 3)
    fg = FrameSequence(np.broadcast_to(np.asarray(spec.fg_color, np.uint8), shape).copy())
    bg = FrameSequence(np.broadcast_to(np.asarray(spec.bg_color, np.uint8), shape).copy())
    frames = compositing.composite(fg, bg, alpha)
    return frames, alpha


def write_clip(spec: SynthSpec, clip_dir, mask_threshold: float = 0.5) -> None:
    """Write frames/masks/alpha for one clip in the on-disk layout."""
    clip_dir = Path(clip_dir)
    frames, alpha = synthesize_clip(spec)
    masks = core_io.binarize_matte(alpha, mask_threshold)
    core_io.save_frame_sequence(frames, clip_dir / "frames")
    core_io.save_mask_sequence(masks, clip_dir / "masks")
    core_io.save_matte_sequence(alpha, clip_dir / "alpha")


def load_spec(path) -> SynthSpec:
    return SynthSpec.from_json(json.loads(Path(path).read_text("utf-8")))
