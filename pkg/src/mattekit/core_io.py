"""Domain types and on-disk frame-sequence I/O.

Clips live on disk as directories of zero-padded PNG files:
``<root>/<clip_id>/{frames,masks,alpha}/%05d.png`` plus a
``manifest.json`` at the root listing one record per clip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

# Trimap label values (also the PNG byte encoding / 2, see save_trimap).
TRIMAP_BG = 0
TRIMAP_UNKNOWN = 1
TRIMAP_FG = 2

_TRIMAP_BYTES = {TRIMAP_BG: 0, TRIMAP_UNKNOWN: 128, TRIMAP_FG: 255}


class SequenceError(ValueError):
    """Raised when a sequence violates its type invariants or disk layout."""


def quantize_alpha(alpha: np.ndarray) -> np.ndarray:
    """Map real alpha in [0,1] to bytes with round-half-away-from-zero."""
    return np.floor(np.asarray(alpha, dtype=np.float64) * 255.0 + 0.5).astype(np.uint8)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrameSequence:
    """Ordered RGB frames of uniform resolution, uint8, shape (T, H, W, 3)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.uint8)
        if arr.ndim != 4 or arr.shape[3] != 3:
            raise SequenceError(f"frames must have shape (T, H, W, 3), got {arr.shape}")
        if arr.shape[0] < 1:
            raise SequenceError("T >= 1 violated: empty frame sequence")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def frame_count(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple:
        return self.data.shape[:3]


@dataclass(frozen=True)
class MatteSequence:
    """Ordered alpha frames, float64 in [0,1], shape (T, H, W)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise SequenceError(f"mattes must have shape (T, H, W), got {arr.shape}")
        if arr.shape[0] < 1:
            raise SequenceError("T >= 1 violated: empty matte sequence")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise SequenceError("alpha values must lie in [0, 1]")
        object.__setattr__(self, "data", _freeze(arr))

    @property
    def frame_count(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple:
        return self.data.shape


@dataclass(frozen=True)
class MaskSequence:
    """Ordered binary masks, uint8 in {0,1}, shape (T, H, W)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 3:
            raise SequenceError(f"masks must have shape (T, H, W), got {arr.shape}")
        if arr.shape[0] < 1:
            raise SequenceError("T >= 1 violated: empty mask sequence")
        if not np.isin(arr, (0, 1)).all():
            raise SequenceError("mask values must be exactly 0 or 1")
        object.__setattr__(self, "data", _freeze(arr.astype(np.uint8)))

    @property
    def frame_count(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple:
        return self.data.shape


@dataclass(frozen=True)
class Trimap:
    """Single-frame three-way labeling, values in {BG, UNKNOWN, FG}."""

    labels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.ndim != 2:
            raise SequenceError(f"trimap must be a 2-D raster, got shape {arr.shape}")
        if not np.isin(arr, (TRIMAP_BG, TRIMAP_UNKNOWN, TRIMAP_FG)).all():
            raise SequenceError("trimap labels must be in {BG, UNKNOWN, FG}")
        object.__setattr__(self, "labels", _freeze(arr.astype(np.uint8)))


@dataclass(frozen=True)
class ClipRecord:
    clip_id: str
    frames_dir: str
    masks_dir: str
    alpha_dir: str
    frame_count: int

    def to_json(self) -> dict:
        return {
            "clip_id": self.clip_id,
            "frames_dir": self.frames_dir,
            "masks_dir": self.masks_dir,
            "alpha_dir": self.alpha_dir,
            "frame_count": self.frame_count,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ClipRecord":
        return cls(
            clip_id=obj["clip_id"],
            frames_dir=obj["frames_dir"],
            masks_dir=obj["masks_dir"],
            alpha_dir=obj["alpha_dir"],
            frame_count=int(obj["frame_count"]),
        )


def _indexed_pngs(dir_path: Path) -> list[Path]:
    """Return %05d.png files in index order, rejecting gaps in numbering."""
    dir_path = Path(dir_path)
    if not dir_path.is_dir():
        raise SequenceError(f"not a directory: {dir_path}")
    files = sorted(p for p in dir_path.iterdir() if p.suffix == ".png")
    if not files:
        raise SequenceError(f"T >= 1 violated: no PNG files in {dir_path}")
    for i, p in enumerate(files):
        expected = f"{i:05d}.png"
        if p.name != expected:
            raise SequenceError(f"gap at index {i}: expected {dir_path / expected}, found {p}")
    return files


def _load_gray_frames(dir_path: Path) -> np.ndarray:
    frames = []
    shape = None
    for p in _indexed_pngs(dir_path):
        with Image.open(p) as im:
            if im.mode != "L":
                raise SequenceError(f"non-grayscale file: {p} (mode {im.mode})")
            arr = np.asarray(im, dtype=np.uint8)
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise SequenceError(f"mixed resolutions: {p} is {arr.shape}, expected {shape}")
        frames.append(arr)
    return np.stack(frames)


def load_matte_sequence(dir_path) -> MatteSequence:
    """Load a directory of 8-bit grayscale PNGs as alpha values v/255."""
    raw = _load_gray_frames(Path(dir_path))
    return MatteSequence(raw.astype(np.float64) / 255.0)


def load_mask_sequence(dir_path) -> MaskSequence:
    """Load binary masks stored as grayscale PNGs with bytes {0, 255}."""
    raw = _load_gray_frames(Path(dir_path))
    bad = ~np.isin(raw, (0, 255))
    if bad.any():
        t = int(np.argwhere(bad.any(axis=(1, 2)))[0][0])
        raise SequenceError(
            f"non-binary mask byte in {Path(dir_path) / f'{t:05d}.png'}"
        )
    return MaskSequence((raw == 255).astype(np.uint8))


def load_frame_sequence(dir_path) -> FrameSequence:
    """Load a directory of 8-bit RGB PNGs."""
    dir_path = Path(dir_path)
    frames = []
    shape = None
    for p in _indexed_pngs(dir_path):
        with Image.open(p) as im:
            if im.mode != "RGB":
                raise SequenceError(f"non-RGB file: {p} (mode {im.mode})")
            arr = np.asarray(im, dtype=np.uint8)
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise SequenceError(f"mixed resolutions: {p} is {arr.shape}, expected {shape}")
        frames.append(arr)
    return FrameSequence(np.stack(frames))


def _save_frames(arrays, dir_path: Path, mode: str) -> None:
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    for i, arr in enumerate(arrays):
        Image.fromarray(arr, mode=mode).save(dir_path / f"{i:05d}.png")


def save_matte_sequence(m: MatteSequence, dir_path) -> None:
    """Write alpha frames as 8-bit grayscale PNGs (round-half-away-from-zero)."""
    _save_frames(quantize_alpha(m.data), dir_path, "L")


def save_mask_sequence(m: MaskSequence, dir_path) -> None:
    _save_frames(m.data * np.uint8(255), dir_path, "L")


def save_frame_sequence(f: FrameSequence, dir_path) -> None:
    _save_frames(f.data, dir_path, "RGB")


def save_trimap(t: Trimap, path) -> None:
    """Write a trimap as a PNG with bytes {0, 128, 255} for {BG, UNKNOWN, FG}."""
    out = np.zeros_like(t.labels)
    for label, byte in _TRIMAP_BYTES.items():
        out = np.where(t.labels == label, np.uint8(byte), out)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(out.astype(np.uint8), mode="L").save(path)


def load_trimap(path) -> Trimap:
    """Read a trimap PNG written by save_trimap."""
    with Image.open(path) as img:
        if img.mode != "L":
            raise SequenceError(f"trimap PNG must be grayscale, got mode {img.mode}: {path}")
        arr = np.asarray(img)
    labels = np.full(arr.shape, -1, dtype=np.int16)
    for label, byte in _TRIMAP_BYTES.items():
        labels[arr == byte] = label
    if (labels < 0).any():
        raise SequenceError(f"trimap PNG contains bytes outside {{0, 128, 255}}: {path}")
    return Trimap(labels)


def binarize_matte(m: MatteSequence, threshold: float = 0.5) -> MaskSequence:
    """Threshold alpha to a binary mask; pixel is 1 iff alpha >= threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return MaskSequence((m.data >= threshold).astype(np.uint8))


def mask_as_matte(m: MaskSequence) -> MatteSequence:
    """Embed a binary mask as a {0.0, 1.0}-valued matte."""
    return MatteSequence(m.data.astype(np.float64))


def load_manifest(root) -> list[ClipRecord]:
    """Load and validate <root>/manifest.json."""
    root = Path(root)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise SequenceError(f"missing manifest: {manifest_path}")
    records = [ClipRecord.from_json(obj) for obj in json.loads(manifest_path.read_text("utf-8"))]
    for rec in records:
        for rel in (rec.frames_dir, rec.masks_dir, rec.alpha_dir):
            d = root / rel
            files = sorted(p.name for p in d.iterdir() if p.suffix == ".png") if d.is_dir() else []
            expected = [f"{i:05d}.png" for i in range(rec.frame_count)]
            if files != expected:
                raise SequenceError(
                    f"clip {rec.clip_id}: {d} does not contain exactly "
                    f"{rec.frame_count} indexed frames"
                )
    return records


def save_manifest(records: list[ClipRecord], root) -> Path:
    """Write <root>/manifest.json sorted by clip_id."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    ordered = sorted(records, key=lambda r: r.clip_id)
    path = root / "manifest.json"
    path.write_text(
        json.dumps([r.to_json() for r in ordered], indent=2) + "\n", encoding="utf-8"
    )
    return path
