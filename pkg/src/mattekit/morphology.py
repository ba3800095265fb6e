"""Binary erosion, elliptical structuring elements, and trimap generation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_io import TRIMAP_BG, TRIMAP_FG, TRIMAP_UNKNOWN, Trimap, quantize_alpha


@dataclass(frozen=True)
class StructuringElement:
    """k x k binary kernel with anchor at (floor((k-1)/2), floor((k-1)/2))."""

    cells: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.cells, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"structuring element must be square, got {arr.shape}")
        if not arr[self.anchor]:
            raise ValueError("anchor cell must be set")
        arr.setflags(write=False)
        object.__setattr__(self, "cells", arr)

    @property
    def anchor(self) -> tuple:
        k = np.asarray(self.cells).shape[0]
        return ((k - 1) // 2, (k - 1) // 2)


def ellipse_kernel(k: int) -> StructuringElement:
    """Elliptical structuring element of size k x k.

    Cell (r, c) is set iff ((c - (k-1)/2)^2 + (r - (k-1)/2)^2) / (k/2)^2 <= 1.
    """
    if k < 1:
        raise ValueError(f"kernel size must be >= 1, got {k}")
    center = (k - 1) / 2.0
    r = np.arange(k, dtype=np.float64)
    dist2 = (r[:, None] - center) ** 2 + (r[None, :] - center) ** 2
    return StructuringElement(dist2 / (k / 2.0) ** 2 <= 1.0)


def erode(mask: np.ndarray, se: StructuringElement) -> np.ndarray:
    """Binary erosion; pixels outside the image count as unset."""
    m = np.asarray(mask).astype(bool)
    h, w = m.shape
    ar, ac = se.anchor
    out = np.ones_like(m)
    for r, c in np.argwhere(se.cells):
        dr, dc = int(r) - ar, int(c) - ac
        shifted = np.zeros_like(m)
        src_r = slice(max(0, dr), min(h, h + dr))
        src_c = slice(max(0, dc), min(w, w + dc))
        dst_r = slice(max(0, -dr), min(h, h - dr))
        dst_c = slice(max(0, -dc), min(w, w - dc))
        shifted[dst_r, dst_c] = m[src_r, src_c]
        out &= shifted
    return out


def make_trimap(alpha_frame: np.ndarray, k: int = 10) -> Trimap:
    """Derive a trimap from a ground-truth alpha frame.

    Certain regions are the byte-exact foreground (255) and background (0)
    masks eroded by the k x k elliptical kernel; everything else is unknown.
    """
    q = quantize_alpha(alpha_frame)
    se = ellipse_kernel(k)
    c_fg = erode(q == 255, se)
    c_bg = erode(q == 0, se)
    labels = np.full(q.shape, TRIMAP_UNKNOWN, dtype=np.uint8)
    labels[c_fg] = TRIMAP_FG
    labels[c_bg] = TRIMAP_BG
    return Trimap(labels)
