"""Alpha compositing I = alpha*F + (1-alpha)*B and its per-pixel inversion."""

from __future__ import annotations

import numpy as np

from .core_io import FrameSequence, MatteSequence


def _check_shapes(*seqs) -> None:
    shapes = [s.shape for s in seqs]
    if len(set(shapes)) != 1:
        raise ValueError(f"shape mismatch: {shapes}")


def composite(fg: FrameSequence, bg: FrameSequence, alpha: MatteSequence) -> FrameSequence:
    """Blend foreground over background, quantizing once at output.

    Arithmetic runs in float64; the result is rounded half-away-from-zero
    to 8 bits, so endpoint alphas reproduce F and B byte-exactly.
    """
    _check_shapes(fg, bg, alpha)
    a = alpha.data[..., None]
    blended = a * fg.data.astype(np.float64) + (1.0 - a) * bg.data.astype(np.float64)
    return FrameSequence(np.floor(blended + 0.5).astype(np.uint8))


def solve_alpha(img: FrameSequence, fg: FrameSequence, bg: FrameSequence) -> MatteSequence:
    """Recover alpha by per-pixel least squares over the three channels.

    alpha = sum_c (I_c - B_c)(F_c - B_c) / sum_c (F_c - B_c)^2, clamped to
    [0, 1]. Degenerate pixels with F == B yield alpha 0.
    """
    _check_shapes(img, fg, bg)
    i = img.data.astype(np.float64)
    f = fg.data.astype(np.float64)
    b = bg.data.astype(np.float64)
    fb = f - b
    denom = (fb * fb).sum(axis=-1)
    numer = ((i - b) * fb).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        alpha = np.where(denom > 0.0, numer / np.where(denom > 0.0, denom, 1.0), 0.0)
    return MatteSequence(np.clip(alpha, 0.0, 1.0))


def degenerate_pixel_counts(fg: FrameSequence, bg: FrameSequence) -> np.ndarray:
    """Per-frame count of pixels where F == B (alpha unrecoverable)."""
    _check_shapes(fg, bg)
    return (fg.data == bg.data).all(axis=-1).sum(axis=(1, 2))
