"""Reference loss implementations with analytic gradients.

All losses are plain numpy and return (value, gradient w.r.t. the first
argument), so they can serve as oracles for any training stack. The
Laplacian pyramid is the Burt-Adelson construction: 5-tap binomial kernel
(1, 4, 6, 4, 1)/16 applied separably with reflective (edge-repeating)
padding, stride-2 subsampling at even indices, and zero-insertion
upsampling with the same kernel scaled by 2 per axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0
_PAD = 2


@dataclass(frozen=True)
class FeatureGrid:
    """P x D matrix of patch feature vectors."""

    patches: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.patches, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"feature grid must be a P x D matrix with P, D >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("feature grid contains non-finite values")
        object.__setattr__(self, "patches", arr)


@dataclass(frozen=True)
class LossValueAndGrad:
    value: float
    grad: np.ndarray


def l1_loss(pred: np.ndarray, gt: np.ndarray) -> LossValueAndGrad:
    """Mean absolute difference; subgradient sign(pred - gt)/N with sign(0)=0."""
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {gt.shape}")
    diff = pred - gt
    return LossValueAndGrad(float(np.abs(diff).mean()), np.sign(diff) / diff.size)


# --- 1-D linear building blocks and their adjoints -------------------------
#
# blur1d = valid correlation with the binomial kernel after symmetric
# padding of width 2; every op below is linear, so gradients flow through
# the exact adjoints.

def _pad1d(x: np.ndarray, axis: int) -> np.ndarray:
    widths = [(0, 0)] * x.ndim
    widths[axis] = (_PAD, _PAD)
    return np.pad(x, widths, mode="symmetric")


def _pad1d_adjoint(g: np.ndarray, axis: int) -> np.ndarray:
    g = np.moveaxis(g, axis, 0)
    n = g.shape[0] - 2 * _PAD
    out = g[_PAD:_PAD + n].copy()
    # Symmetric pad of width 2 references indices [1, 0] on the left and
    # [n-1, n-2] on the right; fold the pad cotangents back onto them.
    out[1] += g[0]
    out[0] += g[1]
    out[n - 1] += g[-2]
    out[n - 2] += g[-1]
    return np.moveaxis(out, 0, axis)


def _corr1d_valid(x: np.ndarray, axis: int) -> np.ndarray:
    x = np.moveaxis(x, axis, -1)
    out = np.zeros(x.shape[:-1] + (x.shape[-1] - 2 * _PAD,))
    for m, k in enumerate(_KERNEL):
        out += k * x[..., m:m + out.shape[-1]]
    return np.moveaxis(out, -1, axis)


def _corr1d_valid_adjoint(g: np.ndarray, axis: int) -> np.ndarray:
    g = np.moveaxis(g, axis, -1)
    out = np.zeros(g.shape[:-1] + (g.shape[-1] + 2 * _PAD,))
    for m, k in enumerate(_KERNEL):
        out[..., m:m + g.shape[-1]] += k * g
    return np.moveaxis(out, -1, axis)


def _blur(x: np.ndarray) -> np.ndarray:
    for axis in (0, 1):
        x = _corr1d_valid(_pad1d(x, axis), axis)
    return x


def _blur_adjoint(g: np.ndarray) -> np.ndarray:
    for axis in (1, 0):
        g = _pad1d_adjoint(_corr1d_valid_adjoint(g, axis), axis)
    return g


def _down(x: np.ndarray) -> np.ndarray:
    return _blur(x)[::2, ::2]


def _down_adjoint(g: np.ndarray, shape: tuple) -> np.ndarray:
    z = np.zeros(shape)
    z[::2, ::2] = g
    return _blur_adjoint(z)


def _up(x: np.ndarray, shape: tuple) -> np.ndarray:
    z = np.zeros(shape)
    z[::2, ::2] = x
    return 4.0 * _blur(z)


def _up_adjoint(g: np.ndarray) -> np.ndarray:
    return 4.0 * _blur_adjoint(g)[::2, ::2]


def gaussian_pyramid(frame: np.ndarray, levels: int) -> list[np.ndarray]:
    """levels+1 Gaussian levels, coarsest of size ceil(n / 2^levels)."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2:
        raise ValueError(f"expected a 2-D frame, got shape {frame.shape}")
    if min(frame.shape) < 2**levels:
        raise ValueError(f"frame {frame.shape} too small for {levels} pyramid levels")
    pyramid = [frame]
    for _ in range(levels):
        pyramid.append(_down(pyramid[-1]))
    return pyramid


def laplacian_bands(frame: np.ndarray, levels: int) -> list[np.ndarray]:
    gauss = gaussian_pyramid(frame, levels)
    return [gauss[i] - _up(gauss[i + 1], gauss[i].shape) for i in range(levels)]


def laplacian_pyramid_loss(pred: np.ndarray, gt: np.ndarray, levels: int = 5) -> LossValueAndGrad:
    """Sum over bands of 2^i * L1(band_i(pred), band_i(gt)).

    The pyramid is linear in its input, so the gradient is the sum of band
    subgradients pulled back through the exact adjoint of the construction.
    """
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {gt.shape}")
    gauss_pred = gaussian_pyramid(pred, levels)
    gauss_gt = gaussian_pyramid(gt, levels)
    value = 0.0
    band_cotangents = []
    for i in range(levels):
        band_pred = gauss_pred[i] - _up(gauss_pred[i + 1], gauss_pred[i].shape)
        band_gt = gauss_gt[i] - _up(gauss_gt[i + 1], gauss_gt[i].shape)
        diff = band_pred - band_gt
        value += 2**i * float(np.abs(diff).mean())
        band_cotangents.append(2**i * np.sign(diff) / diff.size)
    # Reverse pass over G_0..G_L with band_i = G_i - U(G_{i+1}):
    #   c_L = -U^T g_{L-1}
    #   c_i = g_i - U^T g_{i-1} + D^T c_{i+1}   for 0 < i < L
    #   c_0 = g_0 + D^T c_1
    g = band_cotangents
    c = -_up_adjoint(g[levels - 1])
    for i in range(levels - 1, 0, -1):
        c = g[i] - _up_adjoint(g[i - 1]) + _down_adjoint(c, gauss_pred[i].shape)
    grad = g[0] + _down_adjoint(c, gauss_pred[0].shape)
    return LossValueAndGrad(value, grad)


def mat_loss(pred: np.ndarray, gt: np.ndarray, lambda_lap: float = 1.0, levels: int = 5) -> LossValueAndGrad:
    """L1 plus lambda_lap times the Laplacian pyramid loss."""
    l1 = l1_loss(pred, gt)
    if lambda_lap == 0.0:
        return l1
    lap = laplacian_pyramid_loss(pred, gt, levels)
    return LossValueAndGrad(l1.value + lambda_lap * lap.value, l1.grad + lambda_lap * lap.grad)


def alignment_loss(a: FeatureGrid, b: FeatureGrid) -> LossValueAndGrad:
    """Negative mean patch-wise cosine similarity; gradient w.r.t. `a`."""
    av, bv = a.patches, b.patches
    if av.shape != bv.shape:
        raise ValueError(f"feature grid shape mismatch: {av.shape} vs {bv.shape}")
    na = np.linalg.norm(av, axis=1)
    nb = np.linalg.norm(bv, axis=1)
    for name, norms in (("first", na), ("second", nb)):
        zero = np.nonzero(norms == 0.0)[0]
        if zero.size:
            raise ValueError(f"zero-norm patch row {int(zero[0])} in {name} grid")
    p = av.shape[0]
    cos = (av * bv).sum(axis=1) / (na * nb)
    # d cos / d a_p = b_p / (|a||b|) - cos * a_p / |a|^2
    grad = -(bv / (na * nb)[:, None] - cos[:, None] * av / (na**2)[:, None]) / p
    return LossValueAndGrad(float(-cos.mean()), grad)
