"""Mask coarsening operators: block downsample/upsample and polygon boundary
simplification. Both remove fine boundary detail while keeping overall shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core_io import MaskSequence

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)

# Moore neighborhood in clockwise order starting from West, as (dr, dc).
_MOORE = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]


@dataclass(frozen=True)
class DegradationConfig:
    kind: str  # "downsample" or "polygon"
    downsample_factor: int | None = None
    epsilon_fraction: float | None = None
    level_name: str = ""

    def __post_init__(self):
        if self.kind == "downsample":
            if self.downsample_factor is None or self.epsilon_fraction is not None:
                raise ValueError("downsample config requires exactly downsample_factor")
            if self.downsample_factor < 2:
                raise ValueError(f"downsample_factor must be >= 2, got {self.downsample_factor}")
        elif self.kind == "polygon":
            if self.epsilon_fraction is None or self.downsample_factor is not None:
                raise ValueError("polygon config requires exactly epsilon_fraction")
            if self.epsilon_fraction <= 0:
                raise ValueError(f"epsilon_fraction must be > 0, got {self.epsilon_fraction}")
        else:
            raise ValueError(f"unknown degradation kind: {self.kind!r}")

    @property
    def label(self) -> str:
        return self.level_name or (
            f"downsample_{self.downsample_factor}x"
            if self.kind == "downsample"
            else f"polygon_{self.epsilon_fraction}"
        )


# Degradation levels used when a config names only a difficulty level.
POLYGON_EPSILON = {"easy": 0.01, "hard": 0.05}


def degrade_downsample(m: MaskSequence, s: int) -> MaskSequence:
    """Downsample by block-center sampling, then upsample by replication."""
    if s < 2:
        raise ValueError(f"downsample factor must be >= 2, got {s}")
    _, h, w = m.shape
    rows = np.minimum(np.arange(math.ceil(h / s)) * s + s // 2, h - 1)
    cols = np.minimum(np.arange(math.ceil(w / s)) * s + s // 2, w - 1)
    small = m.data[:, rows[:, None], cols[None, :]]
    row_counts = [min(s, h - i * s) for i in range(len(rows))]
    col_counts = [min(s, w - j * s) for j in range(len(cols))]
    out = np.repeat(np.repeat(small, row_counts, axis=1), col_counts, axis=2)
    return MaskSequence(out)


def trace_boundary(mask: np.ndarray, start: tuple) -> list[tuple]:
    """Moore boundary tracing of the component containing ``start``.

    ``start`` must be the first foreground pixel of its component in
    row-major order (its West neighbor is then guaranteed background).
    Returns the closed outer boundary as a clockwise walk of (row, col)
    pixels; pixels on one-pixel-wide structures may repeat.
    """
    h, w = mask.shape

    def is_set(r, c):
        return 0 <= r < h and 0 <= c < w and bool(mask[r, c])

    cur = start
    back = (start[0], start[1] - 1)
    seen: set = set()
    walk: list[tuple] = []
    while (cur, back) not in seen:
        seen.add((cur, back))
        walk.append(cur)
        idx = _MOORE.index((back[0] - cur[0], back[1] - cur[1]))
        nxt = None
        for step in range(1, 9):
            dr, dc = _MOORE[(idx + step) % 8]
            cand = (cur[0] + dr, cur[1] + dc)
            if is_set(*cand):
                nxt = cand
                break
            back = cand
        if nxt is None:
            break  # isolated pixel
        cur = nxt
    return walk


def _perpendicular_distance(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    seg_len = math.hypot(dx, dy)
    if seg_len == 0.0:
        return math.hypot(px - ax, py - ay)
    return abs(dx * (ay - py) - (ax - px) * dy) / seg_len


def rdp(points: list[tuple], epsilon: float) -> list[tuple]:
    """Ramer-Douglas-Peucker simplification of an open polyline."""
    if len(points) < 3:
        return list(points)
    stack = [(0, len(points) - 1)]
    keep = np.zeros(len(points), dtype=bool)
    keep[0] = keep[-1] = True
    while stack:
        lo, hi = stack.pop()
        max_d, max_i = 0.0, lo
        for i in range(lo + 1, hi):
            d = _perpendicular_distance(points[i], points[lo], points[hi])
            if d > max_d:
                max_d, max_i = d, i
        if max_d > epsilon:
            keep[max_i] = True
            stack.append((lo, max_i))
            stack.append((max_i, hi))
    return [p for p, k in zip(points, keep) if k]


def simplify_closed_contour(contour: list[tuple], epsilon: float) -> list[tuple]:
    """Simplify a closed contour by splitting at the point farthest from the
    first vertex and running RDP on both halves."""
    n = len(contour)
    if n < 3:
        return list(contour)
    p0 = contour[0]
    dists = [math.hypot(p[0] - p0[0], p[1] - p0[1]) for p in contour]
    m = int(np.argmax(dists))
    if m == 0:
        return list(contour)
    first = rdp(contour[: m + 1], epsilon)
    second = rdp(contour[m:] + [p0], epsilon)
    return first[:-1] + second[:-1]


def contour_perimeter(contour: list[tuple]) -> float:
    """Closed-contour perimeter in pixels (Euclidean, wrapping around)."""
    total = 0.0
    for i in range(len(contour)):
        a = contour[i]
        b = contour[(i + 1) % len(contour)]
        total += math.hypot(b[0] - a[0], b[1] - a[1])
    return total


def fill_polygon(poly: list[tuple], shape: tuple) -> np.ndarray:
    """Rasterize a polygon with integer vertices using even-odd scanline fill.

    A pixel is set iff its center lies on an edge (exact lattice-point test)
    or is strictly interior under the even-odd rule. Horizontal edges add no
    crossings; vertex crossings use the half-open rule min(y) <= r < max(y).
    """
    h, w = shape
    out = np.zeros(shape, dtype=bool)
    n = len(poly)
    # Lattice points on edges, exact: integer points on a segment with
    # integer endpoints sit at gcd-spaced parameter steps.
    for i in range(n):
        r1, c1 = poly[i]
        r2, c2 = poly[(i + 1) % n]
        g = math.gcd(abs(r2 - r1), abs(c2 - c1))
        steps = [(r1, c1)] if g == 0 else [
            (r1 + t * (r2 - r1) // g, c1 + t * (c2 - c1) // g) for t in range(g + 1)
        ]
        for r, c in steps:
            if 0 <= r < h and 0 <= c < w:
                out[r, c] = True
    rows = [p[0] for p in poly]
    cols_idx = np.arange(w)
    for r in range(max(0, min(rows)), min(h, max(rows) + 1)):
        crossings = np.zeros(w, dtype=np.int64)
        for i in range(n):
            r1, c1 = poly[i]
            r2, c2 = poly[(i + 1) % n]
            if min(r1, r2) <= r < max(r1, r2):
                x = c1 + (r - r1) * (c2 - c1) / (r2 - r1)
                crossings += cols_idx < x
        out[r] |= crossings % 2 == 1
    return out


def degrade_polygon(m: MaskSequence, epsilon_fraction: float) -> MaskSequence:
    """Replace each foreground component by its simplified outer polygon.

    Outer boundaries come from Moore tracing of 8-connected components, are
    simplified with RDP at epsilon = epsilon_fraction * perimeter, and filled
    with even-odd scanline fill; interior holes are discarded. Components
    with fewer than 3 boundary pixels are dropped.
    """
    if epsilon_fraction <= 0:
        raise ValueError(f"epsilon_fraction must be > 0, got {epsilon_fraction}")
    frames = []
    for frame in m.data:
        out = np.zeros(frame.shape, dtype=bool)
        labeled, count = ndimage.label(frame, structure=_EIGHT_CONNECTED)
        for label in range(1, count + 1):
            comp = labeled == label
            start_r, start_c = np.argwhere(comp)[0]
            contour = trace_boundary(comp, (int(start_r), int(start_c)))
            if len(contour) < 3:
                continue
            eps = epsilon_fraction * contour_perimeter(contour)
            poly = simplify_closed_contour(contour, eps)
            if len(poly) < 3:
                continue
            out |= fill_polygon(poly, frame.shape)
        frames.append(out.astype(np.uint8))
    return MaskSequence(np.stack(frames))


def apply_degradation(m: MaskSequence, cfg: DegradationConfig) -> MaskSequence:
    if cfg.kind == "downsample":
        return degrade_downsample(m, cfg.downsample_factor)
    eps = cfg.epsilon_fraction
    return degrade_polygon(m, eps)
