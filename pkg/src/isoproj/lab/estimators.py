"""Box counting, projected content and alpha-energy estimators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..transversality import frame_coordinates
from .ifs import DyadicCover


@dataclass(frozen=True)
class DimensionReport:
    scales: list[float]
    counts: list[int]
    slope: float
    r2: float
    window: tuple[int, int]  # half-open index range used in the fit


def _as_points(data) -> np.ndarray:
    if isinstance(data, DyadicCover):
        return data.centers
    pts = np.asarray(data, dtype=float)
    return pts[:, None] if pts.ndim == 1 else pts


def occupied_counts(points, scales) -> list[int]:
    """Number of grid boxes of each side length hit by ``points``."""
    pts = _as_points(points)
    if pts.shape[1] == 1:
        # floor is monotone, so one sort serves every scale
        x = np.sort(pts[:, 0])
        return [int(1 + np.count_nonzero(np.diff(np.floor(x / s)))) for s in scales]
    counts = []
    for s in scales:
        idx = np.floor(pts / s).astype(np.int64)
        order = np.lexsort(idx.T[::-1])
        idx = idx[order]
        counts.append(int(1 + np.count_nonzero(np.any(np.diff(idx, axis=0) != 0, axis=1))))
    return counts


def loglog_fit(scales, counts) -> tuple[float, float]:
    """Least-squares slope and r^2 of log(count) against log(1/scale)."""
    x = -np.log(np.asarray(scales, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    xm, ym = x - x.mean(), y - y.mean()
    slope = float(xm @ ym / (xm @ xm))
    ss_tot = float(ym @ ym)
    ss_res = float(np.sum((ym - slope * xm) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return slope, float(np.clip(r2, 0.0, 1.0))


def _check_scales(scales) -> np.ndarray:
    s = np.asarray(scales, dtype=float)
    if s.ndim != 1 or s.size < 4:
        raise ValueError("box counting needs at least 4 scales")
    if np.any(s <= 0) or np.any(np.diff(s) >= 0):
        raise ValueError("scales must be positive and strictly decreasing")
    ratios = s[1:] / s[:-1]
    if not np.allclose(ratios, ratios[0], rtol=1e-6, atol=0):
        raise ValueError("scales must decrease geometrically")
    return s


def box_count_dimension(points_or_cover, scales, window: tuple[int, int] | None = None) -> DimensionReport:
    """Box-counting slope; by default the coarsest and finest scales are dropped."""
    s = _check_scales(scales)
    counts = occupied_counts(points_or_cover, s)
    lo, hi = window if window is not None else (1, len(s) - 1)
    if hi - lo < 2 or lo < 0 or hi > len(s):
        raise ValueError("fewer than 2 usable scales in the regression window")
    slope, r2 = loglog_fit(s[lo:hi], counts[lo:hi])
    return DimensionReport(scales=[float(v) for v in s], counts=counts, slope=slope, r2=r2, window=(lo, hi))


def geometric_scales(base: float, first: int, last: int) -> list[float]:
    """[base^first, ..., base^last]."""
    return [base ** k for k in range(first, last + 1)]


def grid_content(coords, eps: float) -> float:
    """count(occupied eps-cells) * eps^m for (N, m) coordinates."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    count = occupied_counts(coords, [eps])[0]
    return count * eps ** coords.shape[1]


def projected_measure_estimate(V, cover: DyadicCover, eps: float) -> float:
    """Upper-content proxy for H^m(P_V E): eps-cells of V hit by projected cell centers."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return grid_content(frame_coordinates(V, cover.centers), eps)


def energy_estimate(points, alpha: float, pairs: int | None = None, seed: int = 0, chunk: int = 1024) -> float:
    """Mean of |x - y|^{-alpha} over distinct pairs of the empirical measure.

    ``pairs=None`` averages over every ordered pair i != j; otherwise
    ``pairs`` index pairs are drawn uniformly from the distinct ones.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    pts = _as_points(points)
    N = pts.shape[0]
    if N < 2:
        raise ValueError("need at least two points")
    if pairs is None:
        total = 0.0
        for lo in range(0, N, chunk):
            block = pts[lo:lo + chunk]
            d = np.sqrt(np.sum((block[:, None, :] - pts[None, :, :]) ** 2, axis=-1))
            rows = np.arange(block.shape[0])
            d[rows, lo + rows] = np.inf  # exclude the diagonal
            total += float(np.sum(d ** -alpha))
        return total / (N * (N - 1))
    rng = np.random.default_rng(seed)
    i = rng.integers(N, size=pairs)
    j = (i + rng.integers(1, N, size=pairs)) % N
    d = np.linalg.norm(pts[i] - pts[j], axis=1)
    return float(np.mean(d ** -alpha))
