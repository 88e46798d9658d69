"""Projection experiments over Haar-random isotropic planes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..grassmannian import _check_nm, haar_samples
from ..heisenberg import horizontal_coordinates, lift
from ..transversality import frame_coordinates
from .estimators import box_count_dimension, geometric_scales, grid_content
from .ifs import BudgetError, DyadicCover, IFSSpec, embed_cover, ifs_cover

MAX_PLANES = 1000
DIM_TOL = 0.1
MEASURE_THRESHOLD = 0.5


@dataclass(frozen=True)
class ExperimentReport:
    n: int
    m: int
    level: int
    seed: int
    target_dimension: float
    case: int  # 1: target <= m (dimension preserved), 2: target > m (positive measure)
    scales: list[float]
    slopes: np.ndarray = field(repr=False)
    r2: np.ndarray = field(repr=False)
    measures: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)  # (planes, scales) occupied boxes
    exceptional_fraction: float
    within_fraction: float  # planes with |slope - target| <= dim_tol
    quantiles: dict = field(default_factory=dict)

    def rows(self):
        for k, (s, r, mu) in enumerate(zip(self.slopes, self.r2, self.measures)):
            yield {"plane": k, "slope": float(s), "r2": float(r), "measure": float(mu)}


def _cover_in(spec: IFSSpec, n: int, level: int) -> DyadicCover:
    if spec.d > 2 * n:
        raise ValueError(f"a set in R^{spec.d} does not fit in R^{2 * n}")
    return embed_cover(ifs_cover(spec, level), spec.d, 2 * n, 0)


def default_scales(spec: IFSSpec, level: int) -> list[float]:
    """spec.scale^k for k = 1 .. level - 1."""
    if level < 5:
        raise ValueError("level must be at least 5 to give 4 box-counting scales")
    return geometric_scales(spec.scale, 1, level - 1)


def _check_budget(n: int, m: int, planes: int) -> None:
    _check_nm(n, m)
    if planes < 1:
        raise ValueError("planes must be positive")
    if planes > MAX_PLANES:
        raise BudgetError(f"{planes} planes exceeds the budget of {MAX_PLANES}")


def _sweep(coords_for, frames, scales, eps, target, m, seed, n, level, dim_tol, measure_threshold):
    slopes = np.empty(len(frames))
    r2 = np.empty(len(frames))
    measures = np.empty(len(frames))
    counts = np.empty((len(frames), len(scales)), dtype=np.int64)
    for k, frame in enumerate(frames):
        coords = coords_for(frame)
        rep = box_count_dimension(coords, scales)
        slopes[k], r2[k] = rep.slope, rep.r2
        counts[k] = rep.counts
        measures[k] = grid_content(coords, eps)
    case = 1 if target <= m else 2
    if case == 1:
        exceptional = float(np.mean(slopes < target - dim_tol))
    else:
        exceptional = float(np.mean(measures < measure_threshold))
    qs = (0.05, 0.25, 0.5, 0.75, 0.95)
    return ExperimentReport(
        n=n,
        m=m,
        level=level,
        seed=seed,
        target_dimension=float(target),
        case=case,
        scales=list(scales),
        slopes=slopes,
        r2=r2,
        measures=measures,
        counts=counts,
        exceptional_fraction=exceptional,
        within_fraction=float(np.mean(np.abs(slopes - target) <= dim_tol)),
        quantiles={
            "slope": {q: float(np.quantile(slopes, q)) for q in qs},
            "measure": {q: float(np.quantile(measures, q)) for q in qs},
        },
    )


def projection_dimension_experiment(
    spec: IFSSpec,
    n: int,
    m: int,
    planes: int,
    level: int,
    seed: int = 0,
    scales=None,
    eps: float | None = None,
    dim_tol: float = DIM_TOL,
    measure_threshold: float = MEASURE_THRESHOLD,
) -> ExperimentReport:
    """Box-count P_V(E) and its eps-content for Haar-random isotropic m-planes V.

    Plane k uses the sample stream (seed, k). ``eps`` defaults to the cell side.
    """
    _check_budget(n, m, planes)
    cover = _cover_in(spec, n, level)
    scales = default_scales(spec, level) if scales is None else scales
    eps = cover.cell_side if eps is None else eps
    centers = cover.centers
    frames = haar_samples(n, m, planes, seed)
    return _sweep(lambda V: frame_coordinates(V, centers), frames, scales, eps,
                  spec.target_dimension, m, seed, n, level, dim_tol, measure_threshold)


def heisenberg_projection_experiment(
    spec: IFSSpec,
    n: int,
    m: int,
    planes: int,
    level: int,
    seed: int = 0,
    t_rule=None,
    scales=None,
    eps: float | None = None,
    dim_tol: float = DIM_TOL,
    measure_threshold: float = MEASURE_THRESHOLD,
) -> ExperimentReport:
    """Same sweep as the Euclidean experiment, routed through horizontal projections.

    The set is lifted to H^n with ``t_rule`` (None for the t = 0 slab, or a
    callable of the (N, 2n) points).
    """
    _check_budget(n, m, planes)
    cover = _cover_in(spec, n, level)
    scales = default_scales(spec, level) if scales is None else scales
    eps = cover.cell_side if eps is None else eps
    points = lift(cover.centers, t_rule)
    frames = haar_samples(n, m, planes, seed)
    return _sweep(lambda V: horizontal_coordinates(V, points), frames, scales, eps,
                  spec.target_dimension, m, seed, n, level, dim_tol, measure_threshold)


def heisenberg_points_experiment(
    points, n: int, m: int, planes: int, scales, eps: float, target: float, seed: int = 0,
    level: int = 0,
) -> ExperimentReport:
    """Horizontal-projection sweep for an arbitrary (N, 2n+1) point set in H^n."""
    _check_budget(n, m, planes)
    points = np.asarray(points, dtype=float)
    if points.shape[1] != 2 * n + 1:
        raise ValueError(f"points must lie in H^{n} = R^{2 * n + 1}")
    frames = haar_samples(n, m, planes, seed)
    return _sweep(lambda V: horizontal_coordinates(V, points), frames, scales, eps,
                  target, m, seed, n, level, DIM_TOL, MEASURE_THRESHOLD)


def projected_measure_decay(spec: IFSSpec, n: int, m: int, planes: int, levels, seed: int = 0) -> dict:
    """eps-content of P_V(E) at eps = cell side, per level, for a fixed set of planes.

    Returns ``{"levels", "medians", "measures"}`` where measures has shape
    (len(levels), planes).
    """
    _check_budget(n, m, planes)
    frames = haar_samples(n, m, planes, seed)
    levels = list(levels)
    measures = np.empty((len(levels), planes))
    for a, level in enumerate(levels):
        cover = _cover_in(spec, n, level)
        centers = cover.centers
        for k, frame in enumerate(frames):
            measures[a, k] = grid_content(frame_coordinates(frame, centers), cover.cell_side)
    return {"levels": levels, "medians": np.median(measures, axis=1), "measures": measures}
