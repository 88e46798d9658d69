"""Equal-ratio self-similar sets and their canonical covers."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

MAX_CELLS = 2 ** 20


class BudgetError(RuntimeError):
    """Requested work exceeds the configured memory or runtime budget."""


@dataclass(frozen=True)
class IFSSpec:
    """Maps x -> scale * x + t_i on [0, 1]^d with a common contraction ratio.

    Level-1 cells [t_i, t_i + scale)^d must be pairwise disjoint and lie in
    the unit cube.
    """

    scale: float
    translations: np.ndarray
    name: str = ""

    def __post_init__(self):
        t = np.array(self.translations, dtype=float)
        if t.ndim != 2 or t.shape[0] < 1:
            raise ValueError("translations must be a non-empty (N, d) array")
        if not 0 < self.scale < 1:
            raise ValueError("scale must lie in (0, 1)")
        tol = 1e-12
        if np.any(t < -tol) or np.any(t + self.scale > 1 + tol):
            raise ValueError("level-1 cells must lie in the unit cube")
        for a, b in combinations(range(t.shape[0]), 2):
            if np.all(np.abs(t[a] - t[b]) < self.scale - tol):
                raise ValueError(f"level-1 cells {a} and {b} overlap")
        t.setflags(write=False)
        object.__setattr__(self, "translations", t)

    @property
    def d(self) -> int:
        return self.translations.shape[1]

    @property
    def maps(self) -> list[tuple[float, np.ndarray]]:
        return [(self.scale, t) for t in self.translations]

    @property
    def target_dimension(self) -> float:
        """Similarity dimension log N / log(1 / scale)."""
        return float(np.log(len(self.translations)) / np.log(1.0 / self.scale))


def four_corner_cantor() -> IFSSpec:
    """Four maps of ratio 1/4 at the corners of the unit square; dimension 1."""
    return corner_dust(0.25, name="four-corner")


def corner_dust(scale: float, name: str = "") -> IFSSpec:
    """Four maps of ratio ``scale`` at the corners of the unit square."""
    c = 1.0 - scale
    return IFSSpec(scale, [[0, 0], [c, 0], [0, c], [c, c]], name=name or f"corner-dust-{scale:g}")


def cantor_dust(dimension: float) -> IFSSpec:
    """Corner dust with similarity dimension ``dimension`` (< 2)."""
    if not 0 < dimension < 2:
        raise ValueError("corner dust dimension must lie in (0, 2)")
    return corner_dust(4.0 ** (-1.0 / dimension), name=f"cantor-dust-{dimension:g}")


def unit_square() -> IFSSpec:
    return IFSSpec(0.5, [[0, 0], [0.5, 0], [0, 0.5], [0.5, 0.5]], name="square")


def middle_thirds() -> IFSSpec:
    return IFSSpec(1.0 / 3.0, [[0.0], [2.0 / 3.0]], name="middle-thirds")


PRESETS = {
    "four-corner": four_corner_cantor,
    "cantor-dust": lambda: cantor_dust(0.75),
    "square": unit_square,
    "middle-thirds": middle_thirds,
}


def preset(name: str, dimension: float | None = None) -> IFSSpec:
    if name == "cantor-dust" and dimension is not None:
        return cantor_dust(dimension)
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown set {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class DyadicCover:
    """Level-``level`` cells of an attractor: cubes [origin, origin + cell_side)."""

    level: int
    cell_side: float
    origins: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.origins.shape[1]

    @property
    def centers(self) -> np.ndarray:
        return self.origins + 0.5 * self.cell_side

    @property
    def cells(self) -> np.ndarray:
        """Integer multi-indices origin / cell_side (exact for grid-aligned sets)."""
        return np.rint(self.origins / self.cell_side).astype(np.int64)

    def __len__(self) -> int:
        return self.origins.shape[0]


def ifs_cover(spec: IFSSpec, level: int, max_cells: int = MAX_CELLS) -> DyadicCover:
    """All images f_{i1} o ... o f_{iL}([0, 1]^d) at the given level."""
    if level < 0:
        raise ValueError("level must be non-negative")
    count = len(spec.translations) ** level
    if count > max_cells:
        raise BudgetError(f"level {level} needs {count} cells, budget is {max_cells}")
    origins = np.zeros((1, spec.d))
    for _ in range(level):
        # f_i(x) = scale * x + t_i applied on the outside of the composition
        origins = (spec.translations[:, None, :] + spec.scale * origins[None, :, :]).reshape(-1, spec.d)
    return DyadicCover(level, spec.scale ** level, origins)


def embed_cover(cover: DyadicCover, d: int, D: int, offset: int = 0) -> DyadicCover:
    """Place a d-dimensional cover in coordinates offset .. offset+d-1 of R^D."""
    if cover.d != d:
        raise ValueError(f"cover lives in R^{cover.d}, not R^{d}")
    if d > D or offset < 0 or offset + d > D:
        raise ValueError(f"invalid offset {offset} for embedding R^{d} into R^{D}")
    if d == D:
        return cover
    origins = np.zeros((len(cover), D))
    origins[:, offset:offset + d] = cover.origins
    return DyadicCover(cover.level, cover.cell_side, origins)
