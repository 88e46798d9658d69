"""Empirical projection experiments on self-similar sets."""

from .estimators import (
    DimensionReport,
    box_count_dimension,
    energy_estimate,
    geometric_scales,
    projected_measure_estimate,
)
from .experiments import (
    ExperimentReport,
    heisenberg_points_experiment,
    heisenberg_projection_experiment,
    projected_measure_decay,
    projection_dimension_experiment,
)
from .ifs import (
    BudgetError,
    DyadicCover,
    IFSSpec,
    cantor_dust,
    embed_cover,
    four_corner_cantor,
    ifs_cover,
    preset,
    unit_square,
)

__all__ = [
    "BudgetError",
    "DimensionReport",
    "DyadicCover",
    "ExperimentReport",
    "IFSSpec",
    "box_count_dimension",
    "cantor_dust",
    "embed_cover",
    "energy_estimate",
    "four_corner_cantor",
    "geometric_scales",
    "heisenberg_points_experiment",
    "heisenberg_projection_experiment",
    "ifs_cover",
    "preset",
    "projected_measure_decay",
    "projected_measure_estimate",
    "projection_dimension_experiment",
    "unit_square",
]
