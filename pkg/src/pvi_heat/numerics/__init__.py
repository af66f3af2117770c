"""Floating-point validation: PVI trajectories, wave transport, heat residuals, AGM."""

from .elliptic import agm, elliptic_K_agm, hypergeometric_half, legendre_check, picard_period
from .export import RESIDUAL_COLUMNS, TRAJECTORY_COLUMNS, write_residual_csv, write_trajectory_csv
from .pvi import REACHED_END, SINGULAR, UNDERFLOW, PviTrajectory, Tolerances, integrate_pvi, pvi_field
from .rk import RKSolution, dopri5, dopri5_fixed
from .wave import (
    ExclusionZoneError,
    HeatResidual,
    WaveGrid,
    heat_residual,
    heat_residual_sweep,
    initial_grid,
    second_derivative_defect,
    wave_transport,
)
