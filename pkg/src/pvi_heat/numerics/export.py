"""CSV export for trajectories and residual sweeps."""

from __future__ import annotations

import csv
from typing import Iterable, TextIO

from .pvi import PviTrajectory
from .wave import HeatResidual

TRAJECTORY_COLUMNS = ("x", "u", "u_prime")
RESIDUAL_COLUMNS = ("t", "x", "residual_h", "residual_h2", "order")


def write_trajectory_csv(stream: TextIO, traj: PviTrajectory) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for row in zip(traj.x, traj.u, traj.u_prime):
        w.writerow(repr(float(v)) for v in row)


def write_residual_csv(stream: TextIO, residuals: Iterable[HeatResidual]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(RESIDUAL_COLUMNS)
    for r in residuals:
        w.writerow(repr(float(v)) for v in (r.t, r.x, r.residual_h, r.residual_h2, r.order))
