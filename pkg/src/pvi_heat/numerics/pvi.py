"""Floating-point integration of PVI in the deformation variable x."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..forms import SingularLocusError, Theta, theta_correspondence
from .rk import REACHED_END, SINGULAR, UNDERFLOW, RKSolution, dopri5

__all__ = ["Tolerances", "PviTrajectory", "integrate_pvi", "pvi_field", "REACHED_END", "SINGULAR", "UNDERFLOW"]


@dataclass(frozen=True)
class Tolerances:
    rtol: float = 1e-11
    atol: float = 1e-13
    exclusion_radius: float = 1e-3
    richardson_levels: int = 2
    blowup: float = 1e8

    def __post_init__(self):
        for name in ("rtol", "atol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.exclusion_radius <= 0:
            raise ValueError("exclusion_radius must be positive")
        if self.richardson_levels < 2:
            raise ValueError("richardson_levels must be at least 2")


def pvi_field(theta: Theta):
    """Right-hand side (u, u')' of PVI as a float function of (x, y)."""
    params, _ = theta_correspondence(theta)
    a, b, c, d = (float(p.constant_value()) for p in (params.alpha, params.beta, params.gamma, params.delta))

    def f(x, y):
        u, v = y[0], y[1]
        um1, umx = u - 1, u - x
        acc = (
            0.5 * (1 / u + 1 / um1 + 1 / umx) * v * v
            - (1 / x + 1 / (x - 1) + 1 / umx) * v
            + u * um1 * umx / (x * x * (x - 1) ** 2)
            * (a + b * x / (u * u) + c * (x - 1) / (um1 * um1) + d * x * (x - 1) / (umx * umx))
        )
        return np.array([v, acc])

    return f


def _near_singular(x, u, radius, blowup):
    if abs(u) > blowup:
        return f"|u| exceeded {blowup:g} at x = {x:.12g} (movable pole)"
    for label, value in (("u", u), ("u - 1", u - 1), ("u - x", u - x), ("x", x), ("x - 1", x - 1)):
        if abs(value) < radius:
            return f"{label} within {radius:g} of zero at x = {x:.12g}"
    return None


@dataclass(frozen=True)
class PviTrajectory:
    theta: Theta
    x: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    tolerances: Tolerances
    termination: str
    message: str
    n_rejected: int
    solution: RKSolution

    def __call__(self, x: float) -> tuple[float, float]:
        """Dense-output (u, u') at x."""
        u, up = self.solution(x)
        return float(u), float(up)

    @property
    def span(self) -> tuple[float, float]:
        return float(min(self.x[0], self.x[-1])), float(max(self.x[0], self.x[-1]))

    @property
    def reached_end(self) -> bool:
        return self.termination == REACHED_END


def integrate_pvi(theta: Theta, x0: float, u0: float, u1_0: float, x_end: float,
                  tol: Tolerances = Tolerances()) -> PviTrajectory:
    """Integrate (u, u') from x0 to x_end, stopping near the singular locus."""
    if not theta.is_rational:
        raise ValueError("numeric integration needs rational theta")
    reason = _near_singular(x0, u0, tol.exclusion_radius, tol.blowup)
    if reason:
        raise SingularLocusError(f"initial point on the singular locus: {reason}")
    sol = dopri5(
        pvi_field(theta), x0, [u0, u1_0], x_end, rtol=tol.rtol, atol=tol.atol,
        stop=lambda x, y: _near_singular(x, y[0], tol.exclusion_radius, tol.blowup),
    )
    return PviTrajectory(theta, sol.t, sol.y[:, 0], sol.y[:, 1], tol, sol.status, sol.message, sol.n_rejected, sol)
