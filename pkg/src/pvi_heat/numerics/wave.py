"""Wave functions of the gauge-transformed Lax pair, transported in x.

Along x the pair closes on (Psi, Psi_t) at each fixed t: Psi_x from the
deformation equation, Psi_tx from its t-derivative with Psi_tt eliminated by
the spectral equation.  No t-differences are taken.  The heat-equation check
then builds Psi_x by a centered difference of transported grids instead, and
uses the u-free operator from the elimination pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..forms import Theta
from ..pipeline import heat_operator, transport_coefficients
from ..kernel import RatFunc
from .pvi import PviTrajectory, Tolerances, pvi_field
from .rk import REACHED_END, dopri5

_ARGS = ("t", "x", "u", "u1")


class ExclusionZoneError(ValueError):
    pass


@dataclass(frozen=True)
class WaveGrid:
    nodes: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    x: float

    def __post_init__(self):
        for name in ("nodes", "psi", "dpsi"):
            object.__setattr__(self, name, np.asarray(getattr(self, name)))
        if not (self.nodes.shape == self.psi.shape == self.dpsi.shape):
            raise ValueError("nodes, psi and dpsi must have the same shape")

    def index(self, t_node: float) -> int:
        i = int(np.argmin(np.abs(self.nodes - t_node)))
        if abs(self.nodes[i] - t_node) > 1e-12 * (1 + abs(t_node)):
            raise ValueError(f"{t_node} is not a grid node")
        return i

    def scaled(self, a) -> WaveGrid:
        return replace(self, psi=a * self.psi, dpsi=a * self.dpsi)

    def __add__(self, other: WaveGrid) -> WaveGrid:
        if not (np.array_equal(self.nodes, other.nodes) and self.x == other.x):
            raise ValueError("grids live on different nodes or at different x")
        return replace(self, psi=self.psi + other.psi, dpsi=self.dpsi + other.dpsi)


@lru_cache(maxsize=16)
def _compiled_transport(theta: Theta, g_value: Fraction):
    co = transport_coefficients(theta, RatFunc(g_value))
    return tuple(tuple(c.to_callable(_ARGS) for c in pair) for pair in (co.psi_x, co.psi_tx, co.psi_tt))


@lru_cache(maxsize=16)
def _compiled_heat(theta: Theta):
    heat, _ = heat_operator(theta, "symbolic")
    return tuple(heat.op.coefficients()[n].to_callable(("t", "x", "g")) for n in ("c_tt", "c_t", "c_x", "c_0"))


def _key(g) -> Fraction:
    return Fraction(g)


def _check_nodes(nodes, x, u, radius):
    for label, point in (("0", 0.0), ("1", 1.0), ("x", x), ("u(x)", u)):
        d = np.abs(nodes - point)
        i = int(np.argmin(d))
        if d[i] < radius:
            return f"node t = {nodes[i]:.12g} within {radius:g} of {label} at x = {x:.12g}"
    return None


def initial_grid(theta: Theta, x0: float, u0: float, u1_0: float, nodes, psi0=1.0, dpsi0=0.0,
                 base: float | None = None, g=0, tol: Tolerances = Tolerances()) -> WaveGrid:
    """Solve the spectral equation in t at fixed x0, from ``base`` (default
    the first node) with data (psi0, dpsi0), and sample it at the nodes.

    All nodes and the base must share one real interval free of the
    singular points 0, 1, x0, u0.
    """
    nodes = np.asarray(nodes, dtype=float)
    base = float(nodes[0]) if base is None else float(base)
    lo, hi = min(base, nodes.min()), max(base, nodes.max())
    for point in (0.0, 1.0, x0, u0):
        if lo - tol.exclusion_radius < point < hi + tol.exclusion_radius:
            raise ExclusionZoneError(f"singular point t = {point:.12g} lies inside the node interval [{lo}, {hi}]")
    (_, _, (a, b)) = _compiled_transport(theta, _key(g))

    def f(t, y):
        return np.array([y[1], a(t, x0, u0, u1_0) * y[0] + b(t, x0, u0, u1_0) * y[1]])

    y0 = np.array([psi0, dpsi0], dtype=complex)
    values = []
    for direction_end in (lo, hi):
        sol = dopri5(f, base, y0, direction_end, rtol=tol.rtol, atol=tol.atol)
        values.append(sol)
    out = np.array([(values[0] if t <= base else values[1])(t) for t in nodes])
    return WaveGrid(nodes, out[:, 0], out[:, 1], x0)


def transport_field(theta: Theta, nodes: np.ndarray, g=0):
    """Joint x-field for y = [u, u', Psi(nodes), Psi_t(nodes)]."""
    (a0, a1), (b0, b1), _ = _compiled_transport(theta, _key(g))
    pvi = pvi_field(theta)
    n = len(nodes)

    def f(x, y):
        u, up = y[0].real, y[1].real
        psi, dpsi = y[2:2 + n], y[2 + n:]
        out = np.empty_like(y)
        out[:2] = pvi(x, np.array([u, up]))
        out[2:2 + n] = a0(nodes, x, u, up) * psi + a1(nodes, x, u, up) * dpsi
        out[2 + n:] = b0(nodes, x, u, up) * psi + b1(nodes, x, u, up) * dpsi
        return out

    return f


def wave_transport(traj: PviTrajectory, grid: WaveGrid, x_target: float, g=0,
                   tol: Tolerances | None = None) -> WaveGrid:
    """Evolve (Psi, Psi_t) at every node from grid.x to x_target.

    u(x) is carried along in the same system, started from the trajectory's
    dense output at grid.x.
    """
    tol = traj.tolerances if tol is None else tol
    lo, hi = traj.span
    for xv in (grid.x, x_target):
        if not lo <= xv <= hi:
            raise ValueError(f"x = {xv} outside the trajectory span [{lo}, {hi}]")
    u0, up0 = traj(grid.x)
    reason = _check_nodes(grid.nodes, grid.x, u0, tol.exclusion_radius)
    if reason:
        raise ExclusionZoneError(reason)
    y0 = np.concatenate([[u0, up0], grid.psi, grid.dpsi]).astype(complex)
    n = len(grid.nodes)
    sol = dopri5(
        transport_field(traj.theta, grid.nodes, g), grid.x, y0, x_target, rtol=tol.rtol, atol=tol.atol,
        stop=lambda x, y: _check_nodes(grid.nodes, x, y[0].real, tol.exclusion_radius),
    )
    if sol.status != REACHED_END:
        raise ExclusionZoneError(f"transport stopped: {sol.message}")
    y = sol.y[-1]
    return WaveGrid(grid.nodes, y[2:2 + n], y[2 + n:], float(x_target))


@dataclass(frozen=True)
class HeatResidual:
    t: float
    x: float
    steps: tuple[float, ...]
    residuals: tuple[float, ...]

    @property
    def residual_h(self) -> float:
        return self.residuals[0]

    @property
    def residual_h2(self) -> float:
        return self.residuals[1]

    @property
    def orders(self) -> tuple[float, ...]:
        r = self.residuals
        return tuple(float(np.log2(r[i] / r[i + 1])) for i in range(len(r) - 1))

    @property
    def order(self) -> float:
        return self.orders[0]


def heat_residual_sweep(traj: PviTrajectory, grid: WaveGrid, xs, h: float, g=0, perturbation: float = 0.0,
                        levels: int | None = None) -> list[HeatResidual]:
    """Residuals of the heat equation at every grid node and every x in ``xs``.

    For each step s in h, h/2, ..., Psi_x is the centered difference of the
    grids transported to x - s and x + s; Psi, Psi_t are transported to x and
    Psi_tt comes from the spectral equation.  ``perturbation`` is added to
    the identity coefficient of the heat operator.
    """
    tol = traj.tolerances
    levels = tol.richardson_levels if levels is None else levels
    (_, _, (a, b)) = _compiled_transport(traj.theta, _key(g))
    c_tt, c_t, c_x, c_0 = _compiled_heat(traj.theta)
    gv = float(g)
    t = grid.nodes
    out = []
    for xv in xs:
        center = wave_transport(traj, grid, xv, g)
        u, up = traj(xv)
        psi, dpsi = center.psi, center.dpsi
        psi_tt = a(t, xv, u, up) * psi + b(t, xv, u, up) * dpsi
        base = c_tt(t, xv, gv) * psi_tt + c_t(t, xv, gv) * dpsi + (c_0(t, xv, gv) + perturbation) * psi
        steps = tuple(h / 2**k for k in range(levels))
        per_step = []
        for s in steps:
            plus = wave_transport(traj, grid, xv + s, g).psi
            minus = wave_transport(traj, grid, xv - s, g).psi
            per_step.append(np.abs(base + c_x(t, xv, gv) * (plus - minus) / (2 * s)))
        for i, tv in enumerate(t):
            out.append(HeatResidual(float(tv), float(xv), steps, tuple(float(r[i]) for r in per_step)))
    return out


def heat_residual(traj: PviTrajectory, grid: WaveGrid, t_node: float, x: float, h: float, g=0,
                  perturbation: float = 0.0, levels: int | None = None) -> HeatResidual:
    i = grid.index(t_node)
    single = WaveGrid(grid.nodes[i:i + 1], grid.psi[i:i + 1], grid.dpsi[i:i + 1], grid.x)
    return heat_residual_sweep(traj, single, [x], h, g, perturbation, levels)[0]


def second_derivative_defect(theta: Theta, grid: WaveGrid, u: float, u1: float, g=0) -> np.ndarray:
    """Centered second difference of Psi in t minus Psi_tt from the spectral
    equation, at the interior nodes of a uniform grid."""
    t = grid.nodes
    d = np.diff(t)
    if not np.allclose(d, d[0], rtol=1e-12, atol=0):
        raise ValueError("nodes must be uniformly spaced")
    (_, _, (a, b)) = _compiled_transport(theta, _key(g))
    psi, dpsi = grid.psi, grid.dpsi
    fd = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / d[0] ** 2
    inner = t[1:-1]
    exact = a(inner, grid.x, u, u1) * psi[1:-1] + b(inner, grid.x, u, u1) * dpsi[1:-1]
    return fd - exact
