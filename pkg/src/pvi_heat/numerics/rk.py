"""Dormand-Prince 5(4) with step-size control and quartic dense output."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Fr
from typing import Callable, Optional

import numpy as np

REACHED_END = "reached endpoint"
SINGULAR = "approached singular locus"
UNDERFLOW = "step underflow"

ORDER = 5

C = np.array([0, Fr(1, 5), Fr(3, 10), Fr(4, 5), Fr(8, 9), 1], dtype=float)
A = [
    [],
    [Fr(1, 5)],
    [Fr(3, 40), Fr(9, 40)],
    [Fr(44, 45), Fr(-56, 15), Fr(32, 9)],
    [Fr(19372, 6561), Fr(-25360, 2187), Fr(64448, 6561), Fr(-212, 729)],
    [Fr(9017, 3168), Fr(-355, 33), Fr(46732, 5247), Fr(49, 176), Fr(-5103, 18656)],
]
A = [np.array(row, dtype=float) for row in A]
B = np.array([Fr(35, 384), 0, Fr(500, 1113), Fr(125, 192), Fr(-2187, 6784), Fr(11, 84)], dtype=float)
# difference between the 5th and embedded 4th order weights, FSAL stage last
E = np.array([Fr(-71, 57600), 0, Fr(71, 16695), Fr(-71, 1920), Fr(17253, 339200), Fr(-22, 525), Fr(1, 40)],
             dtype=float)
# Shampine's continuous extension: y(t + s h) = y + h K^T P [s, s^2, s^3, s^4]
P = np.array([
    [1, Fr(-8048581381, 2820520608), Fr(8663915743, 2820520608), Fr(-12715105075, 11282082432)],
    [0, 0, 0, 0],
    [0, Fr(131558114200, 32700410799), Fr(-68118460800, 10900136933), Fr(87487479700, 32700410799)],
    [0, Fr(-1754552775, 470086768), Fr(14199869525, 1410260304), Fr(-10690763975, 1880347072)],
    [0, Fr(127303824393, 49829197408), Fr(-318862633887, 49829197408), Fr(701980252875, 199316789632)],
    [0, Fr(-282668133, 205662961), Fr(2019193451, 616988883), Fr(-1453857185, 822651844)],
    [0, Fr(40617522, 29380423), Fr(-110615467, 29380423), Fr(69997945, 29380423)],
], dtype=float)

Rhs = Callable[[float, np.ndarray], np.ndarray]


def _stages(f: Rhs, t: float, y: np.ndarray, h: float, k0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    K = np.empty((7,) + y.shape, dtype=np.result_type(y, k0))
    K[0] = k0
    for s in range(1, 6):
        K[s] = f(t + C[s] * h, y + h * np.tensordot(A[s], K[:s], axes=1))
    y_new = y + h * np.tensordot(B, K[:6], axes=1)
    K[6] = f(t + h, y_new)
    return y_new, K


@dataclass
class RKSolution:
    """Accepted steps of an integration plus the stage data for dense output."""

    t: np.ndarray
    y: np.ndarray
    status: str
    n_accepted: int = 0
    n_rejected: int = 0
    n_evaluations: int = 0
    stages: list = field(default_factory=list, repr=False)
    message: str = ""

    def __call__(self, t) -> np.ndarray:
        """Dense output at ``t`` (scalar), inside the integrated span."""
        ts = self.t
        lo, hi = min(ts[0], ts[-1]), max(ts[0], ts[-1])
        if not lo - 1e-12 * (1 + abs(lo)) <= t <= hi + 1e-12 * (1 + abs(hi)):
            raise ValueError(f"t = {t} outside the integrated span [{lo}, {hi}]")
        if len(ts) == 1:
            return self.y[0].copy()
        forward = ts[-1] > ts[0]
        i = np.searchsorted(ts, t) if forward else len(ts) - np.searchsorted(ts[::-1], t, side="right")
        i = min(max(i, 1), len(ts) - 1)
        t0, h = ts[i - 1], ts[i] - ts[i - 1]
        s = (t - t0) / h
        powers = np.array([s, s**2, s**3, s**4])
        return self.y[i - 1] + h * np.tensordot(P @ powers, self.stages[i - 1], axes=1)


def _error_norm(err, y, y_new, rtol, atol) -> float:
    scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def dopri5(
    f: Rhs,
    t0: float,
    y0,
    t_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    h0: Optional[float] = None,
    stop: Optional[Callable[[float, np.ndarray], Optional[str]]] = None,
    max_steps: int = 200_000,
) -> RKSolution:
    """Integrate y' = f(t, y) from t0 to t_end (either direction).

    ``stop(t, y)`` is consulted at every accepted point; a non-empty return
    value ends the run with status SINGULAR and becomes the message.  The
    offending step itself is kept, so the dense output covers it.
    """
    y = np.atleast_1d(np.asarray(y0))
    if not np.iscomplexobj(y):
        y = y.astype(float)
    direction = 1.0 if t_end >= t0 else -1.0
    span = abs(t_end - t0)
    sol = RKSolution(np.array([t0]), y[None, :].copy(), REACHED_END)
    if span == 0:
        return sol
    ts, ys = [t0], [y.copy()]
    k = f(t0, y)
    sol.n_evaluations = 1
    if h0 is None:
        d0, d1 = np.linalg.norm(y) + 1e-300, np.linalg.norm(k) + 1e-300
        h0 = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
        h0 = min(h0, span)
    h = h0
    t = t0
    h_min = 16 * np.finfo(float).eps * max(abs(t0), abs(t_end), 1.0)

    for _ in range(max_steps):
        remaining = abs(t_end - t)
        if remaining <= h_min:
            break
        h = min(h, remaining)
        if h < h_min:
            sol.status, sol.message = UNDERFLOW, f"step size fell below {h_min:.3g} at t = {t}"
            break
        with np.errstate(all="ignore"):
            try:
                y_new, K = _stages(f, t, y, direction * h, k)
            except (ZeroDivisionError, FloatingPointError):
                y_new = None
        sol.n_evaluations += 6
        if y_new is None or not np.all(np.isfinite(K)):
            sol.n_rejected += 1
            h *= 0.2
            continue
        err = _error_norm(direction * h * np.tensordot(E, K, axes=1), y, y_new, rtol, atol)
        if err <= 1.0:
            t_new = t_end if h == remaining else t + direction * h
            sol.stages.append(K)
            ts.append(t_new)
            ys.append(y_new)
            sol.n_accepted += 1
            t, y, k = t_new, y_new, K[6]
            factor = 10.0 if err == 0 else min(10.0, 0.9 * err ** (-1 / ORDER))
            h *= factor
            if stop is not None:
                reason = stop(t, y)
                if reason:
                    sol.status, sol.message = SINGULAR, reason
                    break
        else:
            sol.n_rejected += 1
            h *= max(0.2, 0.9 * err ** (-1 / ORDER))
    else:
        sol.status, sol.message = UNDERFLOW, f"no progress after {max_steps} steps"

    sol.t = np.array(ts)
    sol.y = np.array(ys)
    return sol


def dopri5_fixed(f: Rhs, t0: float, y0, t_end: float, n_steps: int) -> np.ndarray:
    """Fixed-step run of the 5th order solution; used for order measurements."""
    y = np.atleast_1d(np.asarray(y0, dtype=float))
    h = (t_end - t0) / n_steps
    t = t0
    k = f(t, y)
    for _ in range(n_steps):
        y, K = _stages(f, t, y, h, k)
        k = K[6]
        t += h
    return y
