"""Complete elliptic integral K by the AGM, and the Legendre check of the
Picard reduction."""

from __future__ import annotations

import math


from ..kernel import LinOp
from ..pipeline import picard_reduction


def agm(a: float, b: float, rel_tol: float = 1e-16, max_iter: int = 64) -> float:
    if a < 0 or b < 0:
        raise ValueError("agm needs non-negative arguments")
    for _ in range(max_iter):
        if abs(a - b) <= rel_tol * abs(a):
            return (a + b) / 2
        a, b = (a + b) / 2, math.sqrt(a * b)
    return (a + b) / 2


def elliptic_K_agm(k: float) -> float:
    """K(k) = pi / (2 AGM(1, sqrt(1 - k^2))), modulus k in [0, 1)."""
    if not 0 <= k < 1:
        raise ValueError(f"modulus must lie in [0, 1), got {k}")
    return math.pi / (2 * agm(1.0, math.sqrt((1 - k) * (1 + k))))


def hypergeometric_half(t: float, max_terms: int = 100_000) -> tuple[float, float, float]:
    """2F1(1/2, 1/2; 1; t) and its first two t-derivatives by direct summation."""
    if not 0 <= t < 1:
        raise ValueError(f"series needs 0 <= t < 1, got {t}")
    a = 1.0
    f = df = d2f = 0.0
    p = 1.0  # t^n
    for n in range(max_terms):
        f += a * p
        if n >= 1:
            df += n * a * p / t
        if n >= 2:
            d2f += n * (n - 1) * a * p / (t * t)
        step = a * p * (n + 1) * (n + 1)
        if n > 2 and step < 1e-18 * abs(d2f) * t * t:
            return f, df, d2f
        a *= ((2 * n + 1) / (2 * n + 2)) ** 2
        p *= t
    raise ValueError(f"hypergeometric series did not converge at t = {t}")


def picard_period(t: float) -> float:
    """(2/pi) K(sqrt t), the regular solution of Legendre's equation at 0."""
    return 2 / math.pi * elliptic_K_agm(math.sqrt(t))


def legendre_check(t_points, operator: LinOp | None = None) -> float:
    """Largest |L Psi| over ``t_points`` with Psi = (2/pi) K(sqrt t).

    Psi itself comes from the AGM, its derivatives from the series.
    """
    op = picard_reduction() if operator is None else operator
    cs = [op.coefficients()[n].to_callable(("t",)) for n in ("c_tt", "c_t", "c_0")]
    worst = 0.0
    for t in t_points:
        if not 0 < t < 1:
            raise ValueError(f"t = {t} outside (0, 1)")
        psi = picard_period(t)
        _, d1, d2 = hypergeometric_half(t)
        worst = max(worst, abs(cs[0](t) * d2 + cs[1](t) * d1 + cs[2](t) * psi))
    return float(worst)


__all__ = ["agm", "elliptic_K_agm", "hypergeometric_half", "picard_period", "legendre_check"]
