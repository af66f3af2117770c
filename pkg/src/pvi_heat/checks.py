"""The named exact certifications run by ``pvi-heat verify``.

Each check returns ``(passed, detail, witnesses)``; witnesses are labelled
values (exact zero RatFuncs when the check passes) from which the report
digest is computed.
"""

from __future__ import annotations

import random
from typing import Callable

from .forms import (
    Theta,
    build_lax,
    compat_residual,
    hamilton_velocity_check,
    hamiltonian_check,
    x_flow,
)
from .kernel import INFINITY, RatFunc, frobenius_obstruction, indicial_exponents, is_zero, var
from .pipeline import (
    gauge_log_derivatives,
    picard_exponents_at_zero,
    picard_reduction,
    picard_series_residual,
    run_pipeline,
    transform_lax,
)

CheckResult = tuple[bool, str, dict]


def _all_zero(witnesses: dict) -> bool:
    return all(RatFunc(w).is_zero() for w in witnesses.values())


def _summary(witnesses: dict, what: str) -> str:
    bad = [k for k, w in witnesses.items() if not RatFunc(w).is_zero()]
    if bad:
        return f"{what}: nonzero witnesses {', '.join(bad)}"
    n = len(witnesses)
    return f"{what}: {n} witness{'' if n == 1 else 'es'} identically zero"


def check_compat(theta: Theta, rng: random.Random) -> CheckResult:
    lax = build_lax(theta)
    res = compat_residual(lax.L1, lax.L2, x_flow(theta))
    spot = res.is_zero() or is_zero(res, "probabilistic", rng=rng)
    w = {"compat.residual": res}
    ok = spot and is_zero(res, "exact")
    return ok, _summary(w, "zero-curvature residual along the PVI flow"), w


def check_gauge(theta: Theta, rng: random.Random) -> CheckResult:
    w: dict = {}
    transform_lax(build_lax(theta), gauge_log_derivatives(theta), w)
    w = {k: v for k, v in w.items() if not k.startswith("transformed.residue")}
    return _all_zero(w), _summary(w, "gauge-transformed pair against its templates"), w


def check_residues(theta: Theta, rng: random.Random) -> CheckResult:
    w: dict = {}
    transform_lax(build_lax(theta), gauge_log_derivatives(theta), w)
    w = {k: v for k, v in w.items() if k.startswith("transformed.residue")}
    return _all_zero(w), _summary(w, "residues at t = 0, 1, x, u"), w


def check_hamiltonian(theta: Theta, rng: random.Random) -> CheckResult:
    w = {"hamiltonian.polynomial": hamiltonian_check(theta), "hamiltonian.velocity": hamilton_velocity_check(theta)}
    return _all_zero(w), _summary(w, "residue at t = x as the polynomial Hamiltonian"), w


def riemann_scheme(theta: Theta) -> dict:
    th_inf, th0, th1, thx = theta.values()
    half = RatFunc(1) / 2
    return {
        "0": (half - th0 / 2, half + th0 / 2),
        "1": (half - th1 / 2, half + th1 / 2),
        "x": (half - thx / 2, half + thx / 2),
        "u": (-half, 3 * half),
        INFINITY: (half - th_inf / 2, half + th_inf / 2),
    }


def check_apparent(theta: Theta, rng: random.Random) -> CheckResult:
    L1 = build_lax(theta).L1
    u, x = var("u"), var("x")
    points = {"0": 0, "1": 1, "x": x, "u": u, INFINITY: INFINITY}
    w = {"apparent.obstruction": frobenius_obstruction(L1, u, RatFunc(-1) / 2, 2)}
    for label, (a, b) in riemann_scheme(theta).items():
        lo, hi = indicial_exponents(L1, points[label])
        # the pair is unordered when theta is symbolic
        w[f"apparent.exponents[{label}].lo"] = (lo - a) * (lo - b)
        w[f"apparent.exponents[{label}].hi"] = (hi - a) * (hi - b)
        w[f"apparent.exponents[{label}].sum"] = lo + hi - a - b
    return _all_zero(w), _summary(w, "apparent singularity at t = u and Riemann scheme"), w


def _pipeline_witnesses(theta: Theta, prefixes: tuple[str, ...]) -> dict:
    cert = run_pipeline(theta, "symbolic").certificate
    return {k: v for k, v in cert.witnesses.items() if k.startswith(prefixes)}


def check_eliminate(theta: Theta, rng: random.Random) -> CheckResult:
    w = _pipeline_witnesses(theta, ("eliminate.",))
    return _all_zero(w), _summary(w, "apparent-pole elimination"), w


def check_F(theta: Theta, rng: random.Random) -> CheckResult:
    w = _pipeline_witnesses(theta, ("F.",))
    return _all_zero(w), _summary(w, "extracted F against its closed form"), w


def check_heat(theta: Theta, rng: random.Random) -> CheckResult:
    w = _pipeline_witnesses(theta, ("heat.",))
    return _all_zero(w), _summary(w, "u-free heat operator"), w


def check_picard(theta: Theta, rng: random.Random) -> CheckResult:
    """Independent of theta: the reduction is taken at theta = 0."""
    picard_reduction()
    w = {f"picard.series[{n}]": c for n, c in enumerate(picard_series_residual(24))}
    lo, hi = picard_exponents_at_zero()
    w["picard.exponents_at_0"] = lo * lo + hi * hi
    return _all_zero(w), _summary(w, "Legendre reduction annihilates 2F1(1/2,1/2;1;t)"), w


CHECKS: dict[str, Callable[[Theta, random.Random], CheckResult]] = {
    "compat": check_compat,
    "gauge": check_gauge,
    "residues": check_residues,
    "hamiltonian": check_hamiltonian,
    "apparent": check_apparent,
    "eliminate": check_eliminate,
    "F": check_F,
    "heat": check_heat,
    "picard": check_picard,
}
