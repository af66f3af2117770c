"""Gauge transformation, apparent-pole elimination and the u-free heat operator.

Every stage is computed mechanically and then compared coefficientwise with
a hand-transcribed template; each comparison leaves a witness that must be the
zero rational function.  Any nonzero witness raises CertificationError.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .forms import LaxPair, Theta, build_lax, riccati_forms, residues, x_flow
from .kernel import (
    GaugeLog,
    JetReducer,
    LinOp,
    VARIABLES,
    RatFunc,
    UndeclaredPoleError,
    conjugate,
    indicial_exponents,
    partial_fractions_t,
    var,
)
from .kernel.linop import BASIS

t, x, u, u1 = var("t"), var("x"), var("u"), var("u1")
gp, g = var("gp"), var("g")
POLES = (RatFunc(0), RatFunc(1), x, u)


class CertificationError(RuntimeError):
    pass


def _describe_mismatch(label: str, diff: RatFunc) -> str:
    try:
        pf = partial_fractions_t(diff, POLES)
    except UndeclaredPoleError:
        return f"{label}: mismatch {diff}"
    where = [f"pole t = {p} (order {len(c)})" for p, c in pf.poles.items() if any(not v.is_zero() for v in c)]
    if any(not c.is_zero() for c in pf.polynomial):
        where.append("polynomial part")
    return f"{label}: mismatch at {', '.join(where) or 'unknown location'}"


def _compare(witnesses: dict, label: str, got: LinOp, want: LinOp, names=BASIS):
    for name in names:
        diff = getattr(got, name) - getattr(want, name)
        witnesses[f"{label}.{name}"] = diff
        if not diff.is_zero():
            raise CertificationError(_describe_mismatch(f"{label} coefficient {name}", diff))


def _require_zero(witnesses: dict, label: str, value: RatFunc, message: str):
    witnesses[label] = value
    if not value.is_zero():
        raise CertificationError(f"{message}: {value}")


# -- step one: gauge ---------------------------------------------------------


def gauge_log_derivatives(theta: Theta) -> GaugeLog:
    """t- and x-logarithmic derivatives of
    t^((1-th0)/2) (t-1)^((1-th1)/2) (t-x)^((1-thx)/2) (t-u)^(-1/2) exp(G(x)),
    with G' kept as the inert symbol ``gp``.
    """
    _, th0, th1, thx = theta.values()
    lam_t = (1 - th0) / (2 * t) + (1 - th1) / (2 * (t - 1)) + (1 - thx) / (2 * (t - x)) - 1 / (2 * (t - u))
    lam_x = -(1 - thx) / (2 * (t - x)) + u1 / (2 * (t - u)) + gp
    return GaugeLog(lam_t, lam_x)


def _U():
    return u * (u - 1) * (u - x)


def transformed_templates(theta: Theta) -> tuple[LinOp, LinOp]:
    """The gauge-transformed pair written out with the residues R0, R1, Rx, Ru."""
    _, th0, th1, thx = theta.values()
    res = residues(theta)
    L1 = LinOp.make(
        c_tt=1,
        c_t=(1 - th0) / t + (1 - th1) / (t - 1) + (1 - thx) / (t - x) - 1 / (t - u),
        c_0=(res.R0 / t + res.R1 / (t - 1) + res.Rx / (t - x) + 2 * res.Ru / (t - u)) / (4 * _U()),
    )
    L2 = LinOp.make(
        c_t=-t * (t - 1) * (u - x) / (t - u),
        c_x=x * (x - 1),
        c_0=x * (x - 1) * gp + res.Ru / (2 * (t - u)) + (th0 + th1 + thx - 1) * (u - x) / 2,
    )
    return L1, L2


def transform_lax(lax: LaxPair, gauge: GaugeLog, witnesses: dict | None = None) -> tuple[LinOp, LinOp]:
    """Conjugate the Lax pair by the gauge and certify it against the templates.

    The second operator is multiplied by x(x-1).
    """
    witnesses = {} if witnesses is None else witnesses
    flow = x_flow(lax.theta)
    _require_zero(witnesses, "gauge.cross_consistency", gauge.cross_consistency(flow),
                  "gauge logarithmic derivatives are not cross-consistent")
    L1p = conjugate(lax.L1, gauge)
    L2p = conjugate(lax.L2, gauge).scale(x * (x - 1))
    T1, T2 = transformed_templates(lax.theta)
    _compare(witnesses, "transformed.L1", L1p, T1)
    _compare(witnesses, "transformed.L2", L2p, T2)
    # the potential of L1' is a pure sum of simple poles at 0, 1, x, u
    pf = partial_fractions_t(L1p.c_0, POLES)
    res = residues(lax.theta)
    expected = {RatFunc(0): res.R0, RatFunc(1): res.R1, x: res.Rx, u: 2 * res.Ru}
    for pole, R in expected.items():
        coeffs = pf.poles.get(pole, (RatFunc(0),))
        if len(coeffs) > 1:
            raise CertificationError(f"potential keeps a double pole at t = {pole}")
        _require_zero(witnesses, f"transformed.residue[{pole}]", coeffs[0] * 4 * _U() - R,
                      f"residue at t = {pole} does not match")
    if pf.polynomial:
        raise CertificationError("potential has a polynomial part")
    return L1p, L2p


# -- step two: eliminate the apparent pole ------------------------------------


def _simple_residue(f: RatFunc, pole: RatFunc) -> RatFunc:
    pf = partial_fractions_t(f, POLES)
    coeffs = pf.poles.get(pole, ())
    if len(coeffs) > 1:
        raise CertificationError(f"unexpected pole of order {len(coeffs)} at t = {pole}")
    return coeffs[0] if coeffs else RatFunc(0)


def apparent_pole_multiplier(L1p: LinOp, L2p: LinOp) -> RatFunc:
    """Multiplier lam(t) such that L1' + lam L2' is regular at t = u.

    The residues at t = u of the d_t and identity coefficients must have the
    same ratio (otherwise no Psi-independent multiplier exists); call it
    -lam(u).  Requiring the d_x coefficient lam(t) x(x-1) to be free of u then
    forces lam(t) to be lam(u) with u replaced by t.
    """
    q_t = _simple_residue(L1p.c_t, u) / _simple_residue(L2p.c_t, u)
    r2 = _simple_residue(L2p.c_0, u)
    r1 = _simple_residue(L1p.c_0, u)
    if r2.is_zero():
        if not r1.is_zero():
            raise CertificationError("identity coefficient has an uncancellable pole at t = u")
    elif r1 / r2 != q_t:
        raise CertificationError("residue quotient at t = u depends on the component of Psi")
    lam_u = -q_t
    if lam_u.depends_on("t"):
        raise CertificationError("residue quotient depends on t")
    return lam_u.subs({"u": t})


def eq15_template(theta: Theta, F: RatFunc) -> LinOp:
    _, th0, th1, thx = theta.values()
    K = riccati_forms(theta).K
    T = t * (t - 1) * (t - x)
    return LinOp.make(
        c_tt=1,
        c_t=-((th0 - 1) / t + (th1 - 1) / (t - 1) + thx / (t - x)),
        c_x=-x * (x - 1) / T,
        c_0=(K / 4 * (t - x) - x * (x - 1) * gp + F) / T,
    )


@dataclass(frozen=True)
class Elimination:
    L15: LinOp
    lambda13: RatFunc
    F: RatFunc


def eliminate_apparent_pole(theta: Theta, L1p: LinOp, L2p: LinOp, witnesses: dict | None = None) -> Elimination:
    witnesses = {} if witnesses is None else witnesses
    lam = apparent_pole_multiplier(L1p, L2p)
    _require_zero(witnesses, "eliminate.lambda13", lam + 1 / (t * (t - 1) * (t - x)),
                  "multiplier differs from -1/(t(t-1)(t-x))")
    L15 = L1p + L2p.scale(lam)
    for name, c in L15.coefficients().items():
        if RatFunc(c.den).subs({"t": u}).is_zero():
            raise CertificationError(f"coefficient {name} still has a pole at t = u")
    lin = L15 - L1p - L2p.scale(lam)
    for name in BASIS:
        witnesses[f"eliminate.linear_combination.{name}"] = getattr(lin, name)
    K = riccati_forms(theta).K
    F = L15.c_0 * t * (t - 1) * (t - x) - K / 4 * (t - x) + x * (x - 1) * gp
    _require_zero(witnesses, "eliminate.F_gp_free", F.diff("gp"), "extracted F depends on G'")
    _compare(witnesses, "eliminate.L15", L15, eq15_template(theta, F))
    return Elimination(L15, lam, F)


def compute_F(theta: Theta) -> RatFunc:
    """The u-dependent, t-independent part of the eliminated equation."""
    th_inf, th0, th1, thx = theta.values()
    R = riccati_forms(theta).R_of
    s = th0 + th1 + thx
    return (-R(th0, th1, thx) * R(-th0, -th1, -thx) / (4 * _U())
            + (th_inf**2 + 1 - s * s) * (u - x) / 4)


# -- step three: absorb F into the gauge ---------------------------------------


def heat_template(theta: Theta, g_value: RatFunc) -> LinOp:
    _, th0, th1, thx = theta.values()
    K = riccati_forms(theta).K
    T = t * (t - 1) * (t - x)
    return LinOp.make(
        c_tt=T,
        c_t=-T * ((th0 - 1) / t + (th1 - 1) / (t - 1) + thx / (t - x)),
        c_x=-x * (x - 1),
        c_0=K / 4 * (t - x) - g_value,
    )


@dataclass(frozen=True)
class HeatOperator:
    """Polynomial-in-t heat operator free of u and u1."""

    op: LinOp
    theta: Theta
    g_choice: str

    def __getattr__(self, name):
        if name in BASIS:
            return getattr(self.op, name)
        raise AttributeError(name)


@dataclass
class EliminationCertificate:
    lambda13: RatFunc
    F: RatFunc
    gauge_choice: RatFunc
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(w.is_zero() for w in self.witnesses.values())

    def nonzero(self) -> list[str]:
        return [k for k, w in self.witnesses.items() if not w.is_zero()]


@dataclass(frozen=True)
class PipelineResult:
    lax: LaxPair
    gauge: GaugeLog
    L1p: LinOp
    L2p: LinOp
    elimination: Elimination
    heat: HeatOperator
    certificate: EliminationCertificate


def _g_value(g_choice: str) -> RatFunc:
    if g_choice == "zero":
        return RatFunc(0)
    if g_choice == "symbolic":
        return g
    raise ValueError(f"g_choice must be 'zero' or 'symbolic', got {g_choice!r}")


@lru_cache(maxsize=32)
def run_pipeline(theta: Theta, g_choice: str = "symbolic") -> PipelineResult:
    g_value = _g_value(g_choice)
    witnesses: dict[str, RatFunc] = {}
    lax = build_lax(theta)
    gauge = gauge_log_derivatives(theta)
    L1p, L2p = transform_lax(lax, gauge, witnesses)
    elim = eliminate_apparent_pole(theta, L1p, L2p, witnesses)
    _require_zero(witnesses, "F.display", elim.F - compute_F(theta), "extracted F differs from the closed form")
    _require_zero(witnesses, "F.t_free", elim.F.diff("t"), "F depends on t")

    choice = (g_value + elim.F) / (x * (x - 1))
    heat = elim.L15.subs({"gp": choice}).scale(t * (t - 1) * (t - x))
    _compare(witnesses, "heat", heat, heat_template(theta, g_value))
    for name, c in heat.coefficients().items():
        for v in ("u", "u1"):
            _require_zero(witnesses, f"heat.{name}.d{v}", c.diff(v), f"heat coefficient {name} depends on {v}")
        if not c.is_polynomial():
            raise CertificationError(f"heat coefficient {name} is not polynomial in t")
    cert = EliminationCertificate(elim.lambda13, elim.F, choice, witnesses)
    return PipelineResult(lax, gauge, L1p, L2p, elim, HeatOperator(heat, theta, g_choice), cert)


def heat_operator(theta: Theta, g_choice: str = "symbolic") -> tuple[HeatOperator, EliminationCertificate]:
    res = run_pipeline(theta, g_choice)
    return res.heat, res.certificate


# -- Picard / Legendre ---------------------------------------------------------


LEGENDRE = LinOp.make(c_tt=t * (t - 1), c_t=2 * t - 1, c_0=Fraction(1, 4))


def picard_reduction() -> LinOp:
    """t-only reduction of the heat operator at theta = 0, g = 0.

    Drops the d_x term and divides by (t - x); the result is Legendre's
    equation for the periods of an elliptic curve.
    """
    heat, _ = heat_operator(Theta.rational(0, 0, 0, 0), "zero")
    reduced = LinOp(heat.c_tt, heat.c_t, RatFunc(0), heat.c_0).scale(1 / (t - x))
    if reduced.variables() - {"t"}:
        raise CertificationError(f"Picard reduction still depends on {reduced.variables() - {'t'}}")
    if reduced != LEGENDRE:
        raise CertificationError(f"Picard reduction is not Legendre's operator: {reduced}")
    return reduced


def hypergeometric_half_coefficients(n_terms: int) -> list[Fraction]:
    """Taylor coefficients of 2F1(1/2, 1/2; 1; t) = (2/pi) K(sqrt t)."""
    out = [Fraction(1)]
    for n in range(n_terms - 1):
        out.append(out[-1] * Fraction(2 * n + 1, 2 * n + 2) ** 2)
    return out


def picard_series_residual(order: int) -> list[Fraction]:
    """Coefficients of t^0..t^(order-1) after applying the reduction to the
    hypergeometric series truncated at t^order.  All must vanish."""
    op = picard_reduction()
    a = hypergeometric_half_coefficients(order + 1)
    series = sum((RatFunc(c) * t**n for n, c in enumerate(a)), RatFunc(0))
    s1 = series.diff("t")
    s2 = s1.diff("t")
    image = op.c_tt * s2 + op.c_t * s1 + op.c_0 * series
    terms = image.num.terms()
    pad = (0,) * (len(VARIABLES) - 1)
    return [terms.get((n,) + pad, Fraction(0)) for n in range(order)]


def picard_exponents_at_zero():
    return indicial_exponents(picard_reduction(), 0)


# -- coefficients consumed by the numerics -------------------------------------


@dataclass(frozen=True)
class TransportCoefficients:
    """Closed first-order system for (Psi, Psi_t) along x at fixed t.

    Psi_x = psi_x[0] Psi + psi_x[1] Psi_t, Psi_tx likewise, and
    Psi_tt = psi_tt[0] Psi + psi_tt[1] Psi_t, all functions of (t, x, u, u1).
    """

    psi_x: tuple[RatFunc, RatFunc]
    psi_tx: tuple[RatFunc, RatFunc]
    psi_tt: tuple[RatFunc, RatFunc]


def transport_coefficients(theta: Theta, g_value=0) -> TransportCoefficients:
    """Transport system of the gauge-transformed pair with G' = (g + F)/(x(x-1))."""
    res = run_pipeline(theta, "symbolic")
    choice = res.certificate.gauge_choice.subs({"g": RatFunc(g_value)})
    L2 = res.L2p.subs({"gp": choice})
    jets = JetReducer(res.L1p, L2)
    return TransportCoefficients(
        (jets.x.psi, jets.x.dpsi), (jets.tx.psi, jets.tx.dpsi), (jets.tt.psi, jets.tt.dpsi)
    )
