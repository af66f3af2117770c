"""Exact constructions around the sixth Painleve equation.

Convention: ``t`` is the spectral variable of the linear ODE and ``x`` the
deformation variable (the independent variable of PVI); ``u = u(x)`` and
``u1 = du/dx``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .kernel import (
    INERT,
    Derivation,
    JetReducer,
    LinOp,
    RatFunc,
    d_t,
    var,
)

t, x, u, u1 = var("t"), var("x"), var("u"), var("u1")


class SingularLocusError(ValueError):
    pass


@dataclass(frozen=True)
class Theta:
    """Monodromy exponents, each a symbolic variable or an exact rational."""

    th_inf: RatFunc
    th_0: RatFunc
    th_1: RatFunc
    th_x: RatFunc

    @classmethod
    def symbolic(cls) -> Theta:
        return cls(var("th_inf"), var("th0"), var("th1"), var("thx"))

    @classmethod
    def rational(cls, th_inf, th_0, th_1, th_x) -> Theta:
        return cls(*(RatFunc(Fraction(v)) for v in (th_inf, th_0, th_1, th_x)))

    @classmethod
    def parse(cls, text: str) -> Theta:
        """``"symbolic"`` or four comma-separated rationals such as ``1/2,1/3,1/5,1/7``."""
        if text.strip() == "symbolic":
            return cls.symbolic()
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated rationals, got {text!r}")
        try:
            return cls.rational(*(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed theta {text!r}: {exc}") from None

    def values(self) -> tuple[RatFunc, RatFunc, RatFunc, RatFunc]:
        return self.th_inf, self.th_0, self.th_1, self.th_x

    @property
    def is_rational(self) -> bool:
        return all(v.is_constant() for v in self.values())

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(v.constant_value() for v in self.values())

    def specialization(self) -> dict[str, RatFunc]:
        """Substitution map sending the symbolic exponents to these values."""
        return dict(zip(("th_inf", "th0", "th1", "thx"), self.values()))

    def __str__(self):
        if self.is_rational:
            return ",".join(str(v) for v in self.as_fractions())
        if self == Theta.symbolic():
            return "symbolic"
        return ",".join(str(v) for v in self.values())


@dataclass(frozen=True)
class PviParams:
    alpha: RatFunc
    beta: RatFunc
    gamma: RatFunc
    delta: RatFunc


@dataclass(frozen=True)
class FuchsParams:
    A: RatFunc
    B: RatFunc
    C: RatFunc
    E: RatFunc


def theta_squares(fuchs: FuchsParams) -> tuple[RatFunc, ...]:
    """(th_inf^2, th_0^2, th_1^2, th_x^2) from the Fuchsian parameters."""
    A, B, C, E = fuchs.A, fuchs.B, fuchs.C, fuchs.E
    return 4 * (A + B + C + E + 1), 4 * A + 1, 4 * B + 1, 4 * C + 1


def fuchs_from_squares(sq_inf, sq_0, sq_1, sq_x) -> FuchsParams:
    A, B, C = ((RatFunc(s) - 1) / 4 for s in (sq_0, sq_1, sq_x))
    E = RatFunc(sq_inf) / 4 - 1 - A - B - C
    return FuchsParams(A, B, C, E)


def pvi_from_squares(sq_inf, sq_0, sq_1, sq_x) -> PviParams:
    return PviParams(RatFunc(sq_inf) / 2, -RatFunc(sq_0) / 2, RatFunc(sq_1) / 2, (1 - RatFunc(sq_x)) / 2)


def squares_from_pvi(p: PviParams) -> tuple[RatFunc, ...]:
    return 2 * p.alpha, -2 * p.beta, 2 * p.gamma, 1 - 2 * p.delta


def theta_correspondence(theta: Theta) -> tuple[PviParams, FuchsParams]:
    sq = tuple(v * v for v in theta.values())
    return pvi_from_squares(*sq), fuchs_from_squares(*sq)


def pvi_rhs(xv, uv, u1v, params: PviParams) -> RatFunc:
    """Right-hand side of PVI, u'' = pvi_rhs(x, u, u') (deformation variable x)."""
    X, U, U1 = RatFunc(xv), RatFunc(uv), RatFunc(u1v)
    if all(v.is_constant() for v in (X, U, U1)):
        for label, value in (("x", X), ("x - 1", X - 1), ("u", U), ("u - 1", U - 1), ("u - x", U - X)):
            if value.is_zero():
                raise SingularLocusError(f"PVI is singular: factor {label} vanishes")
    a, b, c, d = params.alpha, params.beta, params.gamma, params.delta
    return (
        (1 / U + 1 / (U - 1) + 1 / (U - X)) * U1 * U1 / 2
        - (1 / X + 1 / (X - 1) + 1 / (U - X)) * U1
        + U * (U - 1) * (U - X) / (X**2 * (X - 1) ** 2)
        * (a + b * X / U**2 + c * (X - 1) / (U - 1) ** 2 + d * X * (X - 1) / (U - X) ** 2)
    )


def x_flow(theta: Theta, u1_image: RatFunc | None = None) -> Derivation:
    """Total x-derivative along PVI: x -> 1, u -> u1, u1 -> pvi_rhs.

    ``gp`` and ``g`` are functions of x with no known derivative, so the flow
    refuses to differentiate them.
    """
    params, _ = theta_correspondence(theta)
    image = pvi_rhs(x, u, u1, params) if u1_image is None else u1_image
    return Derivation({"x": 1, "u": u1, "u1": image}, inert=INERT, name="x-flow")


@dataclass(frozen=True)
class LaxForms:
    S: RatFunc
    W: RatFunc
    g0: RatFunc
    g1: RatFunc
    fG_of: Callable[[RatFunc], RatFunc]


@dataclass(frozen=True)
class LaxPair:
    theta: Theta
    L1: LinOp
    L2: LinOp
    forms: LaxForms
    params: PviParams
    fuchs: FuchsParams


def build_lax(theta: Theta, apparent_coefficient=Fraction(3, 4)) -> LaxPair:
    """Scalar Lax pair  L1 = d_t^2 + S/2,  L2 = d_x + W d_t - W_t/2  in Garnier's form.

    -S/2 = c/(t-u)^2 + (g1 u1 + g0)/((t-u) t (t-1))
           + [((g1 u1)^2 - g0^2)(u-x)/(u(u-1)) - u(u-1)(u-x) fG(u)] / (t(t-1)(t-x))
           + fG(t)

    with c = 3/4.  The t-independent term -u(u-1)(u-x) fG(u) is the one forced
    by requiring t = u to be an apparent singularity; ``apparent_coefficient``
    only exists to break that property on purpose.
    """
    params, fuchs = theta_correspondence(theta)
    A, B, C, E = fuchs.A, fuchs.B, fuchs.C, fuchs.E

    def fG(z):
        z = RatFunc(z)
        return A / z**2 + B / (z - 1) ** 2 + C / (z - x) ** 2 + E / (z * (z - 1))

    g1 = -x * (x - 1) / (2 * (u - x))
    g0 = -u + Fraction(1, 2)
    U = u * (u - 1) * (u - x)
    minus_half_S = (
        RatFunc(Fraction(apparent_coefficient)) / (t - u) ** 2
        + (g1 * u1 + g0) / ((t - u) * t * (t - 1))
        + (((g1 * u1) ** 2 - g0 * g0) * (u - x) / (u * (u - 1)) - U * fG(u)) / (t * (t - 1) * (t - x))
        + fG(t)
    )
    S = -2 * minus_half_S
    W = -t * (t - 1) * (u - x) / ((t - u) * x * (x - 1))
    L1 = LinOp.make(c_tt=1, c_0=S / 2)
    L2 = LinOp.make(c_t=W, c_x=1, c_0=-d_t(W) / 2)
    return LaxPair(theta, L1, L2, LaxForms(S, W, g0, g1, fG), params, fuchs)


def compat_residual(L1: LinOp, L2: LinOp, flow: Derivation) -> RatFunc:
    """Coefficient of psi in d_x(psi_tt) - d_t^2(psi_x) reduced modulo the pair.

    The psi_t component vanishes identically for the Garnier normal form
    (L1 with no first-derivative term); use :class:`JetReducer` directly for
    the full jet.
    """
    return JetReducer(L1, L2, flow).compatibility().psi


def compatibility_closed_form(forms: LaxForms, flow: Derivation) -> RatFunc:
    """X(S) + W_ttt + W S_t + 2 S W_t, the scalar zero-curvature condition.

    For the Garnier pair ``compat_residual == -closed_form / 2``.
    """
    S, W = forms.S, forms.W
    Wt = d_t(W)
    return flow(S) + d_t(d_t(Wt)) + W * d_t(S) + 2 * S * Wt


@dataclass(frozen=True)
class RiccatiForms:
    R_of: Callable[..., RatFunc]
    K: RatFunc


def riccati_forms(theta: Theta) -> RiccatiForms:
    th_inf, th0, th1, thx = theta.values()

    def R_of(a0, a1, ax) -> RatFunc:
        a0, a1, ax = RatFunc(a0), RatFunc(a1), RatFunc(ax)
        return x * (x - 1) * u1 + a0 * (u - 1) * (u - x) + a1 * u * (u - x) + (ax - 1) * u * (u - 1)

    K = (1 - th0 - th1 - thx) ** 2 - th_inf**2
    return RiccatiForms(R_of, K)


@dataclass(frozen=True)
class Residues:
    R0: RatFunc
    R1: RatFunc
    Rx: RatFunc
    Ru: RatFunc


def residues(theta: Theta) -> Residues:
    _, th0, th1, thx = theta.values()
    rf = riccati_forms(theta)
    R, K = rf.R_of, rf.K
    U = u * (u - 1) * (u - x)
    Ru = R(th0, th1, thx)
    R0 = -(Ru * R(2 - th0, -th1, -thx) + K * U * u) / x
    R1 = -(Ru * R(-th0, 2 - th1, -thx) + K * U * (u - 1)) / (1 - x)
    Rx = -(Ru * R(-th0, -th1, 2 - thx) + K * U * (u - x)) / (x * (x - 1))
    return Residues(R0, R1, Rx, Ru)


def _theta_poly(theta: Theta) -> RatFunc:
    _, th0, th1, thx = theta.values()
    return th0 * (u - 1) * (u - x) + th1 * u * (u - x) + (thx - 1) * u * (u - 1)


def momentum(theta: Theta) -> RatFunc:
    """p = R(th0, th1, thx) / (2 u (u-1)(u-x))."""
    return riccati_forms(theta).R_of(*theta.values()[1:]) / (2 * u * (u - 1) * (u - x))


def u1_from_momentum(theta: Theta) -> RatFunc:
    """Inverse of :func:`momentum`: u1 as a function of (u, p, x)."""
    p = var("p")
    return (2 * u * (u - 1) * (u - x) * p - _theta_poly(theta)) / (x * (x - 1))


def hamiltonian(theta: Theta) -> RatFunc:
    """H = -Rx / (4 u (u-1)(u-x)) rewritten in the canonical variables (u, p, x)."""
    H = -residues(theta).Rx / (4 * u * (u - 1) * (u - x))
    return H.subs({"u1": u1_from_momentum(theta)})


def hamiltonian_check(theta: Theta) -> RatFunc:
    """H x(x-1) minus the polynomial PVI Hamiltonian; identically zero."""
    p = var("p")
    K = riccati_forms(theta).K
    U = u * (u - 1) * (u - x)
    polynomial = U * p * p - _theta_poly(theta) * p + K * (u - x) / 4
    return hamiltonian(theta) * x * (x - 1) - polynomial


def hamilton_velocity_check(theta: Theta) -> RatFunc:
    """dH/dp expressed back in (u, u1, x), minus u1; identically zero."""
    dH = hamiltonian(theta).diff("p")
    return dH.subs({"p": momentum(theta)}) - u1
