"""Linear differential operators in (t, x) and jet reduction modulo a Lax pair."""

from __future__ import annotations

from dataclasses import dataclass, fields

from .derivation import Derivation, d_t
from .polys import RatFunc

BASIS = ("c_tt", "c_t", "c_x", "c_0")


@dataclass(frozen=True)
class LinOp:
    """``c_tt*d_t^2 + c_t*d_t + c_x*d_x + c_0`` with rational coefficients."""

    c_tt: RatFunc
    c_t: RatFunc
    c_x: RatFunc
    c_0: RatFunc

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, RatFunc):
                object.__setattr__(self, f.name, RatFunc(value))

    @classmethod
    def make(cls, c_tt=0, c_t=0, c_x=0, c_0=0) -> LinOp:
        return cls(RatFunc(c_tt), RatFunc(c_t), RatFunc(c_x), RatFunc(c_0))

    def coefficients(self) -> dict[str, RatFunc]:
        return {name: getattr(self, name) for name in BASIS}

    def map(self, fn) -> LinOp:
        return LinOp(*(fn(getattr(self, name)) for name in BASIS))

    def scale(self, factor) -> LinOp:
        factor = RatFunc(factor)
        return self.map(lambda c: c * factor)

    def subs(self, mapping) -> LinOp:
        return self.map(lambda c: c.subs(mapping))

    def __add__(self, other: LinOp) -> LinOp:
        return LinOp(*(getattr(self, n) + getattr(other, n) for n in BASIS))

    def __sub__(self, other: LinOp) -> LinOp:
        return LinOp(*(getattr(self, n) - getattr(other, n) for n in BASIS))

    def is_zero(self) -> bool:
        return all(getattr(self, n).is_zero() for n in BASIS)

    def variables(self) -> set[str]:
        out = set()
        for n in BASIS:
            out |= getattr(self, n).variables()
        return out

    def __str__(self):
        return "; ".join(f"{n} = {getattr(self, n)}" for n in BASIS)


@dataclass(frozen=True)
class GaugeLog:
    """Logarithmic derivatives of a gauge factor: psi = exp(Lambda) * Psi."""

    lam_t: RatFunc
    lam_x: RatFunc

    def cross_consistency(self, flow: Derivation) -> RatFunc:
        """``d_t(lam_x) - flow(lam_t)``; zero iff the factor is well defined."""
        return d_t(self.lam_x) - flow(self.lam_t)


def conjugate(op: LinOp, gauge: GaugeLog) -> LinOp:
    """The operator acting on Psi after substituting psi = exp(Lambda) * Psi."""
    lt, lx = gauge.lam_t, gauge.lam_x
    return LinOp(
        op.c_tt,
        op.c_t + 2 * op.c_tt * lt,
        op.c_x,
        op.c_0 + op.c_t * lt + op.c_tt * (lt * lt + d_t(lt)) + op.c_x * lx,
    )


@dataclass(frozen=True)
class Jet:
    """The expression ``psi_coeff*psi + dpsi_coeff*psi_t``."""

    psi: RatFunc
    dpsi: RatFunc

    def __sub__(self, other: Jet) -> Jet:
        return Jet(self.psi - other.psi, self.dpsi - other.dpsi)

    def is_zero(self) -> bool:
        return self.psi.is_zero() and self.dpsi.is_zero()


class JetReducer:
    """Normal forms of derivatives of psi modulo a pair of linear equations.

    ``spectral`` must be second order in t with no x-derivative; ``deformation``
    first order in x with no second t-derivative.  Every derivative of psi
    reduces to a :class:`Jet`.
    """

    def __init__(self, spectral: LinOp, deformation: LinOp, flow: Derivation | None = None):
        if spectral.c_tt.is_zero() or not spectral.c_x.is_zero():
            raise ValueError("spectral operator must be d_t^2 + ... with no d_x term")
        if deformation.c_x.is_zero() or not deformation.c_tt.is_zero():
            raise ValueError("deformation operator must be d_x + ... with no d_t^2 term")
        self.flow = flow
        self.tt = Jet(-spectral.c_0 / spectral.c_tt, -spectral.c_t / spectral.c_tt)
        self.x = Jet(-deformation.c_0 / deformation.c_x, -deformation.c_t / deformation.c_x)
        self.tx = self.dt(self.x)

    def dt(self, j: Jet) -> Jet:
        return Jet(
            d_t(j.psi) + j.dpsi * self.tt.psi,
            j.psi + d_t(j.dpsi) + j.dpsi * self.tt.dpsi,
        )

    def dx(self, j: Jet) -> Jet:
        if self.flow is None:
            raise ValueError("no deformation flow supplied")
        return Jet(
            self.flow(j.psi) + j.psi * self.x.psi + j.dpsi * self.tx.psi,
            self.flow(j.dpsi) + j.psi * self.x.dpsi + j.dpsi * self.tx.dpsi,
        )

    def compatibility(self) -> Jet:
        """Normal form of ``d_x(psi_tt) - d_t^2(psi_x)``."""
        return self.dx(self.tt) - self.dt(self.dt(self.x))
