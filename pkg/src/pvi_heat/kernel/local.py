"""Local analysis in the spectral variable t: partial fractions, indicial
exponents and Frobenius resonance obstructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt

from sympy.polys.polyerrors import ExactQuotientFailed

from .derivation import d_t
from .linop import LinOp
from .polys import RING, MultiPoly, RatFunc, _split, var_index

INFINITY = "infinity"
_T = var_index("t")


class UndeclaredPoleError(ValueError):
    pass


class IrregularSingularityError(ValueError):
    pass


def _t_linear_factor(pole: RatFunc):
    """Polynomial ``den(p)*t - num(p)`` vanishing exactly at t = p."""
    if pole.depends_on("t"):
        raise ValueError(f"pole {pole} must not depend on t")
    return RING.gens[_T] * pole._d - pole._n


def _t_coeffs(f: RatFunc) -> list[RatFunc]:
    """Coefficients of a t-polynomial f (den free of t), lowest degree first."""
    parts = _split(f._n, _T)
    den = RatFunc(MultiPoly(f._d))
    out = [RatFunc(0)] * (max(parts) + 1 if parts else 1)
    for k, c in parts.items():
        out[k] = RatFunc(MultiPoly(c)) / den
    return out


def _poly_quotient_in_t(num, den) -> list[RatFunc]:
    """Quotient of num by den as polynomials in t over the other variables."""
    n = _t_coeffs(RatFunc(MultiPoly(num)))
    d = _t_coeffs(RatFunc(MultiPoly(den)))
    while len(d) > 1 and d[-1].is_zero():
        d.pop()
    dn = len(d) - 1
    if len(n) - 1 < dn:
        return []
    q = [RatFunc(0)] * (len(n) - dn)
    for k in range(len(n) - 1, dn - 1, -1):
        if n[k].is_zero():
            continue
        c = n[k] / d[dn]
        q[k - dn] = c
        for j in range(dn + 1):
            n[k - dn + j] = n[k - dn + j] - c * d[j]
    while q and q[-1].is_zero():
        q.pop()
    return q


@dataclass(frozen=True)
class PartialFractions:
    """``f = sum_k polynomial[k] t^k + sum_p sum_k poles[p][k-1] / (t - p)^k``."""

    polynomial: tuple[RatFunc, ...]
    poles: dict = field(default_factory=dict)

    def order(self, pole) -> int:
        return len(self.poles.get(RatFunc(pole), ()))

    def residue(self, pole) -> RatFunc:
        coeffs = self.poles.get(RatFunc(pole), ())
        return coeffs[0] if coeffs else RatFunc(0)

    def recompose(self) -> RatFunc:
        t = RatFunc.var("t")
        total = RatFunc(0)
        for k, c in enumerate(self.polynomial):
            total = total + c * t**k
        for pole, coeffs in self.poles.items():
            for k, c in enumerate(coeffs, start=1):
                total = total + c / (t - pole) ** k
        return total


def partial_fractions_t(f: RatFunc, poles) -> PartialFractions:
    """Decompose ``f`` into simple elements in t over the declared poles.

    Raises UndeclaredPoleError if the denominator has a t-dependent factor
    that does not vanish at one of ``poles``.
    """
    poles = [RatFunc(p) for p in poles]
    rest = f._d
    mult = {}
    for p in poles:
        lin = _t_linear_factor(p)
        m = 0
        while True:
            try:
                rest = rest.exquo(lin)
            except ExactQuotientFailed:
                break
            m += 1
        if m:
            mult[p] = m
    if rest.degree(_T) > 0:
        _, factors = rest.factor_list()
        bad = [MultiPoly(fac) for fac, _ in factors if fac.degree(_T) > 0]
        raise UndeclaredPoleError(f"denominator factor {bad[0]} is not one of the declared poles")

    t = RatFunc.var("t")
    out = {}
    for p, m in mult.items():
        g = f * (t - p) ** m
        coeffs = []
        deriv = g
        for j in range(m):
            coeffs.append(deriv.subs({"t": p}) / factorial(j))
            deriv = d_t(deriv)
        out[p] = tuple(reversed(coeffs))
    return PartialFractions(tuple(_poly_quotient_in_t(f._n, f._d)), out)


def residue_t(f: RatFunc, pole) -> RatFunc:
    """Residue at a simple pole t = pole: N(p)/M(p) for f = N/((t-p)M)."""
    t = RatFunc.var("t")
    return (f * (t - RatFunc(pole))).subs({"t": pole})


def _poly_sqrt(p) -> RatFunc:
    coeff, factors = p.factor_list()
    c = Fraction(int(coeff.numerator), int(coeff.denominator))
    if c < 0:
        raise ValueError("indicial discriminant is not a perfect square")
    rn, rd = isqrt(c.numerator), isqrt(c.denominator)
    if rn * rn != c.numerator or rd * rd != c.denominator:
        raise ValueError("indicial discriminant is not a perfect square")
    out = RatFunc(Fraction(rn, rd))
    for fac, k in factors:
        if k % 2:
            raise ValueError("indicial discriminant is not a perfect square")
        out = out * RatFunc(MultiPoly(fac)) ** (k // 2)
    return out


def _exact_sqrt(f: RatFunc) -> RatFunc:
    if f.is_zero():
        return f
    return _poly_sqrt(f._n) / _poly_sqrt(f._d)


def at_infinity(op: LinOp) -> LinOp:
    """Rewrite a t-operator in the local variable s = 1/t (still named t)."""
    if not op.c_x.is_zero():
        raise ValueError("only ordinary operators in t can be moved to infinity")
    s = RatFunc.var("t")
    inv = {"t": 1 / s}
    ctt, ct, c0 = (c.subs(inv) for c in (op.c_tt, op.c_t, op.c_0))
    # d_t = -s^2 d_s,  d_t^2 = s^4 d_s^2 + 2 s^3 d_s
    return LinOp(ctt * s**4, 2 * ctt * s**3 - ct * s**2, RatFunc(0), c0)


def _local_data(op: LinOp, point):
    """Return (op, point) with a point at infinity moved to s = 0."""
    if point == INFINITY:
        return at_infinity(op), RatFunc(0)
    if not op.c_x.is_zero():
        raise ValueError("indicial analysis needs an operator with no d_x term")
    return op, RatFunc(point)


def _laurent(op: LinOp, point: RatFunc, order: int):
    """Taylor coefficients of (t-c)*p and (t-c)^2*q up to ``order``."""
    t = RatFunc.var("t")
    P = (t - point) * op.c_t / op.c_tt
    Q = (t - point) ** 2 * op.c_0 / op.c_tt
    ps, qs = [], []
    for k in range(order + 1):
        try:
            ps.append(P.subs({"t": point}) / factorial(k))
            qs.append(Q.subs({"t": point}) / factorial(k))
        except ZeroDivisionError:
            raise IrregularSingularityError(f"t = {point} is not a regular singular point") from None
        P, Q = d_t(P), d_t(Q)
    return ps, qs


def _indicial_roots(p0: RatFunc, q0: RatFunc) -> tuple[RatFunc, RatFunc]:
    # rho^2 + (p0 - 1) rho + q0 = 0
    b = p0 - 1
    s = _exact_sqrt(b * b - 4 * q0)
    return (-b - s) / 2, (-b + s) / 2


def indicial_exponents(op: LinOp, point) -> tuple[RatFunc, RatFunc]:
    """Local exponents of ``op`` at a regular singular point.

    At a finite point c the solutions behave like (t - c)^rho.  At
    ``INFINITY`` the exponents are reported as growth orders, psi ~ t^rho,
    which is the negative of the exponent in the local variable 1/t.
    """
    local, c = _local_data(op, point)
    (p0,), (q0,) = _laurent(local, c, 0)
    lo, hi = _indicial_roots(p0, q0)
    if point == INFINITY:
        return -hi, -lo
    return lo, hi


def frobenius_obstruction(op: LinOp, point, smaller_exponent=None, gap: int | None = None) -> RatFunc:
    """Coefficient that must vanish for a log-free solution at the smaller exponent.

    With the exponents rho and rho + gap, the Frobenius recursion
    f(rho + n) a_n = -sum_k ((rho + n - k) p_k + q_k) a_{n-k}
    breaks down at n = gap where f(rho + gap) = 0; the right-hand side at that
    step is returned.  When ``smaller_exponent`` and ``gap`` are omitted they
    are read off the indicial equation.  At infinity the exponent refers to the
    local variable 1/t.
    """
    local, c = _local_data(op, point)
    if gap is None:
        lo, hi = _indicial_roots(*(v[0] for v in _laurent(local, c, 0)))
        diff = hi - lo
        if not diff.is_constant():
            raise ValueError("exponent difference is not a fixed integer")
        d = diff.constant_value()
        if d.denominator != 1:
            raise ValueError(f"exponent difference {d} is not an integer")
        gap = int(d)
        if smaller_exponent is None:
            smaller_exponent = lo
    if not isinstance(gap, int) or gap <= 0:
        raise ValueError(f"gap must be a positive integer, got {gap!r}")
    if smaller_exponent is None:
        raise ValueError("smaller_exponent is required when gap is given")
    rho = RatFunc(smaller_exponent)
    ps, qs = _laurent(local, c, gap)

    def indicial(r):
        return r * (r - 1) + ps[0] * r + qs[0]

    a = [RatFunc(1)]
    for n in range(1, gap + 1):
        rhs = RatFunc(0)
        for k in range(1, n + 1):
            rhs = rhs + ((rho + n - k) * ps[k] + qs[k]) * a[n - k]
        if n == gap:
            return rhs
        f = indicial(rho + n)
        if f.is_zero():
            raise ValueError(f"intermediate resonance at n = {n}")
        a.append(-rhs / f)
    raise AssertionError("unreachable")
