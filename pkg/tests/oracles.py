"""Independent reference computations in plain sympy expressions.

Nothing here touches the package's polynomial ring: formulas are typed in
again from the definitions and compared through sympy's own parser.
"""

import sympy as sp

t, x, u, u1 = sp.symbols("t x u u1")
TH = sp.symbols("th_inf th0 th1 thx")


def to_sympy(f) -> sp.Expr:
    return sp.sympify(str(f).replace("^", "**"))


def pvi_params(th):
    th_inf, th0, th1, thx = th
    return th_inf**2 / 2, -th0**2 / 2, th1**2 / 2, (1 - thx**2) / 2


def pvi_rhs(th, X=x, U=u, U1=u1):
    a, b, c, d = pvi_params(th)
    return (
        sp.Rational(1, 2) * (1 / U + 1 / (U - 1) + 1 / (U - X)) * U1**2
        - (1 / X + 1 / (X - 1) + 1 / (U - X)) * U1
        + U * (U - 1) * (U - X) / (X**2 * (X - 1) ** 2)
        * (a + b * X / U**2 + c * (X - 1) / (U - 1) ** 2 + d * X * (X - 1) / (U - X) ** 2)
    )


def garnier(th, literal=False):
    """(S, W) of the scalar pair; ``literal`` uses +fG(u) in the t-free term."""
    th_inf, th0, th1, thx = th
    A, B, C = ((s**2 - 1) / 4 for s in (th0, th1, thx))
    E = th_inf**2 / 4 - 1 - A - B - C

    def fG(z):
        return A / z**2 + B / (z - 1) ** 2 + C / (z - x) ** 2 + E / (z * (z - 1))

    g1 = -x * (x - 1) / (2 * (u - x))
    g0 = -u + sp.Rational(1, 2)
    extra = fG(u) if literal else -u * (u - 1) * (u - x) * fG(u)
    minus_half_S = (
        sp.Rational(3, 4) / (t - u) ** 2
        + (g1 * u1 + g0) / ((t - u) * t * (t - 1))
        + (((g1 * u1) ** 2 - g0**2) * (u - x) / (u * (u - 1)) + extra) / (t * (t - 1) * (t - x))
        + fG(t)
    )
    W = -t * (t - 1) * (u - x) / ((t - u) * x * (x - 1))
    return -2 * minus_half_S, W


def flow(f, th):
    return sp.diff(f, x) + u1 * sp.diff(f, u) + pvi_rhs(th) * sp.diff(f, u1)


def zero_curvature(th, literal=False):
    """X(S) + W_ttt + W S_t + 2 S W_t, unsimplified."""
    S, W = garnier(th, literal)
    return flow(S, th) + sp.diff(W, t, 3) + W * sp.diff(S, t) + 2 * S * sp.diff(W, t)


def riccati_R(a0, a1, ax):
    return x * (x - 1) * u1 + a0 * (u - 1) * (u - x) + a1 * u * (u - x) + (ax - 1) * u * (u - 1)


def riccati_K(th):
    th_inf, th0, th1, thx = th
    return (1 - th0 - th1 - thx) ** 2 - th_inf**2


def legendre_series_coefficients(n):
    """a_k of 2F1(1/2,1/2;1;t) from the closed form binomial(2k,k)^2 / 16^k."""
    return [sp.Rational(sp.binomial(2 * k, k) ** 2, 16**k) for k in range(n)]
