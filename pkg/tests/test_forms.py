import random
from fractions import Fraction

import pytest
import sympy as sp

from pvi_heat.forms import (
    PviParams,
    SingularLocusError,
    Theta,
    build_lax,
    compat_residual,
    compatibility_closed_form,
    fuchs_from_squares,
    hamilton_velocity_check,
    hamiltonian,
    hamiltonian_check,
    pvi_from_squares,
    pvi_rhs,
    residues,
    riccati_forms,
    squares_from_pvi,
    theta_correspondence,
    theta_squares,
    x_flow,
)
from pvi_heat.kernel import RatFunc, var

import oracles

t, x, u, u1 = var("t"), var("x"), var("u"), var("u1")
F = Fraction


def _fr(*vals):
    return tuple(RatFunc(F(v)) for v in vals)


def random_theta(rng):
    return Theta.rational(*(F(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(4)))


# -- parameter maps ------------------------------------------------------------------


def test_correspondence_at_zero():
    p, f = theta_correspondence(Theta.rational(0, 0, 0, 0))
    assert (p.alpha, p.beta, p.gamma, p.delta) == _fr(0, 0, 0, F(1, 2))
    assert (f.A, f.B, f.C, f.E) == _fr(*(F(-1, 4),) * 4)


def test_correspondence_at_one():
    p, f = theta_correspondence(Theta.rational(1, 1, 1, 1))
    assert (p.alpha, p.beta, p.gamma, p.delta) == _fr(F(1, 2), F(-1, 2), F(1, 2), 0)
    assert (f.A, f.B, f.C, f.E) == _fr(0, 0, 0, F(-3, 4))
    assert 4 * (f.A + f.B + f.C + f.E + 1) == 2 * p.alpha


def test_fuchs_round_trip_from_zero():
    f = fuchs_from_squares(*theta_squares(fuchs_from_squares(*_fr(4, 1, 1, 1))))
    assert (f.A, f.B, f.C, f.E) == _fr(0, 0, 0, 0)


@pytest.mark.parametrize("seed", range(50))
def test_correspondence_relations_random(seed):
    theta = random_theta(random.Random(seed))
    p, f = theta_correspondence(theta)
    sq = tuple(v * v for v in theta.values())
    assert squares_from_pvi(p) == sq
    assert theta_squares(f) == sq
    assert squares_from_pvi(pvi_from_squares(*theta_squares(f))) == theta_squares(f)
    back = fuchs_from_squares(*squares_from_pvi(p))
    assert (back.A, back.B, back.C, back.E) == (f.A, f.B, f.C, f.E)


def test_symbolic_correspondence_matches_oracle():
    p, _ = theta_correspondence(Theta.symbolic())
    for mine, ref in zip((p.alpha, p.beta, p.gamma, p.delta), oracles.pvi_params(oracles.TH)):
        assert sp.simplify(oracles.to_sympy(mine) - ref) == 0


# -- PVI right-hand side ---------------------------------------------------------------


def test_pvi_rhs_hand_value():
    p, _ = theta_correspondence(Theta.rational(1, 0, 0, 0))
    assert pvi_rhs(3, 2, 0, p) == RatFunc(F(-7, 36))


def test_pvi_rhs_vanishes_with_all_parameters_zero():
    params = PviParams(*_fr(0, 0, 0, 0))
    assert pvi_rhs(x, u, 0, params).is_zero()


def test_picard_parameters_do_not_give_a_fixed_point():
    # delta = 1/2 leaves delta*u(u-1)/(x(x-1)(u-x)) at u1 = 0
    params = PviParams(*_fr(0, 0, 0, F(1, 2)))
    assert pvi_rhs(x, u, 0, params) == u * (u - 1) / (2 * x * (x - 1) * (u - x))


@pytest.mark.parametrize("point, factor", [((3, 0, 1), "u"), ((3, 1, 1), "u - 1"), ((3, 3, 1), "u - x"),
                                           ((0, 2, 1), "x"), ((1, 2, 1), "x - 1")])
def test_pvi_rhs_singular_locus(point, factor):
    p, _ = theta_correspondence(Theta.rational(1, 0, 0, 0))
    with pytest.raises(SingularLocusError, match=f"factor {factor} vanishes"):
        pvi_rhs(*point, p)


def test_pvi_rhs_denominator_divides_cleared_form():
    p, _ = theta_correspondence(Theta.symbolic())
    f = pvi_rhs(x, u, u1, p)
    bound = x**2 * (x - 1) ** 2 * u**2 * (u - 1) ** 2 * (u - x) ** 2
    assert (bound / RatFunc(f.den)).is_polynomial()


def test_pvi_rhs_matches_oracle():
    p, _ = theta_correspondence(Theta.symbolic())
    diff = oracles.to_sympy(pvi_rhs(x, u, u1, p)) - oracles.pvi_rhs(oracles.TH)
    assert sp.cancel(sp.together(diff)) == 0


# -- Lax pair ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def lax():
    return build_lax(Theta.symbolic())


def test_W_values(lax):
    W = lax.forms.W
    assert W.subs({"t": x}) == 1
    assert W.subs({"t": 0}).is_zero() and W.subs({"t": 1}).is_zero()


def test_double_pole_coefficient(lax):
    minus_half_S = -lax.forms.S / 2
    assert (minus_half_S * (t - u) ** 2).subs({"t": u}) == RatFunc(F(3, 4))


def test_pair_shape(lax):
    assert lax.L1.c_tt == 1 and lax.L1.c_t.is_zero() and lax.L1.c_x.is_zero()
    assert lax.L2.c_x == 1 and lax.L2.c_t == lax.forms.W
    assert lax.L2.c_0 == -lax.forms.W.diff("t") / 2


def test_S_matches_oracle(lax):
    S, W = oracles.garnier(oracles.TH)
    assert sp.cancel(sp.together(oracles.to_sympy(lax.forms.S) - S)) == 0
    assert sp.cancel(sp.together(oracles.to_sympy(lax.forms.W) - W)) == 0


def test_compat_residual_symbolic(lax):
    assert compat_residual(lax.L1, lax.L2, x_flow(lax.theta)).is_zero()


def test_compat_closed_form_relation(lax):
    flow = x_flow(lax.theta)
    assert compatibility_closed_form(lax.forms, flow).is_zero()


def test_compat_spot_value_from_oracle():
    th = tuple(sp.Rational(1, d) for d in (2, 3, 5, 7))
    value = oracles.zero_curvature(th).subs({oracles.t: 7, oracles.x: 2, oracles.u: 3, oracles.u1: 5})
    assert sp.nsimplify(value) == 0


def test_compat_spot_value_from_kernel():
    theta = Theta.rational(F(1, 2), F(1, 3), F(1, 5), F(1, 7))
    lax = build_lax(theta)
    res = compat_residual(lax.L1, lax.L2, x_flow(theta))
    assert res.is_zero()


def test_perturbed_flow_breaks_compatibility(lax):
    params, _ = theta_correspondence(lax.theta)
    flow = x_flow(lax.theta, pvi_rhs(x, u, u1, params) + 1)
    assert not compat_residual(lax.L1, lax.L2, flow).is_zero()


def test_jet_residual_is_minus_half_closed_form_off_shell(lax):
    params, _ = theta_correspondence(lax.theta)
    flow = x_flow(lax.theta, pvi_rhs(x, u, u1, params) + 1)
    res = compat_residual(lax.L1, lax.L2, flow)
    assert not res.is_zero()
    assert (res + compatibility_closed_form(lax.forms, flow) / 2).is_zero()


def test_literal_t_free_term_breaks_compatibility():
    # the oracle's literal variant keeps "+ fG(u)" in the t-free term
    th = tuple(sp.Rational(1, d) for d in (2, 3, 5, 7))
    value = oracles.zero_curvature(th, literal=True).subs({oracles.t: 7, oracles.x: 2, oracles.u: 3, oracles.u1: 5})
    assert sp.nsimplify(value) != 0


# -- Riccati forms and residues ---------------------------------------------------------------


def test_K_values():
    assert riccati_forms(Theta.rational(0, 0, 0, 0)).K == 1
    assert riccati_forms(Theta.rational(F(1, 2), F(1, 6), F(1, 6), F(1, 6))).K.is_zero()


def test_R_at_u_equal_x():
    theta = Theta.symbolic()
    R = riccati_forms(theta).R_of(*theta.values()[1:])
    assert R.subs({"u": x, "u1": 0}) == x * (x - 1) * (var("thx") - 1)


def test_R_matches_oracle():
    theta = Theta.symbolic()
    R = riccati_forms(theta).R_of(*theta.values()[1:])
    assert sp.expand(oracles.to_sympy(R) - oracles.riccati_R(*oracles.TH[1:])) == 0


@pytest.fixture(scope="module")
def res():
    return residues(Theta.symbolic())


def test_Ru_is_R(res):
    theta = Theta.symbolic()
    assert res.Ru == riccati_forms(theta).R_of(*theta.values()[1:])


def test_Rx_display(res):
    th_inf, th0, th1, thx = oracles.TH
    R = oracles.riccati_R
    display = -(R(th0, th1, thx) * R(-th0, -th1, 2 - thx) + oracles.riccati_K(oracles.TH)
                * oracles.u * (oracles.u - 1) * (oracles.u - oracles.x) ** 2) / (oracles.x * (oracles.x - 1))
    assert sp.cancel(sp.together(oracles.to_sympy(res.Rx) - display)) == 0


def test_residues_vanish_on_riccati_locus():
    # K = 0 by the choice of theta; R = 0 by solving for u1
    theta = Theta.rational(F(1, 2), F(1, 6), F(1, 6), F(1, 6))
    res = residues(theta)
    R = riccati_forms(theta).R_of(*theta.values()[1:])
    u1_locus = -R.subs({"u1": 0}) / (x * (x - 1))
    for r in (res.R0, res.R1, res.Rx, res.Ru):
        assert r.subs({"u1": u1_locus}).is_zero()


# -- Hamiltonian -----------------------------------------------------------------------


def test_hamiltonian_identity():
    assert hamiltonian_check(Theta.symbolic()).is_zero()


def test_hamilton_velocity():
    assert hamilton_velocity_check(Theta.symbolic()).is_zero()


def test_hamiltonian_degrees():
    Hx = hamiltonian(Theta.symbolic()) * x * (x - 1)
    assert Hx.is_polynomial()
    assert Hx.degree("p") == 2 and Hx.degree("u") == 3


# -- Theta parsing ------------------------------------------------------------------------


def test_theta_parse():
    assert Theta.parse("symbolic") == Theta.symbolic()
    assert Theta.parse("1/2, 1/3,1/5,1/7").as_fractions() == (F(1, 2), F(1, 3), F(1, 5), F(1, 7))
    assert str(Theta.parse("1,1,1,1")) == "1,1,1,1"


@pytest.mark.parametrize("bad", ["1,2", "a,b,c,d", "1/0,1,1,1", ""])
def test_theta_parse_errors(bad):
    with pytest.raises(ValueError):
        Theta.parse(bad)
