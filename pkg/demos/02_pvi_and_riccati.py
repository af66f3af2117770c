from fractions import Fraction

import numpy as np

from pvi_heat import Theta, riccati_forms
from pvi_heat.numerics import integrate_pvi

# K = (1 - th0 - th1 - thx)^2 - th_inf^2 vanishes for this choice
theta = Theta.rational(Fraction(1, 2), Fraction(1, 6), Fraction(1, 6), Fraction(1, 6))
forms = riccati_forms(theta)
print("K =", forms.K)

# R(x, u, u') = 0 is a first-order Riccati equation. Start on it
R = forms.R_of(*theta.values()[1:]).to_callable(("x", "u", "u1"))
x0, u0 = 1.5, 3.0
du0 = -R(x0, u0, 0.0) / (x0 * (x0 - 1))
print(f"u({x0}) = {u0}, u'({x0}) = {du0:.6f}")

traj = integrate_pvi(theta, x0, u0, du0, 2.5)
print(traj.termination, len(traj.x), "steps,", traj.n_rejected, "rejected")

# The full PVI flow should keep R at zero
xs = np.linspace(1.5, 2.5, 6)
for s in xs:
    u, du = traj(s)
    print(f"x = {s:.1f}  u = {u:.10f}  R/(1+|u|^3) = {R(s, u, du) / (1 + abs(u) ** 3):+.2e}")

# Fast-moving data stops at an exclusion zone instead of stepping through it
blow = integrate_pvi(Theta.rational(1, 0, 0, 0), 0.4, 0.7, 5.0, 0.99)
print(blow.termination, "at x =", blow.x[-1])
print(blow.message)
