from fractions import Fraction

from pvi_heat import Theta
from pvi_heat.numerics import heat_residual_sweep, initial_grid, integrate_pvi

theta = Theta.rational(Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7))

# A PVI trajectory that stays away from its poles on [0.4, 0.6]
traj = integrate_pvi(theta, 0.4, 0.7, 0.0, 0.6)
print(traj.termination, "u(0.6) =", traj(0.6)[0])

# Psi on a few real t-nodes, started from one Cauchy datum on the spectral equation
nodes = [1.5, 1.8, 2.1, 2.4, 2.7]
grid = initial_grid(theta, 0.4, 0.7, 0.0, nodes, 1.0, 0.3)
print("Psi at x = 0.4:", grid.psi.round(6))

# Transport Psi along x with the Lax pair, then plug it into the u-free heat
# equation. The x-derivative is a centered difference, so the residual is
# pure discretization error and halves by about 4 when h does
rows = heat_residual_sweep(traj, grid, [0.45, 0.5], 1e-2)
for r in rows:
    print(f"t = {r.t:.1f} x = {r.x:.2f}  res(h) = {r.residual_h:.2e}  res(h/2) = {r.residual_h2:.2e}  "
          f"order {r.order:.3f}")

# Break the heat equation on purpose: the residual no longer goes to zero
bad = heat_residual_sweep(traj, grid, [0.45], 1e-2, perturbation=1.0)
print("perturbed orders:", [round(r.order, 3) for r in bad])
