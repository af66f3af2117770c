import math

import numpy as np

from pvi_heat import picard_reduction
from pvi_heat.numerics import elliptic_K_agm, hypergeometric_half, legendre_check, picard_period

# At theta = 0 and g = 0 the heat operator loses its x-part and becomes
# Legendre's equation for the periods of an elliptic curve
op = picard_reduction()
print("t(t-1) d_t^2 + (2t-1) d_t + 1/4:")
print("  c_tt =", op.c_tt, " c_t =", op.c_t, " c_0 =", op.c_0)

# K(k) from the arithmetic-geometric mean
print("K(0) =", elliptic_K_agm(0.0), "pi/2 =", math.pi / 2)
print("K(1/sqrt2) =", elliptic_K_agm(1 / math.sqrt(2)))

# The same function two ways: AGM, and the 2F1(1/2,1/2;1;t) series
for t in (0.25, 0.5, 0.75):
    f, _, _ = hypergeometric_half(t)
    print(f"t = {t}: (2/pi) K(sqrt t) = {picard_period(t):.15f}  series = {f:.15f}")

# Residual of Legendre's equation on AGM values with series derivatives
print("max residual:", legendre_check([0.25, 0.5, 0.75]))
print("on (0.1, 0.9):", legendre_check(list(np.linspace(0.1, 0.9, 17))))
