"""
Exact q-series arithmetic.

Builds eta quotients, checks the Jacobi triple product against theta0^2,
and shows how truncation propagates through products.
"""

from __future__ import annotations

from hauptraces.series import QSeries, U_t, eta_series, euler_power, sector_filter, theta0

N = 12

eta = eta_series(N)
print("eta(tau) =", eta)

# Ramanujan's tau from Delta = q prod (1 - q^n)^24
delta = euler_power(24, N).shift(1)
print("tau(1..6) =", delta.coefficients(1, 7))

# theta0^2 counts representations as a sum of two squares
r2 = (theta0(N) * theta0(N)).coefficients(0, N)
print("r_2(0..11) =", r2)

# truncations combine as min(T_f + v_g, T_g + v_f)
f = QSeries([1, 2, 3], -1, 5)
g = QSeries([1, 1], 0, 3)
print("valuation/trunc of f*g:", (f * g).valuation, (f * g).trunc)

# U_3 and the residue sectors mod 3
print("U_3(theta0) =", U_t(theta0(N), 3))
print("sector 1 mod 3 of theta0:", sector_filter(theta0(N), 1, 3))
