"""
Growth of the Hauptmodul coefficients.

Compares exact c_n^(p) with the leading exponential term, shows the exact
residue constants and how well the principal forms approximate t_2^(3*).
"""

from __future__ import annotations

from hauptraces.asymptotics import (
    RESIDUE_CONSTANTS,
    convergence_report,
    derived_constant,
    fit_envelope,
    laplace_integral,
    principal_envelope,
)

for p in (2, 3, 5):
    table = {k: str(v) for k, v in RESIDUE_CONSTANTS[p].items()}
    rederived = all(derived_constant(p, k) == RESIDUE_CONSTANTS[p][k] for k in range(p))
    print(f"p={p}: constants by n mod p {table}; rederived from phases: {rederived}")

print(convergence_report(3, [50, 100, 200, 400]).render())

J = laplace_integral(3, 400)
print(f"Laplace closed form vs quadrature at n=400: relative gap {float(J.relative_gap):.2e}")

rows = principal_envelope(3, 20, 200)
C, kappa = fit_envelope(rows)
print(f"principal-form error ~ {C:.2f} exp(-{kappa:.3f} pi sqrt(d)) over {len(rows)} discriminants")
for r in rows[::12]:
    print(f"  d={r.d:>3}  exact={r.exact}  scaled error={r.scaled_error:.2e}")
