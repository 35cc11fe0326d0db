"""
Hauptmoduln for Gamma0(p) and Gamma0*(p), their Faber polynomials and
certified values at CM points.
"""

from __future__ import annotations

from hauptraces.forms import QuadForm
from hauptraces.hauptmodul import Level, eval_hauptmodul_star, faber, hauptmodul_series

for p in (2, 3, 5):
    for starred in (False, True):
        level = Level(p, starred)
        print(f"{level}: {hauptmodul_series(level, 5)}")

level = Level(3, True)
for m in (1, 2, 3):
    print(f"phi_{m} at level 3*:", faber(level, m).coeffs)

# CM values come back as balls; these two are rational integers
for p, form in ((2, QuadForm(2, 0, 1)), (3, QuadForm(3, 3, 1))):
    val, bits = eval_hauptmodul_star(Level(p, True), form)
    print(f"j_{p}*({form}) = {val.real}  ({bits} bits)")
