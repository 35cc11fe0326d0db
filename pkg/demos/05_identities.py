"""
Exact identities between Hauptmodul coefficients and traces.

Recovers c_n^(p) from t_2^(p*), checks the relation between starred and
unstarred Hauptmoduln and the weight-2 sector identities on a window.
"""

from __future__ import annotations

from hauptraces.hauptmodul import Level, hauptmodul_series
from hauptraces.identities import (
    coefficient_via_traces,
    verify_star_relation,
    verify_theorem1,
    verify_weight2_sectors,
)

for p in (2, 3, 5):
    j = hauptmodul_series(Level(p, False), 6)
    print(f"p={p}: from traces {[coefficient_via_traces(p, n) for n in range(1, 6)]}, "
          f"from eta quotient {j.coefficients(1, 6)}")

for p in (2, 3, 5):
    print(verify_theorem1(p, 50).summary())
    print(verify_star_relation(p, 200).summary())
    print(verify_weight2_sectors(p, 120).summary())
