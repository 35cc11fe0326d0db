"""
Traces of singular moduli and their generating series.

Each trace is a stabilizer-weighted sum of Faber polynomial values at CM
points, rounded to an integer only after the ball is narrow enough.
"""

from __future__ import annotations

from hauptraces.traces import g_series, trace, trace_table

tv = trace(2, True, 2, 47)
print(f"t_2^(2*)(47) = {tv.value}  (residual {tv.residual:.2e}, {tv.bits} bits)")

table = trace_table(3, m_max=2, d_max=30)
print(table.render())

# the same numbers, read off as coefficients of g_2^(3*)
g = g_series(3, 2, 31)
print("g_2^(3*) =", g.truncate(13))
