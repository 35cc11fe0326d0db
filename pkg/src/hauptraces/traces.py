"""
Modular trace functions t_m^(p)(d) and t_m^(p*)(d).

For d > 0 the trace is a stabilizer-weighted sum of phi_m(j_p*(alpha_Q))
over form classes, evaluated in ball arithmetic and rounded to the unique
integer inside the ball. For d <= 0 the values are the constants of the
generating series g_m^(p*).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import repeat

from flint import acb, arb, ctx

from .forms import FormClass, discriminant_ok, gamma0_classes, gamma0star_classes
from .hauptmodul import Level, PrecisionBudget, PrecisionError, eval_hauptmodul, faber, initial_bits
from .series import QSeries, sigma1

SCHEMA_VERSION = 1

# the m = 2 constants as listed for the starred traces
SPECIAL_M2 = {
    1: {0: 6, -1: -1, -4: -2},
    2: {0: 5, -1: -1, -4: -2},
    3: {0: 3, -1: -1, -4: -2},
    5: {0: 3, -1: -1, -4: -2},
}

ROUNDING_GATE = 0.1
DEFAULT_TOL = 2.0 ** -24


@dataclass(frozen=True)
class TraceValue:
    p: int
    starred: bool
    m: int
    d: int
    value: int
    provenance: str  # "special_value", "cm_sum" or "zero_nonsquare"
    residual: float = 0.0
    radius: float = 0.0
    bits: int = 0

    def __int__(self):
        return self.value


def constant_term(p: int, m: int) -> int:
    """sigma1(m) + p sigma1(m/p), with sigma1 of a non-integer taken as 0."""
    return sigma1(m) + (p * sigma1(m // p) if m % p == 0 else 0)


def _starred_special(p: int, m: int, d: int) -> int:
    if d == 0:
        return constant_term(p, m)
    k = int(round((-d) ** 0.5))
    if k * k == -d and m % k == 0:
        return -k
    return 0


def special_value(p: int, m: int, d: int, starred: bool = True) -> int:
    """t_m(d) for d <= 0.

    Starred values come from the constant and principal part of g_m^(p*):
    sigma1(m) + p sigma1(m/p) at d = 0, -k at d = -k^2 for k | m, else 0.
    Unstarred values double the starred one when p | d (a single beta
    sector that Fricke maps to itself) and agree with it otherwise.
    """
    if d > 0:
        raise ValueError("special values are defined for d <= 0 only")
    if p not in SPECIAL_M2:
        raise ValueError(f"unsupported level {p}")
    v = _starred_special(p, m, d)
    if m == 2:
        listed = SPECIAL_M2[p].get(d, 0)
        if v != listed:
            raise AssertionError(f"g_2^({p}*) constants disagree at d = {d}: {v} vs {listed}")
    if not starred and p > 1 and d % p == 0:
        v *= 2
    return v


def class_list(p: int, starred: bool, d: int, beta: int | None = None) -> list[FormClass]:
    if starred or p == 1:
        return gamma0star_classes(d, p)
    ok, betas = discriminant_ok(d, p)
    if beta is None:
        beta = betas[0]
    return gamma0_classes(d, p, beta)


@lru_cache(maxsize=200_000)
def _cm_value(p: int, rep, bits: int) -> acb:
    return eval_hauptmodul(Level(p, True), rep, bits)


def _ball_sum(p: int, m: int, classes: list[FormClass], bits: int) -> acb:
    phi = faber(Level(p, True), m)
    with ctx.workprec(bits):
        total = acb(0)
        for C in classes:
            J = _cm_value(p, C.representative, bits)
            total += phi(J) / C.stabilizer_order
    return total


def trace(p: int, starred: bool, m: int, d: int, budget: PrecisionBudget | None = None,
          beta: int | None = None, tol: float = DEFAULT_TOL) -> TraceValue:
    """t_m^(p*)(d) (starred) or t_m^(p)(d) as an exact integer."""
    if m < 1:
        raise ValueError("m must be positive")
    if p == 1:
        starred = True
    if d <= 0:
        return TraceValue(p, starred, m, d, special_value(p, m, d, starred), "special_value")
    ok, _ = discriminant_ok(d, p)
    if not ok:
        return TraceValue(p, starred, m, d, 0, "zero_nonsquare")
    classes = class_list(p, starred, d, beta)
    bits = max(budget.working_bits, initial_bits(p, m, d)) if budget else initial_bits(p, m, d)
    ceiling = budget.ceiling_bits if budget else 1 << 14
    while bits <= ceiling:
        total = _ball_sum(p, m, classes, bits)
        rad = max(float(total.real.rad()), float(total.imag.rad()))
        if rad < tol:
            break
        bits *= 2
    else:
        raise PrecisionError(f"t_{m}^({p}{'*' if starred else ''})({d}) not resolved within {ceiling} bits")
    if not total.imag.contains(0):
        raise ArithmeticError(f"trace at d = {d} has a nonzero imaginary part: {total}")
    mid = total.real.mid()
    n = _round_arb(mid)
    with ctx.workprec(bits):
        residual = float(abs(mid - n))
    if residual + rad >= ROUNDING_GATE:
        raise ArithmeticError(f"trace at d = {d} is not within {ROUNDING_GATE} of an integer: {total}")
    return TraceValue(p, starred, m, d, n, "cm_sum", residual, rad, bits)


def _round_arb(x: arb) -> int:
    """Nearest integer to the (exact) midpoint of x."""
    man, exp = (int(v) for v in x.mid().man_exp())
    if exp >= 0:
        return man << exp
    return (man + (1 << (-exp - 1))) >> -exp


@lru_cache(maxsize=None)
def trace_int(p: int, starred: bool, m: int, d: int) -> int:
    return trace(p, starred, m, d).value


def traces_upto(p: int, m: int, d_max: int, starred: bool = True, d_min: int = -4) -> dict[int, int]:
    """{d: t_m(d)} for d_min <= d <= d_max, computed in increasing d."""
    return {d: trace_int(p, starred, m, d) for d in range(d_min, d_max + 1)}


# ---------------------------------------------------------------------------
# generating series
# ---------------------------------------------------------------------------


def g_series(p: int, m: int, N: int) -> QSeries:
    """sum_{d>0} t_m^(p*)(d) q^d + (sigma1(m) + p sigma1(m/p)) - sum_{k|m} k q^{-k^2}, up to O(q^N)."""
    terms = {0: constant_term(p, m)}
    for k in range(1, m + 1):
        if m % k == 0:
            terms[-k * k] = -k
    # the assembled principal part must match the special values
    for d, v in terms.items():
        if v != special_value(p, m, d):
            raise AssertionError(f"principal part of g_{m}^({p}*) disagrees at q^{d}")
    for d in range(1, N):
        terms[d] = trace_int(p, True, m, d)
    return QSeries.from_dict(terms, N)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


@dataclass
class TraceTable:
    p: int
    m_max: int
    d_max: int
    rows: dict[int, dict[tuple[int, bool], int]] = field(default_factory=dict)

    def columns(self) -> list[tuple[int, bool]]:
        return [(m, True) for m in range(1, self.m_max + 1)] + [(m, False) for m in range(1, self.m_max + 1)]

    @staticmethod
    def column_name(m: int, starred: bool) -> str:
        return f"t{m}_star" if starred else f"t{m}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d"] + [self.column_name(*c) for c in self.columns()])
        for d in sorted(self.rows):
            w.writerow([d] + [self.rows[d][c] for c in self.columns()])
        return buf.getvalue()

    def to_json(self) -> str:
        data = {
            "schema_version": SCHEMA_VERSION,
            "p": self.p,
            "m_max": self.m_max,
            "d_max": self.d_max,
            "columns": ["d"] + [self.column_name(*c) for c in self.columns()],
            "rows": [[d] + [self.rows[d][c] for c in self.columns()] for d in sorted(self.rows)],
        }
        return json.dumps(data, indent=1)

    def render(self) -> str:
        head = ["d"] + [f"t_{m}^({self.p}{'*' if s else ''})(d)" for m, s in self.columns()]
        body = [[str(d)] + [str(self.rows[d][c]) for c in self.columns()] for d in sorted(self.rows)]
        widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
        lines = [" | ".join(h.rjust(w) for h, w in zip(head, widths))]
        lines.append("-+-".join("-" * w for w in widths))
        lines += [" | ".join(x.rjust(w) for x, w in zip(r, widths)) for r in body]
        return "\n".join(lines) + "\n"


def table_rows(p: int, m_max: int, d_max: int) -> list[int]:
    """-k^2 for k <= m_max, then 0 and every d <= d_max with -d a square mod 4p."""
    neg = sorted(-k * k for k in range(1, m_max + 1))
    return neg + [0] + [d for d in range(1, d_max + 1) if discriminant_ok(d, p)[0]]


def _table_row(p: int, columns, d: int, budget: PrecisionBudget | None):
    if budget is None:
        return {(m, s): trace_int(p, s, m, d) for m, s in columns}
    return {(m, s): trace(p, s, m, d, budget).value for m, s in columns}


def trace_table(p: int, m_max: int = 2, d_max: int = 50, budget: PrecisionBudget | None = None,
                workers: int = 1) -> TraceTable:
    """All traces for d in table_rows; rows may be computed in worker processes."""
    table = TraceTable(p, m_max, d_max)
    cols = table.columns()
    ds = table_rows(p, m_max, d_max)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_table_row, repeat(p), repeat(cols), ds, repeat(budget)))
    else:
        results = [_table_row(p, cols, d, budget) for d in ds]
    table.rows = dict(zip(ds, results))
    return table
