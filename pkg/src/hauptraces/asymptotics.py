"""
Growth of c_n^(p) and of the traces t_2^(p*)(d).

The dominant part of t_m^(p*)(d) comes from the forms [p, b, c] alone
(``principal_trace_approx``). Summing those leading terms over r in the
coefficient formula gives Riemann sums S_n^(k) of the integral

    J_n = int_{-1}^{1} exp((4 pi / p) sqrt(n) sqrt(1 - t^2)) dt,

and Laplace's method turns J_n into the closed form behind ``predict``:

    c_n^(p) ~ C_p(n mod p) exp(4 pi sqrt(n) / p) / (sqrt(2p) n^(3/4)).

The residue constants C_p are kept exactly as a + b sqrt(5). They are
also re-derived independently from the phases of the principal forms
(``derived_constant``), which the tests compare with the table.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath
from mpmath import mp, mpf

from .forms import discriminant_ok, principal_forms
from .hauptmodul import Level, hauptmodul_series
from .traces import SCHEMA_VERSION, trace_int

WORKING_DPS = 50


# ---------------------------------------------------------------------------
# exact numbers a + b sqrt(5)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Surd:
    """a + b sqrt(5) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other):
        other = _as_surd(other)
        return Surd(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_as_surd(other))

    def __mul__(self, other):
        o = _as_surd(other)
        return Surd(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def to_mpf(self):
        return mpf(self.a.numerator) / self.a.denominator + mpf(self.b.numerator) / self.b.denominator * mpmath.sqrt(5)

    def __float__(self):
        return float(self.to_mpf())

    def sign(self) -> int:
        # exact: compare a with -b sqrt(5) by squaring
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        if (self.a > 0) == (self.b > 0):
            return 1 if self.a > 0 else -1
        big_a = self.a * self.a > 5 * self.b * self.b
        return (1 if self.a > 0 else -1) if big_a else (1 if self.b > 0 else -1)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt(5)"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt(5)"


def _as_surd(x) -> Surd:
    return x if isinstance(x, Surd) else Surd(Fraction(x))


# leading constants of c_n^(p), indexed by n mod p
RESIDUE_CONSTANTS: dict[int, dict[int, Surd]] = {
    2: {0: Surd(-1), 1: Surd(1)},
    3: {0: Surd(-1), 1: Surd(2), 2: Surd(-1)},
    5: {
        0: Surd(-1),
        1: Surd(Fraction(3, 2), Fraction(1, 2)),
        2: Surd(-1, 1),
        3: Surd(-1, -1),
        4: Surd(Fraction(3, 2), Fraction(-1, 2)),
    },
}

# cos(2 pi b / p) for b mod p
_COS = {
    2: {0: Surd(1), 1: Surd(-1)},
    3: {0: Surd(1), 1: Surd(Fraction(-1, 2)), 2: Surd(Fraction(-1, 2))},
    5: {
        0: Surd(1),
        1: Surd(Fraction(-1, 4), Fraction(1, 4)),
        2: Surd(Fraction(-1, 4), Fraction(-1, 4)),
        3: Surd(Fraction(-1, 4), Fraction(-1, 4)),
        4: Surd(Fraction(-1, 4), Fraction(1, 4)),
    },
}


def _check_level(p: int):
    if p not in RESIDUE_CONSTANTS:
        raise ValueError(f"unsupported level {p}; expected 2, 3 or 5")


# ---------------------------------------------------------------------------
# principal forms
# ---------------------------------------------------------------------------


def principal_phase(p: int, d: int, m: int = 2) -> Surd:
    """sum over b in (-p, p], b^2 = -d mod 4p, of cos(pi m b / p) (m even)."""
    _check_level(p)
    if m % 2:
        raise ValueError("exact phases are tabulated for even m only")
    total = Surd(0)
    for b in range(-p + 1, p + 1):
        if (b * b + d) % (4 * p) == 0:
            total = total + _COS[p][(b * m // 2) % p]
    return total


def principal_trace_approx(p: int, m: int, d: int):
    """sum over principal forms [p, b, c] of exp(pi i m b / p) exp(pi m sqrt(d) / p)."""
    _check_level(p)
    forms = principal_forms(d, p)  # raises if -d is not a square mod 4p
    with mp.workdps(WORKING_DPS):
        phase = mpmath.fsum(mpmath.cos(mp.pi * m * Q.b / p) for Q in forms)
        return +(phase * mpmath.exp(mp.pi * m * mpmath.sqrt(d) / p))


@dataclass
class EnvelopeRow:
    d: int
    exact: int
    approx: object
    scaled_error: float  # |approx - exact| / exp(pi m sqrt(d) / p)


def principal_envelope(p: int, d_min: int, d_max: int, m: int = 2) -> list[EnvelopeRow]:
    """Exact trace vs the principal-form approximation for every valid d in range."""
    rows = []
    with mp.workdps(WORKING_DPS):
        for d in range(d_min, d_max + 1):
            if not discriminant_ok(d, p)[0]:
                continue
            exact = trace_int(p, True, m, d)
            approx = principal_trace_approx(p, m, d)
            scale = mpmath.exp(mp.pi * m * mpmath.sqrt(d) / p)
            rows.append(EnvelopeRow(d, exact, approx, float(abs(approx - exact) / scale)))
    return rows


def fit_envelope(rows: list[EnvelopeRow]) -> tuple[float, float]:
    """Least-squares fit log(err) = log(C) - kappa pi sqrt(d); returns (C, kappa)."""
    xs = [mpmath.pi * mpmath.sqrt(r.d) for r in rows]
    ys = [mpmath.log(r.scaled_error) for r in rows]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return float(mpmath.exp(my - slope * mx)), float(-slope)


# ---------------------------------------------------------------------------
# Riemann sums and the Laplace integral
# ---------------------------------------------------------------------------


def _rate(p: int):
    return 4 * mp.pi / p


def S_sum(p: int, n: int, k: int):
    """(p / 2 sqrt(n)) sum_{r = k mod p, r^2 <= 4n} exp((4 pi / p) sqrt(n) sqrt(1 - r^2 / 4n))."""
    if n < 1:
        raise ValueError("n must be positive")
    r_max = isqrt(4 * n)
    with mp.workdps(WORKING_DPS):
        # (4 pi / p) sqrt(n) sqrt(1 - r^2/4n) = (2 pi / p) sqrt(4n - r^2)
        terms = (mpmath.exp(2 * mp.pi * mpmath.sqrt(4 * n - r * r) / p)
                 for r in range(-r_max, r_max + 1) if (r - k) % p == 0)
        return +(mpf(p) / (2 * mpmath.sqrt(n)) * mpmath.fsum(terms))


def laplace_closed_form(lam, h0, h2):
    """Laplace's method for int exp(lam h(t)) dt with an interior maximum:
    exp(lam h0) sqrt(2 pi / (lam |h''|))."""
    return mpmath.exp(lam * h0) * mpmath.sqrt(2 * mp.pi / (lam * abs(h2)))


@dataclass(frozen=True)
class LaplaceIntegral:
    p: int
    n: int
    quadrature: object
    error_estimate: object
    laplace: object

    @property
    def relative_gap(self) -> float:
        return float(abs(self.quadrature / self.laplace - 1))


def laplace_integral(p: int, n: int) -> LaplaceIntegral:
    """J_n by tanh-sinh quadrature and by Laplace's method (h = sqrt(1 - t^2), h'' = -1)."""
    _check_level(p)
    if n < 1:
        raise ValueError("n must be positive")
    with mp.workdps(WORKING_DPS):
        lam = _rate(p) * mpmath.sqrt(n)
        # factor out the peak so the quadrature works with O(1) values
        f = lambda t: mpmath.exp(lam * (mpmath.sqrt(1 - t * t) - 1))
        val, err = mpmath.quad(f, [-1, 0, 1], error=True)
        peak = mpmath.exp(lam)
        return LaplaceIntegral(p, n, val * peak, err * peak, laplace_closed_form(lam, 1, -1))


# ---------------------------------------------------------------------------
# predictions
# ---------------------------------------------------------------------------


def derived_constant(p: int, k: int) -> Surd:
    """The residue constant rebuilt from principal-form phases.

    Replacing each t_2^(p*)(4n - r^2) in the coefficient formula by its
    principal part and grouping r by its class rho mod 2p (the phase
    depends only on 4n - rho^2 mod 4p), each class contributes a Riemann
    sum of density 1/2p. That leaves half the sum of the phases, with the
    sign and the restriction r = 0 mod p for k = 0.
    """
    _check_level(p)
    k %= p
    if k == 0:
        rhos = [rho for rho in range(2 * p) if rho % p == 0]
        sign = -1
    else:
        rhos = list(range(2 * p))
        sign = 1
    total = Surd(0)
    for rho in rhos:
        # the phase is an empty sum when -(4k - rho^2) is not a square mod 4p
        total = total + principal_phase(p, 4 * k - rho * rho)
    return total * Fraction(sign, 2)


@dataclass(frozen=True)
class AsymptoticPrediction:
    p: int
    n: int
    predicted: object  # mpf
    residue_class: int
    constant: Surd

    @property
    def sign(self) -> int:
        return self.constant.sign()


def leading_growth(p: int, n: int):
    """exp(4 pi sqrt(n) / p) / (sqrt(2p) n^(3/4))."""
    with mp.workdps(WORKING_DPS):
        return mpmath.exp(_rate(p) * mpmath.sqrt(n)) / (mpmath.sqrt(2 * p) * mpf(n) ** mpf(0.75))


def predict(p: int, n: int) -> AsymptoticPrediction:
    _check_level(p)
    if n < 1:
        raise ValueError("n must be positive")
    k = n % p
    C = RESIDUE_CONSTANTS[p][k]
    with mp.workdps(WORKING_DPS):
        value = C.to_mpf() * leading_growth(p, n)
    return AsymptoticPrediction(p, n, value, k, C)


# ---------------------------------------------------------------------------
# convergence diagnostics
# ---------------------------------------------------------------------------


@dataclass
class ConvergenceRow:
    n: int
    residue_class: int
    exact: int
    predicted: object
    ratio: object

    @property
    def deviation(self) -> float:
        return float(abs(self.ratio - 1))


@dataclass
class ConvergenceReport:
    p: int
    grid: list[int]
    rows: list[ConvergenceRow] = field(default_factory=list)

    def by_class(self) -> dict[int, list[ConvergenceRow]]:
        out: dict[int, list[ConvergenceRow]] = {k: [] for k in range(self.p)}
        for row in self.rows:
            out[row.residue_class].append(row)
        return out

    def non_increasing(self) -> dict[int, bool]:
        """Is |ratio - 1| non-increasing along the grid, per residue class?"""
        flags = {}
        for k, rows in self.by_class().items():
            devs = [r.deviation for r in sorted(rows, key=lambda r: r.n)]
            flags[k] = all(b <= a for a, b in zip(devs, devs[1:]))
        return flags

    def signs_match(self) -> bool:
        return all((r.exact > 0) == (r.predicted > 0) for r in self.rows)

    def _records(self):
        for r in self.rows:
            yield [r.n, r.residue_class, str(r.exact), mpmath.nstr(r.predicted, 20),
                   mpmath.nstr(r.ratio, 15)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "residue", "exact", "predicted", "ratio"])
        w.writerows(self._records())
        return buf.getvalue()

    def to_json(self) -> str:
        data = {
            "schema_version": SCHEMA_VERSION,
            "p": self.p,
            "grid": self.grid,
            "columns": ["n", "residue", "exact", "predicted", "ratio"],
            "rows": list(self._records()),
            "non_increasing": {str(k): v for k, v in self.non_increasing().items()},
        }
        return json.dumps(data, indent=1)

    def render(self) -> str:
        lines = [f"p = {self.p}", f"{'n':>6} {'n mod p':>7} {'ratio':>18} {'|ratio-1|':>12}"]
        for r in self.rows:
            lines.append(f"{r.n:>6} {r.residue_class:>7} {mpmath.nstr(r.ratio, 12):>18} {r.deviation:>12.3e}")
        flags = self.non_increasing()
        lines.append("non-increasing |ratio-1|: " + ", ".join(f"class {k}: {v}" for k, v in flags.items()))
        return "\n".join(lines) + "\n"


def grid_points(p: int, grid: list[int]) -> list[tuple[int, int]]:
    """(k, n) with n the least integer >= g in class k, for each grid value g."""
    return [(k, g + (k - g) % p) for k in range(p) for g in grid]


def convergence_report(p: int, n_grid: list[int]) -> ConvergenceReport:
    """Exact c_n^(p) against predict(p, n) for each grid value, shifted into every residue class."""
    _check_level(p)
    if not n_grid or min(n_grid) < 1:
        raise ValueError("grid must be a nonempty list of positive integers")
    points = grid_points(p, sorted(n_grid))
    j = hauptmodul_series(Level(p, False), max(n for _, n in points) + 1)
    rep = ConvergenceReport(p, sorted(n_grid))
    with mp.workdps(WORKING_DPS):
        for k, n in points:
            pred = predict(p, n)
            rep.rows.append(ConvergenceRow(n, k, j[n], pred.predicted, mpf(j[n]) / pred.predicted))
    return rep
