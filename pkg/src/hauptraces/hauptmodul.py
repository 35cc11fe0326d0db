"""
Hauptmoduln j_p, j_p* for p = 2, 3, 5 and j - 744 at level 1: exact
q-expansions, Faber polynomials, and certified evaluation at CM points.

Numerics use arb/acb ball arithmetic from python-flint, so every value
carries a rigorous error radius. The eta products are summed with the
pentagonal-number series; the neglected tail is added to the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from flint import acb, arb, ctx

from .forms import QuadForm
from .series import EtaQuotientSpec, QSeries, eta_product, eta_quotient

SUPPORTED_LEVELS = (1, 2, 3, 5)


class PrecisionError(RuntimeError):
    """The requested accuracy could not be reached under the precision ceiling."""


@dataclass(frozen=True)
class Level:
    p: int
    starred: bool = True

    def __post_init__(self):
        if self.p not in SUPPORTED_LEVELS:
            raise ValueError(f"unsupported level {self.p}; expected one of {SUPPORTED_LEVELS}")
        if self.p == 1 and not self.starred:
            # j_1* = j - 744 is the only level 1 function
            object.__setattr__(self, "starred", True)

    @property
    def eta_exponent(self) -> int:
        """k = 24/(p-1), so that (eta(tau)/eta(p tau))^k = q^{-1} + O(1)."""
        return 24 // (self.p - 1)

    def __str__(self):
        return f"{self.p}{'*' if self.starred else ''}"


@dataclass(frozen=True)
class PrecisionBudget:
    working_bits: int = 128
    ceiling_bits: int = 1 << 14
    error_bound: float | None = None

    def __post_init__(self):
        if self.error_bound is not None and self.error_bound >= 0.25:
            raise PrecisionError(f"error bound {self.error_bound} too large for integer rounding")


# ---------------------------------------------------------------------------
# exact expansions
# ---------------------------------------------------------------------------


def eta_spec(level: Level) -> EtaQuotientSpec:
    """Eta quotient description of j_p or j_p* (p > 1)."""
    p, k = level.p, level.eta_exponent
    spec = EtaQuotientSpec.single([(1, k), (p, -k)], constant=k)
    if level.starred:
        spec = spec.plus([(p, k), (1, -k)], multiplier=p ** (k // 2))
    return spec


def _level_one_series(N: int) -> QSeries:
    # {(eta/eta2)^8 + 2^8 (eta2/eta)^16}^3 - 744: the inner sum is
    # q^{-1/3} (A + 256 q B), so its cube is q^{-1} (A + 256 q B)^3.
    M = N + 1
    A = eta_product([(1, 8), (2, -8)], M)
    B = eta_product([(2, 16), (1, -16)], M)
    inner = A + (B * 256).shift(1).truncate(M)
    return (inner ** 3).shift(-1) - 744


@lru_cache(maxsize=32)
def hauptmodul_series(level: Level, N: int) -> QSeries:
    """q^{-1} + sum_{n >= 1} c_n q^n, known for exponents < N."""
    if level.p == 1:
        return _level_one_series(N)
    return eta_quotient(eta_spec(level), N)


# ---------------------------------------------------------------------------
# Faber polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaberPoly:
    level: Level
    m: int
    coeffs: tuple[int, ...]  # coeffs[i] multiplies J^i
    series: QSeries

    def __call__(self, J):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * J + c
        return acc

    def __str__(self):
        terms = []
        for i in range(self.m, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("J" if i == 1 else f"J^{i}")
            if mono and c in (1, -1):
                terms.append(("-" if c < 0 else "+") + mono)
            else:
                terms.append(f"{c:+d}" + mono)
        return " ".join(terms).lstrip("+")


@lru_cache(maxsize=None)
def _faber_table(level: Level, m_max: int, extra: int):
    J = hauptmodul_series(level, m_max + extra + 1)
    polys = [(1,)]
    series = [QSeries([1], 0, J.trunc)]
    power = QSeries([1], 0, J.trunc + m_max)
    for m in range(1, m_max + 1):
        power = power * J
        S = power
        poly = [0] * m + [1]
        for k in range(m - 1, -1, -1):
            c = S[-k]
            if c:
                S = S - series[k].truncate(S.trunc) * c
                for i, a in enumerate(polys[k]):
                    poly[i] -= c * a
        polys.append(tuple(poly))
        series.append(S)
    return polys, series


def faber(level: Level, m: int, extra: int = 8) -> FaberPoly:
    """The monic polynomial phi_m with phi_m(J) = q^{-m} + O(q), by greedy
    elimination of the q^{-m+1}, ..., q^0 terms of J^m."""
    if m < 1:
        raise ValueError("m must be positive")
    polys, series = _faber_table(level, m, extra)
    S = series[m]
    if S[-m] != 1 or any(S[n] for n in range(-m + 1, 1)):
        raise ArithmeticError(f"Faber elimination failed for level {level}, m = {m}")
    return FaberPoly(level, m, polys[m], S)


# ---------------------------------------------------------------------------
# ball-arithmetic evaluation
# ---------------------------------------------------------------------------


def cm_tau(Q: QuadForm) -> acb:
    """alpha_Q = (-b + i sqrt(d)) / (2a) at the current working precision."""
    return acb(arb(-Q.b), arb(Q.d).sqrt()) / (2 * Q.a)


def euler_product_ball(q: acb) -> acb:
    """prod_{n>=1} (1 - q^n) for |q| < 1, pentagonal series plus tail bound."""
    r = abs(q).upper()
    r_f = float(r.mid()) + float(r.rad())
    if not r_f < 1:
        raise PrecisionError("|q| is not certifiably below 1")
    target = -(ctx.prec + 16) * math.log(2)
    log_r = math.log(r_f)
    total = acb(1)
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 * log_r < target:
            break
        e2 = k * (3 * k + 1) // 2
        term = q ** e1 + q ** e2
        total = total - term if k % 2 else total + term
        k += 1
    # every omitted exponent is >= e1
    tail = r ** e1 / (1 - r)
    err = arb(0, tail.upper())
    return total + acb(err, err)


def _tau_ball(tau) -> acb:
    if isinstance(tau, QuadForm):
        return cm_tau(tau)
    if isinstance(tau, tuple):
        num, d, den = tau
        return acb(arb(num), arb(d).sqrt()) / den
    return acb(tau)


def eval_eta(tau, prec: int = 128) -> acb:
    """Dedekind eta(tau) = q^{1/24} prod (1 - q^n) as a certified ball.

    tau may be an acb, a QuadForm (its CM point) or a triple (num, d, den)
    meaning (num + i sqrt(d)) / den.
    """
    with ctx.workprec(prec):
        t = _tau_ball(tau)
        if not t.imag > 0:
            raise ValueError("tau must lie in the upper half plane")
        two_pi_i = 2 * acb.pi() * acb(0, 1)
        q = (two_pi_i * t).exp()
        return (two_pi_i * t / 24).exp() * euler_product_ball(q)


def _hauptmodul_ball(level: Level, t: acb) -> acb:
    two_pi_i = 2 * acb.pi() * acb(0, 1)
    q = (two_pi_i * t).exp()
    p = level.p
    if p == 1:
        P1 = euler_product_ball(q)
        P2 = euler_product_ball(q * q)
        x = P1 / P2
        x8 = x ** 8
        inner = x8 + 256 * q / (x8 * x8)
        return inner ** 3 / q - 744
    k = level.eta_exponent
    P1 = euler_product_ball(q)
    Pp = euler_product_ball(q ** p)
    A = (P1 / Pp) ** k / q
    val = A + k
    if level.starred:
        val = val + p ** (k // 2) / A
    return val


def eval_hauptmodul(level: Level, tau, prec: int = 128) -> acb:
    """j_p(tau) or j_p*(tau) as a certified ball at the given working precision."""
    with ctx.workprec(prec):
        return _hauptmodul_ball(level, _tau_ball(tau))


def initial_bits(p: int, m: int, d: int) -> int:
    """Working precision sized for magnitudes up to exp(pi m sqrt(d) / p)."""
    return math.ceil(math.pi * m * math.sqrt(max(d, 1)) / (p * math.log(2))) + 64


def eval_hauptmodul_star(level: Level, Q: QuadForm, budget: PrecisionBudget | None = None,
                         tol: float = 2.0 ** -30) -> tuple[acb, int]:
    """j_p*(alpha_Q), escalating precision until the ball radius is below tol.

    Returns the ball and the working precision that achieved it.
    """
    if level.p > 1 and Q.a % level.p:
        raise ValueError(f"{Q} is not in Q_(d,{level.p})")
    star = Level(level.p, True)
    bits = budget.working_bits if budget else initial_bits(level.p, 1, Q.d)
    ceiling = budget.ceiling_bits if budget else 1 << 14
    while bits <= ceiling:
        val = eval_hauptmodul(star, Q, bits)
        if max(float(val.real.rad()), float(val.imag.rad())) < tol:
            return val, bits
        bits *= 2
    raise PrecisionError(f"could not evaluate j_{star}({Q}) to {tol} within {ceiling} bits")
