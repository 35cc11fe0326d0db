"""
Coefficient formulas for j_p in terms of the starred traces t_2^(p*), the
star relation j_p* = j_p - p (j_p | U_p), and the weight 2 sector identities

    2 H~_0 = -G~_0,    2 H~_k = F~_k  (k != 0 mod p)

with H = j_p' - lambda_p E2^(p), F = (g_2^(p*) theta0) | U_4 and
G = (g_2^(p*) theta0(p^2 tau)) | U_4. Verification functions return a
VerificationReport rather than raising on mismatch.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import isqrt

from .hauptmodul import Level, hauptmodul_series
from .series import (
    QSeries,
    U_t,
    V_t,
    eisenstein_E2_p,
    q_derivative,
    sector_filter,
    sigma1,
    sigma1_p,
    theta0,
)
from .traces import SCHEMA_VERSION, g_series, trace_int

# constant multiplying sigma_1 in the coefficient formula, per level
SIGMA_CONSTANT = {2: 24, 3: 36, 5: 18}


@dataclass
class VerificationReport:
    kind: str
    p: int
    window: tuple[int, int]
    checked: int = 0
    mismatches: list[tuple[int, str, str]] = field(default_factory=list)
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    @property
    def first_mismatch(self):
        return self.mismatches[0] if self.mismatches else None

    def record(self, index: int, lhs, rhs):
        self.checked += 1
        if lhs != rhs:
            self.mismatches.append((index, str(lhs), str(rhs)))

    def summary(self) -> str:
        lo, hi = self.window
        status = "ok" if self.ok else "MISMATCH"
        line = f"{self.kind} p={self.p} range [{lo}, {hi}]: {status} ({self.checked} checks, {self.elapsed:.2f}s)"
        if not self.ok:
            i, a, b = self.first_mismatch
            line += f"; first mismatch at {i}: {a} != {b}"
        return line

    def to_json(self) -> str:
        data = asdict(self)
        data["schema_version"] = SCHEMA_VERSION
        data["ok"] = self.ok
        return json.dumps(data, indent=1)


# ---------------------------------------------------------------------------
# coefficient formulas
# ---------------------------------------------------------------------------


def _r_values(n4: int, p: int | None = None):
    # r with 4n - r^2 >= -4 (every other trace vanishes), optionally r = 0 mod p
    r_max = isqrt(n4 + 4)
    for r in range(-r_max, r_max + 1):
        if p is None or r % p == 0:
            yield r


def theorem1_numerator(p: int, n: int) -> int:
    """2n c_n^(p) expressed through t_2^(p*).

    n = 0 mod p:  -sum_{r = 0 (p)} t_2^(p*)(4n - r^2) + K_p sigma1^(p)(n)
    otherwise:     sum_{r in Z}    t_2^(p*)(4n - r^2) + K_p sigma1(n)
    For p = 1 this is Kaneko's formula: sum_{r in Z} t_2(4n - r^2).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if p == 1:
        return sum(trace_int(1, True, 2, 4 * n - r * r) for r in _r_values(4 * n))
    K = SIGMA_CONSTANT[p]
    if n % p == 0:
        s = sum(trace_int(p, True, 2, 4 * n - r * r) for r in _r_values(4 * n, p))
        return -s + K * sigma1_p(n, p)
    s = sum(trace_int(p, True, 2, 4 * n - r * r) for r in _r_values(4 * n))
    return s + K * sigma1(n)


def coefficient_via_traces(p: int, n: int) -> int:
    """c_n^(p) from the trace formula; raises if 2n does not divide the numerator."""
    num = theorem1_numerator(p, n)
    q, r = divmod(num, 2 * n)
    if r:
        raise ArithmeticError(f"numerator {num} at p={p}, n={n} is not divisible by {2 * n}")
    return q


def star_coefficient(p: int, n: int) -> int:
    """c_n^(p*) = c_n^(p) - p c_{pn}^(p)."""
    j = hauptmodul_series(Level(p, False), p * n + 1)
    return j[n] - p * j[p * n]


# ---------------------------------------------------------------------------
# weight 2 construction
# ---------------------------------------------------------------------------


def eisenstein_multiplier(p: int) -> Fraction:
    """lambda_p with H = j_p' - lambda_p E2^(p) having q^n coefficient
    n c_n - (K_p / 2) sigma1^(p)(n)."""
    return Fraction((p - 1) * SIGMA_CONSTANT[p], 48)


def build_H(p: int, N: int) -> QSeries:
    """j_p'(tau) - lambda_p E2^(p)(tau), known for exponents < N."""
    j = hauptmodul_series(Level(p, False), N)
    return q_derivative(j) - eisenstein_E2_p(p, N) * eisenstein_multiplier(p)


def build_F_G(p: int, N: int) -> tuple[QSeries, QSeries]:
    """F = (g_2^(p*) theta0) | U_4 and G = (g_2^(p*) theta0(p^2 tau)) | U_4 up to O(q^N)."""
    g = g_series(p, 2, 4 * N)
    th = theta0(4 * N + 4)
    th_p = V_t(theta0(-(-(4 * N + 4) // (p * p))), p * p).truncate(4 * N + 4)
    return U_t(g * th, 4), U_t(g * th_p, 4)


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def verify_theorem1(p: int, n_max: int, n_min: int = 1) -> VerificationReport:
    """Compare the trace formula with the eta-quotient coefficient for n_min <= n <= n_max."""
    t0 = time.perf_counter()
    rep = VerificationReport("theorem1", p, (n_min, n_max))
    j = hauptmodul_series(Level(p, p == 1), n_max + 1)
    indivisible = []
    for n in range(n_min, n_max + 1):
        num = theorem1_numerator(p, n)
        if num % (2 * n):
            indivisible.append(n)
            rep.record(n, Fraction(num, 2 * n), j[n])
        else:
            rep.record(n, num // (2 * n), j[n])
    rep.details["indivisible"] = indivisible
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_star_relation(p: int, N: int) -> VerificationReport:
    """j_p* = j_p - p (j_p | U_p) coefficientwise for exponents < N."""
    t0 = time.perf_counter()
    rep = VerificationReport("star", p, (-1, N - 1))
    js = hauptmodul_series(Level(p, True), N)
    j = hauptmodul_series(Level(p, False), p * N)
    rhs = j.truncate(N) - U_t(j, p) * p
    for n in range(-1, N):
        rep.record(n, js[n], rhs[n])
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_weight2_sectors(p: int, N: int) -> VerificationReport:
    """Check 2 H~_0 = -G~_0 and 2 H~_k = F~_k (k != 0) for exponents in [-1, N)."""
    t0 = time.perf_counter()
    rep = VerificationReport("sectors", p, (-1, N - 1))
    H = build_H(p, N)
    F, G = build_F_G(p, N)
    rep.details["principal_F"] = {str(k): str(v) for k, v in F.principal_part().items()}
    rep.details["principal_G"] = {str(k): str(v) for k, v in G.principal_part().items()}
    for k in range(p):
        lhs = sector_filter(H, k, p) * 2
        rhs = -sector_filter(G, 0, p) if k == 0 else sector_filter(F, k, p)
        for n in range(-1, N):
            if n % p == k:
                rep.record(n, lhs[n], rhs[n])
    rep.elapsed = time.perf_counter() - t0
    return rep


def full_sturm_window(p: int) -> int:
    """Coefficient window for the complete check; 3960 is the stated bound for p = 3."""
    return 3960
