"""
Exact truncated Laurent series in q, plus the construction kit used for
weight 0 and weight 2 forms: eta quotients, theta, E2, U_t / V_t and the
residue-class (sector) filters.

A QSeries knows its coefficients for exponents in [valuation, trunc).
Reading past trunc raises TruncationError; nothing is ever zero-extended.
Coefficients are Python ints or Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

import gmpy2


class TruncationError(IndexError):
    """Raised when a coefficient beyond the known window is requested."""


def _norm(x):
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        x = Fraction(x.numerator, x.denominator)
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"exact rational coefficient expected, got {type(x).__name__}")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------------------
# low level convolution
# ---------------------------------------------------------------------------

_SCHOOLBOOK = 24


def _pack(xs: Sequence[int], nbytes: int) -> int:
    pos = b"".join((x if x > 0 else 0).to_bytes(nbytes, "little") for x in xs)
    neg = b"".join((-x if x < 0 else 0).to_bytes(nbytes, "little") for x in xs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _int_convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First n coefficients of the product of two integer coefficient lists."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) <= _SCHOOLBOOK:
        out = [0] * n
        if len(a) > len(b):
            a, b = b, a
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), n - i)):
                    out[i + j] += x * b[j]
        return out
    # Kronecker substitution: pack into one big integer per operand.
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = _ceil_div(bits, 8)
    w = 8 * nbytes
    prod = int(gmpy2.mpz(_pack(a, nbytes)) * gmpy2.mpz(_pack(b, nbytes)))
    m = len(a) + len(b) - 1
    half = 1 << (w - 1)
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * m, "little")
    raw = (prod + bias).to_bytes(nbytes * m, "little")
    out = [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(min(m, n))
    ]
    out.extend([0] * (n - len(out)))
    return out


def _common_denominator(xs: Iterable) -> int:
    den = 1
    for x in xs:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    return den


def _convolve(a: Sequence, b: Sequence, n: int) -> list:
    da = _common_denominator(a)
    db = _common_denominator(b)
    if da == 1 and db == 1:
        return _int_convolve(a, b, n)
    ia = [int(x * da) for x in a]
    ib = [int(x * db) for x in b]
    den = da * db
    return [_norm(Fraction(x, den)) for x in _int_convolve(ia, ib, n)]


# ---------------------------------------------------------------------------
# QSeries
# ---------------------------------------------------------------------------


class QSeries:
    """Truncated Laurent series sum_{valuation <= n < trunc} a_n q^n.

    Immutable. Leading zero coefficients are stripped on construction, so
    ``valuation`` is the true order of the series (or ``trunc`` when every
    known coefficient vanishes).
    """

    __slots__ = ("valuation", "coeffs", "trunc")

    def __init__(self, coeffs: Iterable = (), valuation: int = 0, trunc: int | None = None):
        cs = [_norm(c) for c in coeffs]
        if trunc is None:
            trunc = valuation + len(cs)
        if len(cs) > trunc - valuation:
            raise ValueError("more coefficients than the truncation window allows")
        cs.extend([0] * (trunc - valuation - len(cs)))
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        object.__setattr__(self, "valuation", valuation + k)
        object.__setattr__(self, "coeffs", tuple(cs[k:]))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def monomial(cls, n: int, trunc: int, coeff=1) -> "QSeries":
        if n >= trunc:
            return cls((), trunc, trunc)
        return cls([coeff], n, trunc)

    @classmethod
    def from_dict(cls, terms: dict, trunc: int) -> "QSeries":
        if not terms:
            return cls((), trunc, trunc)
        lo = min(terms)
        cs = [0] * (trunc - lo)
        for k, v in terms.items():
            if k < trunc:
                cs[k - lo] = v
        return cls(cs, lo, trunc)

    # -- access -------------------------------------------------------------

    def __getitem__(self, n: int):
        if n >= self.trunc:
            raise TruncationError(f"coefficient of q^{n} unknown (series is O(q^{self.trunc}))")
        if n < self.valuation:
            return 0
        return self.coeffs[n - self.valuation]

    def coefficients(self, start: int, stop: int | None = None) -> list:
        """Coefficients for exponents start <= n < stop (stop defaults to trunc)."""
        if stop is None:
            stop = self.trunc
        return [self[n] for n in range(start, stop)]

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.valuation + i, c

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def principal_part(self) -> dict:
        return {n: c for n, c in self.items() if n < 0}

    # -- structural ---------------------------------------------------------

    def truncate(self, trunc: int) -> "QSeries":
        if trunc > self.trunc:
            raise TruncationError("cannot extend a truncated series")
        return QSeries(self.coeffs[: max(trunc - self.valuation, 0)], min(self.valuation, trunc), trunc)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        return QSeries(self.coeffs, self.valuation + k, self.trunc + k)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.valuation, self.coeffs, self.trunc) == (other.valuation, other.coeffs, other.trunc)

    def __hash__(self):
        return hash((self.valuation, self.coeffs, self.trunc))

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality of coefficients on the common known window."""
        t = min(self.trunc, other.trunc)
        lo = min(self.valuation, other.valuation, t)
        return all(self[n] == other[n] for n in range(lo, t))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            if self.trunc <= 0:
                raise TruncationError("constant term of operand is unknown")
            return QSeries([other], 0, self.trunc)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = min(self.trunc, other.trunc)
        lo = min(self.valuation, other.valuation, t)
        return QSeries([self[n] + other[n] for n in range(lo, t)], lo, t)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.valuation, self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, Rational):
            return QSeries([c * other for c in self.coeffs], self.valuation, self.trunc)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other.inverse())
        if isinstance(other, Rational):
            return self * _norm(1 / Fraction(other))
        return NotImplemented

    def inverse(self) -> "QSeries":
        """1/f, by Newton iteration on the unit part."""
        if self.is_zero():
            raise ZeroDivisionError("series has no known nonzero coefficient")
        v = self.valuation
        n = self.trunc - v  # relative precision
        inv_lead = _norm(1 / Fraction(self.coeffs[0]))
        unit = [_norm(c * inv_lead) for c in self.coeffs]
        g = [1]
        k = 1
        while k < n:
            k = min(2 * k, n)
            corr = [-x for x in _convolve(unit[:k], g, k)]
            corr[0] += 2
            g = _convolve(g, corr, k)
        return QSeries([c * inv_lead for c in g], -v, -v + n)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            rel = self.trunc - self.valuation
            return QSeries([1], 0, rel)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- display / serialisation -------------------------------------------

    def __repr__(self):
        terms = []
        for n, c in list(self.items())[:8]:
            if n == 0:
                terms.append(f"{c}")
            elif n == 1:
                terms.append(f"{c}*q")
            else:
                terms.append(f"{c}*q^{n}")
        terms.append(f"O(q^{self.trunc})")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation,
            "trunc": self.trunc,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        return cls([Fraction(c) for c in data["coeffs"]], data["valuation"], data["trunc"])


def mul(f: QSeries, g: QSeries) -> QSeries:
    """Exact Cauchy product, known up to min(trunc_f + val_g, trunc_g + val_f)."""
    # a zero series has valuation == trunc, so this covers O(q^T) * g too
    t = min(f.trunc + g.valuation, g.trunc + f.valuation)
    if f.is_zero() or g.is_zero():
        return QSeries((), t, t)
    val = f.valuation + g.valuation
    n = t - val
    return QSeries(_convolve(f.coeffs, g.coeffs, n), val, t)


# ---------------------------------------------------------------------------
# arithmetic functions
# ---------------------------------------------------------------------------


def sigma1(n: int) -> int:
    """Sum of the positive divisors of n."""
    if n < 1:
        raise ValueError("sigma1 needs n >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def sigma1_p(n: int, p: int) -> int:
    """Sum of the divisors of n that are not divisible by p."""
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            for e in {d, n // d}:
                if e % p:
                    total += e
        d += 1
    return total


@lru_cache(maxsize=None)
def sigma1_table(N: int) -> tuple[int, ...]:
    """sigma1(n) for 0 <= n < N (entry 0 is 0), by sieve."""
    s = [0] * N
    for d in range(1, N):
        for m in range(d, N, d):
            s[m] += d
    return tuple(s)


# ---------------------------------------------------------------------------
# eta products
# ---------------------------------------------------------------------------


def _pentagonal_terms(N: int) -> dict[int, int]:
    terms = {0: 1}
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= N:
            break
        sign = -1 if k % 2 else 1
        terms[e1] = sign
        e2 = k * (3 * k + 1) // 2
        if e2 < N:
            terms[e2] = sign
        k += 1
    return terms


def eta_series(N: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) up to O(q^N), from Euler's pentagonal theorem.

    The q^(1/24) factor of the eta function is not included.
    """
    if N < 1:
        raise ValueError("N must be positive")
    return QSeries.from_dict(_pentagonal_terms(N), N)


@lru_cache(maxsize=64)
def _euler_power(e: int, N: int) -> tuple[int, ...]:
    # (prod (1-q^n))^e mod q^N via the J.C.P. Miller recurrence; the base is
    # sparse, so this costs O(N^1.5) big-integer operations.
    f = sorted((k, c) for k, c in _pentagonal_terms(N).items() if k)
    g = [0] * N
    g[0] = 1
    for n in range(1, N):
        acc = 0
        for k, c in f:
            if k > n:
                break
            acc += ((e + 1) * k - n) * c * g[n - k]
        g[n] = acc // n
    return tuple(g)


def euler_power(e: int, N: int, t: int = 1) -> QSeries:
    """prod_{n>=1} (1 - q^{t n})^e up to O(q^N)."""
    M = _ceil_div(N, t)
    base = QSeries(_euler_power(e, M), 0, M)
    return V_t(base, t).truncate(N) if t > 1 else base


@dataclass(frozen=True)
class EtaQuotientSpec:
    """sum_i multiplier_i * prod_j eta(t_j tau)^(e_j)  +  constant.

    Each product term must have an integral q-power offset sum t*e/24.
    """

    terms: tuple[tuple[Fraction, tuple[tuple[int, int], ...]], ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        for _, factors in self.terms:
            for t, _e in factors:
                if t < 1:
                    raise ValueError("eta scale must be a positive integer")
            if sum(t * e for t, e in factors) % 24:
                raise ValueError(f"eta product {factors} has a non-integral q-power offset")

    @classmethod
    def single(cls, factors, constant=0, multiplier=1) -> "EtaQuotientSpec":
        return cls(((Fraction(multiplier), tuple(factors)),), Fraction(constant))

    def plus(self, factors, multiplier=1) -> "EtaQuotientSpec":
        return EtaQuotientSpec(self.terms + ((Fraction(multiplier), tuple(factors)),), self.constant)

    @staticmethod
    def offset(factors) -> int:
        return sum(t * e for t, e in factors) // 24


def eta_product(factors, N: int) -> QSeries:
    """prod_j (prod_n (1 - q^{t_j n}))^{e_j} up to O(q^N), without q-power offset."""
    result = None
    for t, e in factors:
        if e == 0:
            continue
        piece = euler_power(e, N, t)
        result = piece if result is None else result * piece
    return result if result is not None else QSeries([1], 0, N)


def eta_quotient(spec: EtaQuotientSpec, N: int) -> QSeries:
    """Expansion of an eta quotient expression up to O(q^N)."""
    if N < 1:
        raise ValueError("N must be positive")
    total = QSeries((), N, N) + spec.constant
    for mult, factors in spec.terms:
        off = EtaQuotientSpec.offset(factors)
        body = eta_product(factors, N - off)
        total = total + body.shift(off) * mult
    return total


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def U_t(f: QSeries, t: int) -> QSeries:
    """(sum a_n q^n) | U_t = sum a_{tn} q^n."""
    if t < 1:
        raise ValueError("t must be a positive integer")
    lo = _ceil_div(f.valuation, t)
    hi = _ceil_div(f.trunc, t)
    return QSeries([f[t * n] for n in range(lo, hi)], lo, hi)


def V_t(f: QSeries, t: int) -> QSeries:
    """tau -> t*tau: coefficient of q^{tn} is a_n, other coefficients vanish."""
    if t < 1:
        raise ValueError("t must be a positive integer")
    if t == 1:
        return f
    cs = [0] * (t * (f.trunc - f.valuation))
    cs[::t] = f.coeffs + (0,) * (f.trunc - f.valuation - len(f.coeffs))
    return QSeries(cs, t * f.valuation, t * f.trunc)


def sector_filter(f: QSeries, k: int, M: int) -> QSeries:
    """Keep the coefficients whose exponent is congruent to k mod M."""
    if M < 1 or not 0 <= k < M:
        raise ValueError("need M >= 1 and 0 <= k < M")
    lo = f.valuation
    return QSeries([c if (lo + i) % M == k else 0 for i, c in enumerate(f.coeffs)], lo, f.trunc)


def q_derivative(f: QSeries) -> QSeries:
    """(2 pi i)^{-1} d/dtau, i.e. a_n -> n a_n."""
    return QSeries([(f.valuation + i) * c for i, c in enumerate(f.coeffs)], f.valuation, f.trunc)


# ---------------------------------------------------------------------------
# theta and Eisenstein series
# ---------------------------------------------------------------------------


def theta0(N: int) -> QSeries:
    """sum_{n in Z} q^{n^2} up to O(q^N)."""
    terms = {0: 1}
    n = 1
    while n * n < N:
        terms[n * n] = 2
        n += 1
    return QSeries.from_dict(terms, N)


def eisenstein_E2(N: int) -> QSeries:
    """E2 = 1 - 24 sum sigma1(n) q^n up to O(q^N)."""
    s = sigma1_table(max(N, 1))
    return QSeries([1] + [-24 * s[n] for n in range(1, N)], 0, N)


def eisenstein_E2_p(p: int, N: int) -> QSeries:
    """(p E2(p tau) - E2(tau)) / (p - 1), the holomorphic weight 2 form on Gamma0(p)."""
    if p < 2:
        raise ValueError("no holomorphic weight 2 Eisenstein series at level 1")
    e2 = eisenstein_E2(N)
    return (V_t(e2, p).truncate(N) * p - e2) * Fraction(1, p - 1)
