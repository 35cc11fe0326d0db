from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hauptraces.series import (
    EtaQuotientSpec,
    QSeries,
    TruncationError,
    U_t,
    V_t,
    eisenstein_E2,
    eisenstein_E2_p,
    eta_product,
    eta_quotient,
    eta_series,
    euler_power,
    mul,
    q_derivative,
    sector_filter,
    sigma1,
    sigma1_p,
    theta0,
)


# --- naive oracles ---------------------------------------------------------


def naive_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def naive_euler(N, t=1):
    """prod_{n >= 1} (1 - q^{tn}) by multiplying out one factor at a time."""
    poly = [1] + [0] * (N - 1)
    for n in range(1, N):
        step = t * n
        if step >= N:
            break
        poly = [poly[i] - (poly[i - step] if i >= step else 0) for i in range(N)]
    return poly


def naive_power(poly, e, N):
    out = [1] + [0] * (N - 1)
    if e >= 0:
        for _ in range(e):
            out = naive_mul(out, poly, N)
        return out
    # 1/poly by long division, valid since poly[0] = 1
    inv = [0] * N
    inv[0] = 1
    for i in range(1, N):
        inv[i] = -sum(poly[k] * inv[i - k] for k in range(1, i + 1))
    for _ in range(-e):
        out = naive_mul(out, inv, N)
    return out


def brute_sigma(n):
    return sum(k for k in range(1, n + 1) if n % k == 0)


small_ints = st.integers(-50, 50)
coeff_lists = st.lists(small_ints, min_size=0, max_size=40)


def series_strategy(max_val=3):
    return st.builds(
        lambda cs, v, extra: QSeries(cs, v, v + len(cs) + extra),
        coeff_lists,
        st.integers(-max_val, max_val),
        st.integers(0, 5),
    )


# --- QSeries basics -----------------------------------------------------------


class TestQSeriesBasics:
    def test_leading_zeros_are_stripped(self):
        f = QSeries([0, 0, 3, 4], valuation=-1, trunc=10)
        assert f.valuation == 1
        assert f[1] == 3 and f[2] == 4 and f[0] == 0

    def test_reading_beyond_trunc_raises(self):
        f = QSeries([1, 2, 3], 0, 3)
        with pytest.raises(TruncationError):
            f[3]

    def test_addition_trunc_is_minimum(self):
        f = QSeries([1, 1], 0, 5)
        g = QSeries([1], 0, 8)
        assert (f + g).trunc == 5

    def test_product_trunc_bookkeeping(self):
        f = QSeries([1, 2], -1, 4)  # val -1, trunc 4
        g = QSeries([3], 2, 6)  # val 2, trunc 6
        h = f * g
        assert h.trunc == min(4 + 2, 6 - 1)
        assert h[1] == 3 and h[2] == 6

    def test_fraction_coefficients_stay_exact(self):
        f = QSeries([Fraction(1, 3), Fraction(2, 3)], 0, 4)
        g = f * 3
        assert g.is_integral()
        assert g[0] == 1 and g[1] == 2

    def test_json_roundtrip(self):
        f = QSeries([1, -2, Fraction(5, 7)], -1, 9)
        data = json.loads(json.dumps(f.to_json()))
        assert QSeries.from_json(data) == f

    def test_principal_part(self):
        f = QSeries([2, 0, 5, 1], -3, 5)
        assert f.principal_part() == {-3: 2, -1: 5}

    def test_zero_times_series(self):
        # O(q^3) * (q^-2 + O(q^5)) = O(q^1)
        h = mul(QSeries([], 3, 3), QSeries([1], -2, 5))
        assert h.is_zero() and h.trunc == 1

    def test_negative_valuation_window(self):
        h = mul(QSeries([1], 10, 11), QSeries([1, 1], -20, -18))
        assert (h.valuation, h.trunc) == (-10, -9)


class TestRingLaws:
    @settings(max_examples=60, deadline=None)
    @given(series_strategy(), series_strategy(), series_strategy())
    def test_associative(self, f, g, h):
        assert ((f * g) * h).agrees_with(f * (g * h))

    @settings(max_examples=60, deadline=None)
    @given(series_strategy(), series_strategy(), series_strategy())
    def test_distributive(self, f, g, h):
        assert (f * (g + h)).agrees_with(f * g + f * h)

    @settings(max_examples=60, deadline=None)
    @given(series_strategy(), series_strategy())
    def test_commutative(self, f, g):
        assert (f * g).agrees_with(g * f)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(small_ints, min_size=1, max_size=60), st.lists(small_ints, min_size=1, max_size=60))
    def test_product_matches_schoolbook(self, a, b):
        n = min(len(a), len(b))
        h = QSeries(a[:n], 0, n) * QSeries(b[:n], 0, n)
        assert h.coefficients(0, n) == naive_mul(a, b, n)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(small_ints, min_size=2, max_size=40), st.integers(-4, 4))
    def test_inverse(self, cs, v):
        cs[0] = cs[0] or 1
        f = QSeries(cs, v, v + len(cs))
        one = f * f.inverse()
        assert one[0] == 1
        assert all(one[n] == 0 for n in range(1, one.trunc))

    def test_kronecker_with_large_mixed_sign_coefficients(self):
        a = [(-1) ** i * (10 ** 40 + i) for i in range(200)]
        b = [(-1) ** (i // 3) * (7 ** i) for i in range(200)]
        h = QSeries(a, 0, 200) * QSeries(b, 0, 200)
        assert h.coefficients(0, 200) == naive_mul(a, b, 200)


# --- arithmetic functions ---------------------------------------------------


class TestDivisorSums:
    def test_sigma1_against_brute_force(self):
        assert [sigma1(n) for n in range(1, 300)] == [brute_sigma(n) for n in range(1, 300)]

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_sigma1_p(self, p):
        for n in range(1, 200):
            expected = brute_sigma(n) - (p * brute_sigma(n // p) if n % p == 0 else 0)
            assert sigma1_p(n, p) == expected


# --- eta products -------------------------------------------------------------


class TestEta:
    def test_euler_product_against_expansion(self):
        N = 300
        assert eta_series(N).coefficients(0, N) == naive_euler(N)

    def test_pentagonal_sparsity(self):
        E = eta_series(40)
        assert [n for n in range(40) if E[n]] == [0, 1, 2, 5, 7, 12, 15, 22, 26, 35]

    @pytest.mark.parametrize("e", [-24, -16, -12, -8, -6, -1, 1, 6, 8, 12, 24])
    def test_powers_match_naive(self, e):
        N = 60
        assert euler_power(e, N).coefficients(0, N) == naive_power(naive_euler(N), e, N)

    @pytest.mark.parametrize("t", [2, 3, 5])
    def test_scaled_powers(self, t):
        N = 80
        assert euler_power(-6, N, t).coefficients(0, N) == naive_power(naive_euler(N, t), -6, N)

    def test_ramanujan_tau(self):
        # Delta = q prod (1 - q^n)^24
        body = eta_product([(1, 24)], 12)
        assert body.shift(1).coefficients(1, 8) == [1, -24, 252, -1472, 4830, -6048, -16744]

    def test_eta_quotient_integrality(self):
        spec = EtaQuotientSpec.single([(1, 24), (2, -24)], constant=24)
        f = eta_quotient(spec, 500)
        assert f.is_integral()
        assert f.valuation == -1

    def test_nonintegral_offset_is_rejected(self):
        with pytest.raises(ValueError):
            EtaQuotientSpec.single([(1, 1)])


# --- operators ---------------------------------------------------------------


class TestOperators:
    @settings(max_examples=40, deadline=None)
    @given(series_strategy(), st.integers(1, 6))
    def test_U_undoes_V(self, f, t):
        assert U_t(V_t(f, t), t) == f

    @settings(max_examples=40, deadline=None)
    @given(series_strategy(), st.integers(1, 6))
    def test_sectors_partition(self, f, M):
        total = sector_filter(f, 0, M)
        for k in range(1, M):
            total = total + sector_filter(f, k, M)
        assert total == f

    def test_q_derivative(self):
        f = QSeries([1, 0, 3, 4], -1, 5)
        g = q_derivative(f)
        assert g[-1] == -1 and g[1] == 3 and g[2] == 8 and g[0] == 0

    def test_theta_squared_counts_sums_of_two_squares(self):
        N = 200
        th2 = theta0(N) * theta0(N)
        for n in range(N):
            count = sum(1 for x in range(-15, 16) for y in range(-15, 16) if x * x + y * y == n)
            assert th2[n] == count

    def test_E2(self):
        E = eisenstein_E2(50)
        assert E[0] == 1
        assert all(E[n] == -24 * brute_sigma(n) for n in range(1, 50))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_E2_p_coefficients(self, p):
        E = eisenstein_E2_p(p, 100)
        assert E[0] == 1
        for n in range(1, 100):
            s = brute_sigma(n) - (p * brute_sigma(n // p) if n % p == 0 else 0)
            assert E[n] == Fraction(24, p - 1) * s
