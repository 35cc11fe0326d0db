from __future__ import annotations

import json
from fractions import Fraction

import pytest

from hauptraces import identities
from hauptraces.hauptmodul import Level, hauptmodul_series
from hauptraces.identities import (
    VerificationReport,
    build_F_G,
    build_H,
    coefficient_via_traces,
    eisenstein_multiplier,
    full_sturm_window,
    star_coefficient,
    theorem1_numerator,
    verify_star_relation,
    verify_theorem1,
    verify_weight2_sectors,
)

LEVELS = (2, 3, 5)


class TestCoefficientFormula:
    def test_first_coefficient_level_3(self):
        assert theorem1_numerator(3, 1) == 108
        assert coefficient_via_traces(3, 1) == 54

    @pytest.mark.parametrize("p", LEVELS)
    def test_both_branches(self, p):
        rep = verify_theorem1(p, 60)
        assert rep.ok, rep.summary()
        assert rep.details["indivisible"] == []
        assert rep.checked == 60

    def test_level_one_kaneko(self):
        rep = verify_theorem1(1, 40)
        assert rep.ok, rep.summary()

    def test_sensitive_to_the_sigma_constant(self, monkeypatch):
        monkeypatch.setitem(identities.SIGMA_CONSTANT, 3, 35)
        rep = verify_theorem1(3, 5)
        assert not rep.ok
        assert "mismatch" in rep.summary().lower()

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            theorem1_numerator(3, 0)


class TestStarRelation:
    @pytest.mark.parametrize("p", LEVELS)
    def test_window(self, p):
        rep = verify_star_relation(p, 400)
        assert rep.ok and rep.checked == 401

    @pytest.mark.parametrize("p", LEVELS)
    def test_pointwise(self, p):
        js = hauptmodul_series(Level(p, True), 60)
        assert all(star_coefficient(p, n) == js[n] for n in range(1, 60))


class TestWeightTwo:
    @pytest.mark.parametrize("p,lam", [(2, Fraction(1, 2)), (3, Fraction(3, 2)), (5, Fraction(3, 2))])
    def test_eisenstein_multiplier(self, p, lam):
        assert eisenstein_multiplier(p) == lam

    @pytest.mark.parametrize("p", LEVELS)
    def test_H_coefficients(self, p):
        # n c_n - (K_p / 2) sigma1^(p)(n), with constant term -lambda_p
        H = build_H(p, 40)
        j = hauptmodul_series(Level(p, False), 40)
        from hauptraces.series import sigma1_p

        K = identities.SIGMA_CONSTANT[p]
        assert H[-1] == -1
        assert H[0] == -eisenstein_multiplier(p)
        for n in range(1, 40):
            assert H[n] == n * j[n] - Fraction(K, 2) * sigma1_p(n, p)

    @pytest.mark.parametrize("p", LEVELS)
    def test_sector_identities(self, p):
        rep = verify_weight2_sectors(p, 200)
        assert rep.ok, rep.summary()
        assert rep.details["principal_F"] == {"-1": "-2"}
        assert rep.details["principal_G"] == {"-1": "-2"}

    def test_F_G_are_integral(self):
        F, G = build_F_G(3, 50)
        assert F.is_integral() and G.is_integral()

    def test_full_window(self):
        assert full_sturm_window(3) == 3960


class TestReport:
    def test_mismatch_bookkeeping(self):
        rep = VerificationReport("demo", 3, (1, 3))
        rep.record(1, 5, 5)
        rep.record(2, 6, 7)
        assert not rep.ok
        assert rep.first_mismatch == (2, "6", "7")
        assert "first mismatch at 2" in rep.summary()
        data = json.loads(rep.to_json())
        assert data["schema_version"] == 1 and data["ok"] is False
