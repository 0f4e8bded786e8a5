import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdsh.coverage import (
    Coverage,
    b_of_r,
    b_of_r_exact,
    correlation,
    coverage_rate_bound,
    empirical_correlation,
    greedy_cover,
    verify_cover,
)
from kdsh.errors import CapacityError, ParameterError
from kdsh.instance import ProblemParams
from kdsh.tensor import binom


class TestBOfR:
    def test_vandermonde_exact(self):
        # B(0) = C(p, k) exactly, integer mode
        for p in range(2, 31):
            for k in range(1, min(p, 8) + 1):
                assert b_of_r_exact(p, k, 0) == binom(p, k)

    def test_reference_values(self):
        assert b_of_r_exact(10, 3, 0) == 120  # 35 + 63 + 21 + 1
        assert b_of_r_exact(10, 3, 2) == 22  # C(3,2) C(7,1) + 1
        assert b_of_r_exact(10, 3, 3) == 1

    def test_log_matches_exact(self):
        for p, k in [(10, 3), (20, 6), (30, 10)]:
            for r in range(k + 1):
                assert b_of_r(p, k, r) == pytest.approx(
                    math.log(b_of_r_exact(p, k, r)), rel=1e-12
                )

    def test_monotone_nonincreasing_in_r(self):
        vals = [b_of_r(15, 5, r) for r in range(6)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_validation(self):
        with pytest.raises(ParameterError):
            b_of_r(10, 3, 4)
        with pytest.raises(ParameterError):
            b_of_r(10, 3, -1)


class TestGreedyCover:
    def test_r0_single_member(self):
        cov = greedy_cover(8, 3, 0)
        assert cov.cardinality == 1

    def test_rk_full_enumeration(self):
        cov = greedy_cover(6, 3, 3)
        assert cov.cardinality == binom(6, 3) == 20
        assert verify_cover(cov, 6, 3)

    def test_example_grid_point(self):
        cov = greedy_cover(8, 3, 2)
        assert verify_cover(cov, 8, 3)
        assert cov.cardinality >= math.ceil(binom(8, 3) / b_of_r_exact(8, 3, 2))

    def test_exhaustive_grid(self):
        # Def-4 conditions and the cardinality bound over the whole small grid
        for k in range(1, 6):
            for p in range(k + 1, 13):
                for r in range(k + 1):
                    cov = greedy_cover(p, k, r)
                    assert verify_cover(cov, p, k), (p, k, r)
                    lower = math.ceil(binom(p, k) / b_of_r_exact(p, k, r))
                    assert cov.cardinality >= lower, (p, k, r)

    def test_deterministic(self):
        a = greedy_cover(10, 4, 2)
        b = greedy_cover(10, 4, 2)
        assert np.array_equal(a.members, b.members)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            greedy_cover(40, 15, 3)

    def test_verify_rejects_bad_cover(self):
        # a cover missing most members must fail condition (ii) for r >= 1
        cov = greedy_cover(8, 3, 2)
        broken = Coverage(2, cov.members[:1])
        assert not verify_cover(broken, 8, 3)


class TestCorrelation:
    def test_below_d_zero(self):
        assert correlation(10, 3, 2) == 0.0

    def test_full_overlap_one(self):
        assert correlation(10, 3, 10) == 1.0

    def test_reference_value(self):
        assert correlation(10, 3, 5) == pytest.approx(10 / 120, rel=1e-12)

    def test_monotone_in_r(self):
        vals = [correlation(12, 4, r) for r in range(13)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    @given(st.integers(2, 30), st.integers(2, 6))
    @settings(max_examples=60, deadline=None)
    def test_bound_from_ratio(self, k, d):
        # correlation <= (r/k)^d / (1 - d^2/k) whenever d^2 < k
        if d > k or d * d >= k:
            return
        for r in range(d, k + 1):
            assert correlation(k, d, r) <= (r / k) ** d / (1 - d * d / k) + 1e-12


class TestEmpiricalCorrelation:
    def test_identical_solutions(self):
        pr = ProblemParams.with_beta(12, 4, 2, 1.0, seed=5)
        rho = empirical_correlation(pr, r=4, samples=500)
        assert rho == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_edges_near_zero(self):
        pr = ProblemParams.with_beta(20, 6, 3, 1.0, seed=5)
        rho = empirical_correlation(pr, r=2, samples=10**5)
        assert abs(rho) < 0.02

    def test_closed_form_agreement(self):
        pr = ProblemParams.with_beta(20, 6, 3, 1.0, seed=9)
        rho = empirical_correlation(pr, r=4, samples=10**5)
        assert rho == pytest.approx(binom(4, 3) / binom(6, 3), abs=0.02)

    def test_infeasible_r(self):
        pr = ProblemParams.with_beta(6, 4, 2, 1.0)
        with pytest.raises(ParameterError):
            empirical_correlation(pr, r=1, samples=100)  # 2k - r = 7 > p


class TestCoverageRateBound:
    def test_r0_is_zero(self):
        assert coverage_rate_bound(10, 3, 0).exact == pytest.approx(0.0, abs=1e-12)

    def test_rk_full_rate(self):
        got = coverage_rate_bound(10, 3, 3).exact
        assert got == pytest.approx(math.log(binom(10, 3)) / math.log(10), rel=1e-12)

    def test_monotone_in_r(self):
        vals = [coverage_rate_bound(12, 4, r).exact for r in range(5)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_asymptotic_proxy(self):
        b = coverage_rate_bound(10**4, 100, 30)
        assert b.asymptotic == pytest.approx(30 * 0.5)
        assert b.exact >= 0.0
