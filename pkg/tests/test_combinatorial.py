import math
from fractions import Fraction

import mpmath
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings, strategies as st

from convex_holder.combinatorial_bounds import (
    BRUTE_FORCE_MAX_N,
    binomial_bound_exponents,
    binomial_moment_bound,
    binomial_moment_bound_exact,
    binomial_moment_brute,
    binomial_moment_exact,
    binomial_sequence,
    stirling2,
)
from convex_holder.numerics import real


def mp_brute(N, s):
    with mpmath.workdps(60):
        return mpmath.fsum(math.comb(N, k) * mpmath.mpf(k) ** s for k in range(1, N + 1))


class TestStirling:
    def test_small_row(self):
        assert [stirling2(4, j) for j in range(5)] == [0, 1, 7, 6, 1]

    def test_bell_number(self):
        assert sum(stirling2(10, j) for j in range(11)) == 115975

    def test_out_of_range(self):
        assert stirling2(3, 5) == 0
        with pytest.raises(ValueError):
            stirling2(-1, 0)


class TestExactMoments:
    @pytest.mark.parametrize("N", [1, 2, 7, 30])
    @pytest.mark.parametrize("s", [0, 1, 2, 3, 5])
    def test_against_direct_sum(self, N, s):
        direct = sum(math.comb(N, k) * k**s for k in range(N + 1))
        assert binomial_moment_exact(N, s) == direct

    def test_closed_forms(self):
        N = 50
        assert binomial_moment_exact(N, 1) == N * 2 ** (N - 1)
        assert binomial_moment_exact(N, 2) == N * (N + 1) * 2 ** (N - 2)


class TestBound:
    def test_exponents(self):
        assert binomial_bound_exponents(10, "1.5") == ((10, Fraction(1, 2)), (110, Fraction(1, 2)), (2, Fraction(17, 2)))

    @pytest.mark.parametrize("N", [1, 2, 10, 200])
    def test_endpoints_are_equalities(self, N):
        for s in (1, 2):
            assert binomial_moment_bound_exact(N, s) == binomial_moment_exact(N, s)
            assert binomial_moment_bound(N, s) == binomial_moment_exact(N, s)

    @pytest.mark.parametrize(
        "N, s, moment, bound",
        [
            (10, "1.5", "11886.907881699482", "12007.46434514798"),
            (20, "1.25", "18794821.85008199", "18875446.68941718"),
        ],
    )
    def test_frozen_values(self, N, s, moment, bound):
        assert abs(binomial_moment_brute(N, s) / real(moment) - 1) <= 1e-15
        assert abs(binomial_moment_bound(N, s) / real(bound) - 1) <= 1e-15

    @pytest.mark.parametrize("N, s", [(10, "1.5"), (37, "1.9"), (200, "1.1")])
    def test_brute_matches_mpmath(self, N, s):
        with mpmath.workdps(60):
            truth = mp_brute(N, mpmath.mpf(s))
            got = mpmath.mpf(str(binomial_moment_brute(N, s)))
            assert abs(got - truth) <= truth * mpmath.mpf(10) ** -55

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 120), st.fractions(min_value=1, max_value=2, max_denominator=40))
    def test_bound_holds(self, N, s):
        assert binomial_moment_brute(N, s) <= binomial_moment_bound(N, s) * (1 + mpfr(2) ** -120)

    def test_sequence_weights(self):
        f = binomial_sequence(5)
        assert f.values == (0, 1, 2, 3, 4, 5)
        assert f.weights == (1, 5, 10, 10, 5, 1)

    @pytest.mark.parametrize("s", ["0.99", "2.01", 3])
    def test_s_range(self, s):
        with pytest.raises(ValueError):
            binomial_moment_bound(5, s)

    def test_limits(self):
        with pytest.raises(ValueError):
            binomial_moment_brute(BRUTE_FORCE_MAX_N + 1, 1)
        with pytest.raises(ValueError):
            binomial_moment_bound(0, 1)
        with pytest.raises(ValueError):
            binomial_moment_bound_exact(5, Fraction(3, 2))
