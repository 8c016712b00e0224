import math
from fractions import Fraction

import mpmath
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings, strategies as st

from convex_holder.norm_core import (
    INF,
    BoundReport,
    WeightedSequence,
    as_exponent,
    bound_from_norms,
    conjugate,
    convex_holder_bound,
    holder_check,
    interpolation_exponents,
    p_norm,
    power_sums,
    verification_tolerance,
)
from convex_holder.numerics import working_precision

ZETA2_NORM2 = mpmath.mpf("1.0403476504088132")  # ||{1/n^2}||_2 = pi^2/sqrt(90)


def close(x, y, rel):
    return abs(float(x) - float(y)) <= rel * abs(float(y))


# ---------------------------------------------------------------- exponents


class TestExponents:
    @pytest.mark.parametrize(
        "raw, expected",
        [("5/4", Fraction(5, 4)), ("1.25", Fraction(5, 4)), (1.1, Fraction(11, 10)), (3, Fraction(3)), ("inf", INF), ("∞", INF), (math.inf, INF)],
    )
    def test_parsing(self, raw, expected):
        assert as_exponent(raw) == expected

    @pytest.mark.parametrize("bad", [0, "0.5", Fraction(1, 2), -1, "-inf"])
    def test_below_one_rejected(self, bad):
        with pytest.raises(ValueError):
            as_exponent(bad)

    def test_conjugates(self):
        assert conjugate(2) == 2
        assert conjugate(1) == INF
        assert conjugate(INF) == 1
        assert conjugate(Fraction(5, 4)) == 5

    def test_tolerance(self):
        assert verification_tolerance(256) == mpfr(2) ** -128


class TestInterpolationExponents:
    def test_l1_s2_m3(self):
        split = interpolation_exponents(1, 2, 3)
        assert (split.p, split.q) == (2, 2)
        assert (split.alpha, split.beta) == (Fraction(1, 2), Fraction(3, 2))

    def test_infinite_m(self):
        split = interpolation_exponents(1, Fraction(5, 4), INF)
        assert split.p == 1 and split.q == INF
        assert (split.exp_l, split.exp_m) == (1, Fraction(1, 4))

    def test_odd_zeta_split(self):
        # l = 2k, s = 2k+1, m = 4k for k = 1
        split = interpolation_exponents(2, 3, 4)
        assert (split.exp_l, split.exp_m) == (1, 2)

    @pytest.mark.parametrize("l, s, m", [(2, 2, 3), (1, 3, 3), (3, 2, 4), ("inf", 2, 3), (1, "inf", "inf")])
    def test_strict_order(self, l, s, m):
        with pytest.raises(ValueError):
            interpolation_exponents(l, s, m)

    def test_closed_endpoints(self):
        at_l = interpolation_exponents(2, 2, 5, closed=True)
        assert (at_l.exp_l, at_l.exp_m) == (2, 0)
        at_m = interpolation_exponents(2, 5, 5, closed=True)
        assert (at_m.exp_l, at_m.exp_m) == (0, 5)
        with pytest.raises(ValueError):
            interpolation_exponents(3, 3, 3, closed=True)

    @settings(max_examples=300, deadline=None)
    @given(
        st.fractions(min_value=1, max_value=20, max_denominator=30),
        st.fractions(min_value=Fraction(1, 30), max_value=20, max_denominator=30),
        st.fractions(min_value=Fraction(1, 30), max_value=20, max_denominator=30),
    )
    def test_exact_invariants(self, l, ds, dm):
        s, m = l + ds, l + ds + dm
        split = interpolation_exponents(l, s, m)
        assert 1 / split.p + 1 / split.q == 1
        assert split.alpha + split.beta == s
        assert split.exp_l / l + split.exp_m / m == 1
        assert (split.exp_l, split.exp_m) == (split.alpha, split.beta)


# ---------------------------------------------------------------- sequences


class TestWeightedSequence:
    def test_strings_become_fractions(self):
        f = WeightedSequence(("0.1", 2), ("1/3", 1))
        assert f.values == (Fraction(1, 10), 2)
        assert f.weights == (Fraction(1, 3), 1)

    def test_default_weights(self):
        assert WeightedSequence((1, 2)).has_unit_weights()

    @pytest.mark.parametrize(
        "values, weights",
        [((1, -1), (1, 1)), ((1,), (0,)), ((1, 2), (1,)), ((math.nan,), (1,)), ((math.inf,), (1,))],
    )
    def test_rejects(self, values, weights):
        with pytest.raises(ValueError):
            WeightedSequence(values, weights)


class TestPNorm:
    def test_euclidean(self):
        assert p_norm(WeightedSequence.uniform([3, 4]), 2) == 5

    def test_one_norm_weighted(self):
        assert p_norm(WeightedSequence((1, 2), (3, Fraction(1, 2))), 1) == 4

    def test_sup_ignores_weights(self):
        assert p_norm(WeightedSequence((1, 7, 2), (9, Fraction(1, 9), 9)), INF) == 7

    def test_empty(self):
        assert p_norm(WeightedSequence(), 3) == 0
        assert p_norm(WeightedSequence(), INF) == 0

    def test_fractional_exponent_against_mpmath(self):
        f = WeightedSequence(("0.3", 2, 5), (1, "2.5", "0.1"))
        got = p_norm(f, Fraction(7, 3))
        with mpmath.workdps(80):
            p = mpmath.mpf(7) / 3
            terms = [(mpmath.mpf(3) / 10) ** p, mpmath.mpf(5) / 2 * 2**p, mpmath.mpf(1) / 10 * 5**p]
            truth = mpmath.fsum(terms) ** (1 / p)
            assert abs(mpmath.mpf(str(got)) - truth) <= truth * mpmath.mpf(2) ** -240

    def test_shared_root_matches_direct(self):
        f = WeightedSequence.uniform([Fraction(k, 7) for k in range(1, 30)])
        shared = power_sums(f, [Fraction(5, 4), Fraction(3, 2)])
        direct = power_sums(f, [Fraction(5, 4), Fraction(3, 2), Fraction(1, 1009)])[:2]
        for a, b in zip(shared, direct):
            assert close(a, b, 1e-70) and abs(a - b) <= b * mpfr(2) ** -240

    def test_monotone_in_p_for_counting_measure(self):
        f = WeightedSequence.uniform([0.5, 1.5, 3.0])
        norms = [p_norm(f, p) for p in (1, Fraction(3, 2), 2, 5, INF)]
        assert norms == sorted(norms, reverse=True)


class TestHolderCheck:
    def test_cauchy_schwarz(self):
        report = holder_check(WeightedSequence.uniform([1, 2]), WeightedSequence.uniform([3, 4]), 2)
        assert report.holds
        assert report.lhs == 11
        assert close(report.rhs, math.sqrt(5 * 25), 1e-15)

    def test_equality_for_proportional(self):
        f = WeightedSequence.uniform([1, 2, 3])
        report = holder_check(f, WeightedSequence.uniform([2, 4, 6]), 2)
        assert report.holds
        assert abs(report.margin) <= report.tolerance

    def test_p_one_uses_sup(self):
        report = holder_check(WeightedSequence.uniform([1, 1]), WeightedSequence.uniform([2, 5]), 1)
        assert report.rhs == 2 * 5 and report.details["q"] == INF

    def test_mismatch(self):
        with pytest.raises(ValueError):
            holder_check(WeightedSequence.uniform([1]), WeightedSequence.uniform([1, 2]), 2)
        with pytest.raises(ValueError):
            holder_check(WeightedSequence((1,), (2,)), WeightedSequence((1,), (3,)), 2)

    @settings(max_examples=150, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10), st.floats(0.01, 5)), min_size=1, max_size=20),
        st.fractions(min_value=1, max_value=12, max_denominator=16),
    )
    def test_fuzz(self, triples, p):
        w = [t[2] for t in triples]
        report = holder_check(WeightedSequence([t[0] for t in triples], w), WeightedSequence([t[1] for t in triples], w), p)
        assert report.holds


class TestBoundReport:
    def test_compare(self):
        r = BoundReport.compare(mpfr(1), mpfr(2), mpfr(0), "x", extra=3)
        assert r.holds and r.margin == 1 and r.details == {"extra": 3}
        assert not BoundReport.compare(mpfr(2), mpfr(1), mpfr("0.5")).holds


# ---------------------------------------------------------------- the bound


class TestConvexHolderBound:
    def test_hand_example(self):
        # f = (1, 2): ||f||_2^2 = 5 <= ||f||_1 · ||f||_3^{3/2} = 3 · 3^{1/2}
        report = convex_holder_bound(WeightedSequence.uniform([1, 2]), 1, 2, 3)
        assert report.lhs == 5
        assert close(report.rhs, 3 * math.sqrt(3), 1e-15)
        assert report.holds

    def test_sup_branch(self):
        # ||f||_2^2 <= ||f||_1 · ||f||_inf
        report = convex_holder_bound(WeightedSequence.uniform([1, 3]), 1, 2, INF)
        assert (report.lhs, report.rhs) == (10, 12)

    @pytest.mark.parametrize("l, s, m", [(1, 2, 3), (Fraction(3, 2), Fraction(7, 3), 9), (2, 3, INF)])
    def test_equality_on_constant_vectors(self, l, s, m):
        f = WeightedSequence((Fraction(7, 3),) * 4, (Fraction(1, 2),) * 4)
        report = convex_holder_bound(f, l, s, m)
        assert abs(report.margin) <= report.rhs * mpfr(2) ** -120

    def test_indicator_equality_weighted(self):
        # an indicator of a set of measure 3.5 is an equality case
        f = WeightedSequence((1, 1, 0), (Fraction(3), Fraction(1, 2), 9))
        report = convex_holder_bound(f, 1, Fraction(5, 2), 4)
        assert abs(report.margin) <= report.rhs * mpfr(2) ** -120

    def test_closed_endpoints_are_equalities(self):
        f = WeightedSequence((0.5, 2.0, 3.25), (1, 2, "0.3"))
        for s in (2, 5):
            report = convex_holder_bound(f, 2, s, 5, closed=True)
            assert abs(report.margin) <= report.rhs * mpfr(2) ** -120

    def test_closed_monotone_consistency(self):
        # the bound moves continuously into the endpoints
        f = WeightedSequence.uniform([0.25, 1.5, 2.5])
        inner = convex_holder_bound(f, 2, Fraction(2001, 1000), 5)
        edge = convex_holder_bound(f, 2, 2, 5, closed=True)
        assert close(inner.lhs, edge.lhs, 1e-2) and close(inner.rhs, edge.rhs, 1e-2)

    @settings(max_examples=300, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(0, 10), st.floats(0.001, 5)), min_size=1, max_size=30),
        st.fractions(min_value=1, max_value=10, max_denominator=12),
        st.fractions(min_value=Fraction(1, 12), max_value=6, max_denominator=12),
        st.one_of(st.just(None), st.fractions(min_value=Fraction(1, 12), max_value=6, max_denominator=12)),
    )
    def test_fuzz(self, pairs, l, ds, dm):
        s = l + ds
        m = INF if dm is None else s + dm
        f = WeightedSequence([v for v, _ in pairs], [w for _, w in pairs])
        report = convex_holder_bound(f, l, s, m)
        assert report.holds, (report.lhs, report.rhs)


class TestBoundFromNorms:
    def test_zeta_three(self):
        # ||{1/n^2}||_1 = pi^2/6, ||{1/n^2}||_2 = pi^2/sqrt(90): bound for zeta(3)
        pi = mpmath.pi
        with working_precision(256):
            got = bound_from_norms(mpfr(str(pi**2 / 6)), mpfr(str(ZETA2_NORM2)), 1, Fraction(3, 2), 2)
        # ||g||_{3/2}^{3/2} with g = 1/n^2 is zeta(3)
        assert close(got, mpmath.sqrt(pi**2 / 6) * ZETA2_NORM2, 1e-14)
        assert close(got, pi**3 / (6 * mpmath.sqrt(15)), 1e-14)

    def test_matches_convex_holder_bound(self):
        f = WeightedSequence((1, "0.4", 3), (2, 1, "0.7"))
        direct = convex_holder_bound(f, Fraction(4, 3), 2, 5)
        via = bound_from_norms(p_norm(f, Fraction(4, 3)), p_norm(f, 5), Fraction(4, 3), 2, 5)
        assert abs(via - direct.rhs) <= direct.rhs * mpfr(2) ** -240

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            bound_from_norms(-1, 1, 1, 2, 3)

    def test_binomial_cross_module(self):
        from convex_holder.combinatorial_bounds import binomial_moment_bound, binomial_sequence

        f = binomial_sequence(12)
        report = convex_holder_bound(f, 1, Fraction(3, 2), 2)
        # the norms of k under C(N, k) weights reproduce the closed form
        closed_form = binomial_moment_bound(12, Fraction(3, 2))
        assert report.holds
        assert abs(report.rhs - closed_form) <= closed_form * mpfr(2) ** -120
