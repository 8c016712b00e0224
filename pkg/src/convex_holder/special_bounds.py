"""Interpolation bounds for integrals, Γ and B.

On an interval with Lebesgue measure the same interpolation inequality
bounds ∫f^s by ∫f^l and ∫f^m.  Applied to x^y under the measure e^-x dx
between consecutive integers it gives Γ(y+1) <= l!·(l+1)^(y-l) with
l = ⌊y⌋, and a matching bound for B(x+1, y+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import gmpy2
from gmpy2 import mpfr

from .norm_core import BoundReport, as_exponent, interpolation_exponents, verification_tolerance
from .numerics import (
    DEFAULT_PREC,
    Enclosure,
    gamma_reference,
    integrate,
    pi_value,
    real,
    working_precision,
)

__all__ = [
    "FloorBracket",
    "beta_reference",
    "beta_upper_bound",
    "check_beta",
    "check_gamma",
    "gamma_upper_bound",
    "lp_integral_bound",
    "sin_power_table",
]


@dataclass(frozen=True)
class FloorBracket:
    """y with its integer bracket l = ⌊y⌋ <= y < m = l + 1."""

    y: mpfr
    l: int
    m: int

    @classmethod
    def of(cls, y) -> "FloorBracket":
        l = int(gmpy2.floor(y))
        return cls(y, l, l + 1)

    @property
    def is_integer(self) -> bool:
        return self.y == self.l


def _nonnegative(f: Callable) -> Callable:
    def wrapped(x):
        value = real(f(x))
        if value < 0:
            # Tiny negatives from rounding at roots of f.
            if value > -mpfr(2) ** (-(value.precision // 2)):
                return mpfr(0)
            raise ValueError(f"integrand must be nonnegative; f({x}) = {value}")
        return value

    return wrapped


def lp_integral_bound(
    f: Callable,
    a,
    b,
    s,
    l=1,
    m=2,
    tol=1e-13,
    prec: int = DEFAULT_PREC,
) -> BoundReport:
    """Compare ∫f^s with (∫f^l)^(exp_l/l)·(∫f^m)^(exp_m/m) on [a, b].

    Each integral comes from adaptive quadrature with error at most
    ``tol``; the reported tolerance propagates those errors to first
    order on top of the usual relative slack.
    """
    split = interpolation_exponents(l, s, m)
    l, s, m = as_exponent(l), as_exponent(s), as_exponent(m)
    if m == math.inf:
        raise ValueError("integral bounds need a finite m")
    g = _nonnegative(f)

    def power(e: Fraction) -> Enclosure:
        if e == 1:
            return integrate(g, a, b, tol, prec=prec)
        exponent = int(e) if e.denominator == 1 else mpfr(e)
        return integrate(lambda x: g(x) ** exponent, a, b, tol, prec=prec)

    with working_precision(prec):
        lhs, int_l, int_m = power(s), power(l), power(m)
        wl, wm = mpfr(split.exp_l / l), mpfr(split.exp_m / m)
        rhs = int_l.estimate**wl * int_m.estimate**wm
        propagated = lhs.error_bound
        if int_l.estimate > 0 and int_m.estimate > 0:
            propagated += rhs * (
                wl * int_l.error_bound / int_l.estimate + wm * int_m.error_bound / int_m.estimate
            )
        tolerance = propagated + verification_tolerance(prec) * rhs
        return BoundReport.compare(
            lhs.estimate,
            rhs,
            tolerance,
            "lp_integral",
            s=s,
            l=l,
            m=m,
            lhs_error=lhs.error_bound,
            integral_l=int_l,
            integral_m=int_m,
        )


def sin_power_table(s_grid: Iterable, tol=1e-13, prec: int = DEFAULT_PREC) -> list[BoundReport]:
    """∫_0^(π/2) sin^s against √(∫sin · ∫sin²)-type bounds for each s in (1, 2)."""
    reports = []
    half_pi = pi_value(prec + 16) / 2
    for s in s_grid:
        s = as_exponent(s)
        if not 1 < s < 2:
            raise ValueError(f"s must lie in (1, 2), got {s}")
        reports.append(lp_integral_bound(gmpy2.sin, 0, half_pi, s, tol=tol, prec=prec))
    return reports


def gamma_upper_bound(y, prec: int = DEFAULT_PREC) -> tuple[FloorBracket, mpfr]:
    """Γ(y+1) <= l!·(l+1)^(y-l) with l = ⌊y⌋, for y > 1.

    Integer y returns y! exactly (the bound is attained there).
    """
    with working_precision(prec):
        y = real(y)
        if not y > 1:
            raise ValueError(f"gamma bound requires y > 1, got {y}")
        bracket = FloorBracket.of(y)
        out = mpfr(math.factorial(bracket.l))
        if not bracket.is_integer:
            out *= mpfr(bracket.m) ** (y - bracket.l)
        return bracket, out


def check_gamma(y, prec: int = DEFAULT_PREC) -> BoundReport:
    """Γ(y+1) from the reference integral against :func:`gamma_upper_bound`."""
    bracket, bound = gamma_upper_bound(y, prec)
    with working_precision(prec):
        reference = gamma_reference(bracket.y + 1, prec)
        tolerance = reference.error_bound + verification_tolerance(prec) * bound
        return BoundReport.compare(
            reference.estimate, bound, tolerance, "gamma", y=bracket.y, l=bracket.l, reference=reference
        )


def beta_upper_bound(x, y, prec: int = DEFAULT_PREC) -> mpfr:
    """B(x+1, y+1) <= l!·m!·(l+1)^(x-l)·(m+1)^(y-m)/(l+m)!  (l = ⌊x⌋, m = ⌊y⌋)."""
    with working_precision(prec):
        x, y = real(x), real(y)
        l, m = int(gmpy2.floor(x)), int(gmpy2.floor(y))
        if l < 1 or m < 1:
            raise ValueError(f"beta bound requires ⌊x⌋ >= 1 and ⌊y⌋ >= 1, got x={x}, y={y}")
        numer = mpfr(math.factorial(l) * math.factorial(m))
        numer *= mpfr(l + 1) ** (x - l) * mpfr(m + 1) ** (y - m)
        return numer / math.factorial(l + m)


def beta_reference(x, y, prec: int = DEFAULT_PREC) -> Enclosure:
    """B(x+1, y+1) = Γ(x+1)Γ(y+1)/Γ(x+y+2) from the Γ enclosures."""
    wp = prec + 16
    with working_precision(wp):
        x, y = real(x), real(y)
        gx, gy, gxy = gamma_reference(x + 1, wp), gamma_reference(y + 1, wp), gamma_reference(x + y + 2, wp)
        estimate = gx.estimate * gy.estimate / gxy.estimate
        relative = (
            gx.error_bound / gx.estimate
            + gy.error_bound / gy.estimate
            + gxy.error_bound / gxy.estimate
        )
        # (1+a)(1+b)/(1-c) - 1 <= 2(a+b+c) while a, b, c are small.
        error = estimate * (2 * relative + mpfr(2) ** (-wp + 4))
    with working_precision(prec):
        return Enclosure(+estimate, gmpy2.next_above(+error))


def check_beta(x, y, prec: int = DEFAULT_PREC) -> BoundReport:
    bound = beta_upper_bound(x, y, prec)
    reference = beta_reference(x, y, prec)
    with working_precision(prec):
        tolerance = reference.error_bound + verification_tolerance(prec) * bound
        return BoundReport.compare(reference.estimate, bound, tolerance, "beta", x=real(x), y=real(y))
