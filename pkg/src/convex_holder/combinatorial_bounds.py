"""Binomial moment sums Σ_k C(N,k)·k^s.

Integer s has an exact value through Stirling numbers of the second
kind.  For fractional 1 <= s <= 2 the sum is bounded by interpolating
between the first and second moments N·2^(N-1) and 2^(N-2)·(N+N²)::

    Σ C(N,k) k^s <= N^(2-s) · (N+N²)^(s-1) · 2^(N-s)
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpfr

from .norm_core import WeightedSequence
from .numerics import DEFAULT_PREC, real, working_precision

__all__ = [
    "BRUTE_FORCE_MAX_N",
    "binomial_bound_exponents",
    "binomial_moment_bound",
    "binomial_moment_bound_exact",
    "binomial_moment_brute",
    "binomial_moment_exact",
    "binomial_sequence",
    "stirling2",
]

BRUTE_FORCE_MAX_N = 10_000


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1) + (0,)
    return tuple((j * prev[j] if j else 0) + (prev[j - 1] if j else 0) for j in range(n + 1))


def stirling2(n: int, j: int) -> int:
    """Stirling number of the second kind S(n, j)."""
    if n < 0 or j < 0:
        raise ValueError("arguments must be nonnegative")
    if j > n:
        return 0
    # Warm rows bottom-up so the recursion stays shallow.
    for i in range(n + 1):
        _stirling_row(i)
    return _stirling_row(n)[j]


def _check_n(N) -> int:
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ValueError(f"N must be an integer >= 1, got {N!r}")
    return N


def binomial_moment_exact(N: int, s: int) -> int:
    """Σ_k C(N,k)·k^s for integer s >= 0 (0^0 = 1)."""
    _check_n(N)
    if not isinstance(s, int) or s < 0:
        raise ValueError(f"s must be a nonnegative integer, got {s!r}")
    # k^s = Σ_j S(s,j)·k!/(k-j)!  and  Σ_k C(N,k)·k!/(k-j)! = N!/(N-j)!·2^(N-j)
    return sum(
        stirling2(s, j) * math.perm(N, j) * 2 ** (N - j) for j in range(min(s, N) + 1)
    )


def _check_s(s) -> Fraction:
    s = Fraction(str(s)) if isinstance(s, float) else Fraction(s)
    if not 1 <= s <= 2:
        raise ValueError(f"s must lie in [1, 2], got {s}")
    return s


def binomial_bound_exponents(N: int, s) -> tuple[tuple[int, Fraction], ...]:
    """The bound as (base, exponent) pairs; exponents are affine in s."""
    _check_n(N)
    s = _check_s(s)
    return ((N, 2 - s), (N + N * N, s - 1), (2, N - s))


def binomial_moment_bound_exact(N: int, s: int) -> Fraction:
    """The bound at s = 1 or s = 2, in exact rational arithmetic."""
    if s not in (1, 2):
        raise ValueError("exact evaluation needs an integer endpoint s in {1, 2}")
    out = Fraction(1)
    for base, e in binomial_bound_exponents(N, s):
        out *= Fraction(base) ** int(e)
    return out


def binomial_moment_bound(N: int, s, prec: int = DEFAULT_PREC) -> mpfr:
    """N^(2-s)·(N+N²)^(s-1)·2^(N-s) for 1 <= s <= 2.

    2^(N-s) is split into the exact integer 2^(N-2) and 2^(2-s).
    """
    _check_n(N)
    s = _check_s(s)
    if s.denominator == 1:
        with working_precision(prec):
            return mpfr(binomial_moment_bound_exact(N, int(s)))
    with working_precision(prec + 16):
        e = mpfr(s)
        out = mpfr(N) ** (2 - e) * mpfr(N + N * N) ** (e - 1) * mpfr(2) ** (2 - e)
        out = out * mpfr(Fraction(2) ** (N - 2))
    with working_precision(prec):
        return +out


def binomial_moment_brute(N: int, s, prec: int = DEFAULT_PREC) -> mpfr:
    """Direct Σ_k C(N,k)·k^s with exact binomials, for real s >= 0."""
    _check_n(N)
    if N > BRUTE_FORCE_MAX_N:
        raise ValueError(f"direct summation limited to N <= {BRUTE_FORCE_MAX_N}")
    wp = prec + 16
    with working_precision(wp):
        e = real(s)
        if e < 0:
            raise ValueError("s must be nonnegative")
        total = mpfr(1) if e == 0 else mpfr(0)  # k = 0 term
        for k in range(1, N + 1):
            total += math.comb(N, k) * mpfr(k) ** e
    with working_precision(prec):
        return +total


def binomial_sequence(N: int) -> WeightedSequence:
    """Values k with weights C(N,k), k = 0..N."""
    _check_n(N)
    return WeightedSequence(tuple(range(N + 1)), tuple(math.comb(N, k) for k in range(N + 1)))
