"""High-precision and exact arithmetic substrate.

Reals are :class:`gmpy2.mpfr` values evaluated inside a thread-local
``gmpy2`` context at the requested precision; exact rationals are
:class:`fractions.Fraction`.  Every reference oracle returns an
:class:`Enclosure`, an estimate together with an absolute error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import gmpy2
from gmpy2 import mpfr

__all__ = [
    "DEFAULT_PREC",
    "Enclosure",
    "QuadratureError",
    "bernoulli_numbers",
    "format_real",
    "gamma_reference",
    "integrate",
    "pi_value",
    "real",
    "real_from_hex",
    "real_to_hex",
    "working_precision",
    "zeta_even_closed_form",
    "zeta_reference",
]

DEFAULT_PREC = 256
MIN_PREC = 32

# Guard bits used internally by the reference oracles.
_GUARD = 32


def working_precision(prec: int) -> gmpy2.context:
    """Return a fresh round-to-nearest context at ``prec`` bits.

    Use as ``with working_precision(prec): ...``.  gmpy2 contexts are
    thread-local so concurrent callers do not interfere.
    """
    return gmpy2.context(precision=int(prec))


def real(x) -> mpfr:
    """Convert ints, Fractions, decimal strings, floats or mpfr to mpfr.

    Rounds to the precision of the active context.  Decimal strings are
    parsed exactly before rounding.
    """
    if isinstance(x, str):
        text = x.strip()
        if text.lower() in ("inf", "+inf", "infinity", "∞"):
            return mpfr("inf")
        return mpfr(Fraction(text))
    if isinstance(x, mpfr):
        return +x
    return mpfr(x)


def _check_prec(prec: int) -> int:
    if not isinstance(prec, int) or prec < MIN_PREC:
        raise ValueError(f"precision must be an integer >= {MIN_PREC}, got {prec!r}")
    return prec


@dataclass(frozen=True)
class Enclosure:
    """An estimate with an absolute error bound around the true value."""

    estimate: mpfr
    error_bound: mpfr

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError("error_bound must be nonnegative")

    @property
    def lower(self) -> mpfr:
        with gmpy2.context(precision=self.estimate.precision, round=gmpy2.RoundDown):
            return self.estimate - self.error_bound

    @property
    def upper(self) -> mpfr:
        with gmpy2.context(precision=self.estimate.precision, round=gmpy2.RoundUp):
            return self.estimate + self.error_bound

    def contains(self, value, slack=0) -> bool:
        prec = self.estimate.precision + 64
        with gmpy2.context(precision=prec, round=gmpy2.RoundDown):
            lo = self.estimate - self.error_bound - slack
        with gmpy2.context(precision=prec, round=gmpy2.RoundUp):
            hi = self.estimate + self.error_bound + slack
        return lo <= value <= hi

    def __str__(self) -> str:
        return f"{format_real(self.estimate, 17)} ± {format_real(self.error_bound, 3)}"


class QuadratureError(ArithmeticError):
    """Adaptive quadrature hit its refinement limit.

    ``best`` holds the enclosure accumulated so far; its error bound
    exceeds the requested tolerance.
    """

    def __init__(self, message: str, best: Enclosure):
        super().__init__(message)
        self.best = best


# --------------------------------------------------------------------------
# Constants and exact sequences
# --------------------------------------------------------------------------


def pi_value(prec: int = DEFAULT_PREC) -> mpfr:
    """π correctly rounded to ``prec`` bits (error at most half an ulp)."""
    _check_prec(prec)
    with working_precision(prec):
        return gmpy2.const_pi()


@lru_cache(maxsize=None)
def _bernoulli_table(n_max: int) -> tuple[Fraction, ...]:
    table = [Fraction(1)]
    for n in range(1, n_max + 1):
        if n >= 3 and n % 2 == 1:
            table.append(Fraction(0))
            continue
        acc = sum(math.comb(n + 1, j) * table[j] for j in range(n))
        table.append(-acc / (n + 1))
    return tuple(table)


def bernoulli_numbers(n_max: int) -> list[Fraction]:
    """B_0..B_n_max from the recurrence sum_j C(n+1, j) B_j = 0.

    Uses the convention B_1 = -1/2.  ``n_max`` must be even and >= 0.
    """
    if not isinstance(n_max, int) or n_max < 0 or n_max % 2:
        raise ValueError(f"n_max must be a nonnegative even integer, got {n_max!r}")
    return list(_bernoulli_table(n_max))


def zeta_even_closed_form(two_k: int) -> Fraction:
    """Rational q with ζ(2k) = q·π^(2k)."""
    if not isinstance(two_k, int) or two_k < 2 or two_k % 2:
        raise ValueError(f"argument must be an even integer >= 2, got {two_k!r}")
    k = two_k // 2
    b = bernoulli_numbers(two_k)[two_k]
    return (-1) ** (k + 1) * b * 2 ** (two_k - 1) / math.factorial(two_k)


# --------------------------------------------------------------------------
# Zeta reference
# --------------------------------------------------------------------------


def _rising(s: mpfr, r: int) -> mpfr:
    out = mpfr(1)
    for i in range(r):
        out *= s + i
    return out


def zeta_reference(s, prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of ζ(s) for real s > 1.

    Partial sum of the first N-1 terms plus the Euler-Maclaurin tail
    at N.  Since x^-s is completely monotone, the truncated
    Euler-Maclaurin remainder is bounded by the first omitted term; the
    number of correction terms grows until that bound drops below
    2^-prec.  Rounding is accounted for separately.
    """
    _check_prec(prec)
    wp = prec + _GUARD
    with working_precision(wp):
        s = real(s)
        if not s > 1 + mpfr("1e-6"):
            raise ValueError(f"zeta_reference requires s > 1 + 1e-6, got {s}")
        target = mpfr(2) ** (-prec - 2)
        n0 = max(16, prec // 4)
        while True:
            correction, bound, order = _em_tail(s, n0, target)
            if bound is not None:
                break
            n0 *= 2

        partial = mpfr(0)
        for n in range(n0 - 1, 0, -1):  # small terms first
            partial += mpfr(n) ** (-s)
        head = mpfr(n0) ** (1 - s) / (s - 1) + mpfr(n0) ** (-s) / 2
        estimate = partial + head + correction
        rounding = (4 * n0 + 4 * order + 16) * estimate * mpfr(2) ** (-wp + 1)
        error = bound + rounding
    with working_precision(prec):
        rounded = +estimate
    with working_precision(wp):
        error = error + abs(estimate - rounded)
    with working_precision(prec):
        return Enclosure(rounded, gmpy2.next_above(+error))


def _em_tail(s: mpfr, n0: int, target: mpfr):
    """Euler-Maclaurin correction sum at n0 and the remainder bound.

    Returns ``(correction, bound, order)`` or ``(_, None, _)`` when the
    asymptotic terms start growing before reaching ``target``.
    """
    n = mpfr(n0)
    correction = mpfr(0)
    previous = None
    j = 1
    while True:
        b = bernoulli_numbers(2 * j)[2 * j]
        term = mpfr(b) / math.factorial(2 * j) * _rising(s, 2 * j - 1) * n ** (-s - 2 * j + 1)
        magnitude = abs(term)
        if magnitude <= target:
            return correction, magnitude, j
        if previous is not None and magnitude >= previous:
            return correction, None, j
        correction += term
        previous = magnitude
        j += 1


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------

_SAFETY = 4


def integrate(
    f: Callable[[mpfr], object],
    a,
    b,
    tol,
    prec: int = DEFAULT_PREC,
    max_depth: int = 60,
    min_depth: int = 3,
) -> Enclosure:
    """Adaptive Simpson quadrature of ``f`` over [a, b].

    Each accepted panel contributes the Richardson-corrected Simpson
    value and ``4·|S2 - S1|/15`` to the error bound; panels are split
    until that contribution fits their share of ``tol``, so the total
    reported error bound never exceeds ``tol``.

    Raises :class:`QuadratureError` when a panel reaches ``max_depth``
    without meeting its share.
    """
    _check_prec(prec)
    with working_precision(prec):
        a, b, tol = real(a), real(b), real(tol)
        if not tol > 0:
            raise ValueError("tol must be positive")
        if a == b:
            return Enclosure(mpfr(0), mpfr(0))
        if a > b:
            flipped = integrate(f, b, a, tol, prec, max_depth, min_depth)
            return Enclosure(-flipped.estimate, flipped.error_bound)

        def F(x):
            return real(f(x))

        fa, fm, fb = F(a), F((a + b) / 2), F(b)
        whole = (b - a) / 6 * (fa + 4 * fm + fb)
        stack = [(a, b, fa, fm, fb, whole, tol, 0)]
        total = mpfr(0)
        error = mpfr(0)
        failed = False
        while stack:
            lo, hi, flo, fmid, fhi, coarse, share, depth = stack.pop()
            mid = (lo + hi) / 2
            left_mid, right_mid = F((lo + mid) / 2), F((mid + hi) / 2)
            left = (mid - lo) / 6 * (flo + 4 * left_mid + fmid)
            right = (hi - mid) / 6 * (fmid + 4 * right_mid + fhi)
            fine = left + right
            delta = fine - coarse
            panel_error = _SAFETY * abs(delta) / 15
            if depth >= min_depth and (panel_error <= share or depth >= max_depth):
                if panel_error > share:
                    failed = True
                total += fine + delta / 15
                error += panel_error
                continue
            stack.append((mid, hi, fmid, right_mid, fhi, right, share / 2, depth + 1))
            stack.append((lo, mid, flo, left_mid, fmid, left, share / 2, depth + 1))
        result = Enclosure(total, error)
        if failed:
            raise QuadratureError(
                f"adaptive Simpson did not reach tol={format_real(tol, 3)} "
                f"within depth {max_depth}",
                result,
            )
        return result


# --------------------------------------------------------------------------
# Gamma reference
# --------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _gamma_cached(x: mpfr, prec: int) -> Enclosure:
    wp = prec + _GUARD
    with working_precision(wp):
        if gmpy2.is_integer(x):
            exact = math.factorial(int(x) - 1)
            estimate = mpfr(exact)
            # zero unless the factorial outgrows the significand
            with gmpy2.context(precision=wp, round=gmpy2.RoundUp):
                error = mpfr(abs(int(estimate) - exact))
            return Enclosure(estimate, error)

        eps = mpfr(2) ** (-wp)
        power = x - 1
        cut = max(mpfr(40), 4 * x)
        while True:
            truncated, n_terms = _truncated_gamma_integral(x, cut, eps)
            # t^(x-1) e^-t past the cut decays at least geometrically.
            tail = gmpy2.exp(power * gmpy2.log(cut) - cut) / (1 - max(power, 0) / cut)
            if tail <= eps * truncated:
                break
            cut = cut * 5 / 4
        estimate = truncated + tail / 2
        error = tail / 2 + (2 * n_terms + 16) * eps * truncated
    with working_precision(prec):
        rounded = +estimate
    with working_precision(wp):
        error += abs(estimate - rounded)
    with working_precision(prec):
        return Enclosure(rounded, gmpy2.next_above(+error))


def _truncated_gamma_integral(a: mpfr, cut: mpfr, eps: mpfr) -> tuple[mpfr, int]:
    """∫_0^cut t^(a-1) e^-t dt via cut^a e^-cut Σ cut^n / (a(a+1)...(a+n)).

    All terms are positive; once the term ratio cut/(a+n+1) is below 1/2
    the remainder is at most the last term, which is kept below ``eps``
    relative to the sum.
    """
    term = 1 / a
    total = term
    n = 0
    while True:
        n += 1
        ratio = cut / (a + n)
        term *= ratio
        total += term
        if ratio < mpfr(0.5) and term <= eps * total:
            break
    total += term  # remainder <= last term under ratio < 1/2; counted once more
    prefactor = gmpy2.exp(a * gmpy2.log(cut) - cut)
    return prefactor * total, n


def gamma_reference(x, prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of Γ(x) for x > 0 from its defining integral.

    Positive integers return the factorial, with error zero whenever it
    fits in the working significand.  Otherwise the
    integral is cut at T >= max(40, 4x), the finite part summed from its
    positive-term series and the rest enclosed by an explicit tail
    bound; the relative error bound is near 2^-prec.
    """
    _check_prec(prec)
    with working_precision(prec + _GUARD):
        x = real(x)
    if not x > 0:
        raise ValueError(f"gamma_reference requires x > 0, got {x}")
    return _gamma_cached(x, prec)


# --------------------------------------------------------------------------
# Formatting
# --------------------------------------------------------------------------


def format_real(x, digits: int) -> str:
    """Decimal string with ``digits`` significant figures, ties to even.

    Fixed notation for moderate magnitudes, otherwise ``d.ddde±XX``.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    if not isinstance(x, mpfr):
        with working_precision(max(DEFAULT_PREC, 4 * digits)):
            x = real(x)
    if gmpy2.is_nan(x):
        return "nan"
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0." + "0" * (digits - 1) if digits > 1 else "0"
    with gmpy2.context(precision=max(x.precision, 64)):
        mantissa, exp10, _ = x.digits(10, digits)
    sign = ""
    if mantissa.startswith("-"):
        sign, mantissa = "-", mantissa[1:]
    # value = 0.mantissa × 10^exp10
    point = exp10
    if -4 < point <= digits:
        if point <= 0:
            body = "0." + "0" * (-point) + mantissa
        elif point >= len(mantissa):
            body = mantissa + "0" * (point - len(mantissa))
        else:
            body = mantissa[:point] + "." + mantissa[point:]
        return sign + body
    tail = mantissa[1:]
    body = mantissa[0] + ("." + tail if tail else "")
    return f"{sign}{body}e{point - 1:+03d}"


def real_to_hex(x: mpfr) -> str:
    """Exact binary representation ``[-]0x<hex mantissa>p<exponent>``."""
    if x == 0:
        return "0x0p0"
    if not gmpy2.is_finite(x):
        return format_real(x, 1)
    man, exp = x.as_mantissa_exp()
    man, exp = int(man), int(exp)
    sign = "-" if man < 0 else ""
    man = abs(man)
    trailing = (man & -man).bit_length() - 1
    return f"{sign}0x{man >> trailing:x}p{exp + trailing}"


def real_from_hex(text: str) -> mpfr:
    """Inverse of :func:`real_to_hex`; the result is exact."""
    text = text.strip()
    if text in ("inf", "-inf", "nan"):
        return mpfr(text)
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("+-")
    if not body.startswith("0x") or "p" not in body:
        raise ValueError(f"not a hexadecimal real: {text!r}")
    man_text, exp_text = body[2:].split("p")
    man = int(man_text, 16)
    with working_precision(max(MIN_PREC, man.bit_length())):
        return gmpy2.mul_2exp(mpfr(sign * man), int(exp_text))
