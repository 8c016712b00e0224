"""Upper bounds on odd zeta values from neighbouring even ones.

Interpolating the sequence f = {1/n²} between its k- and (k+1)-norms at
s = (2k+1)/2 gives ζ(2k+1) <= √(ζ(2k)·ζ(2k+2)).  Both even values have
rational multiples of π^(2j) as closed forms, so each bound is an exact
radical (a/b)·π^(2k+1)·√c.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2
from gmpy2 import mpfr

from .norm_core import BoundReport, bound_from_norms, verification_tolerance
from .numerics import (
    DEFAULT_PREC,
    Enclosure,
    pi_value,
    working_precision,
    zeta_even_closed_form,
    zeta_reference,
)

__all__ = [
    "PRINTED_RADICALS",
    "CanonicalRadical",
    "ZetaTableRow",
    "factorize",
    "odd_zeta_bound",
    "odd_zeta_closed_form",
    "verify_odd_bound_chain",
    "zeta_table",
]


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (inputs here are small)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _split_square(n: int) -> tuple[int, int]:
    """n = outside² · inside with ``inside`` squarefree."""
    outside, inside = 1, 1
    for p, e in factorize(n).items():
        outside *= p ** (e // 2)
        inside *= p ** (e % 2)
    return outside, inside


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


@dataclass(frozen=True)
class CanonicalRadical:
    """Exact positive value coefficient·π^pi_power·√radicand.

    Canonical form has a squarefree integer radicand: denominators under
    the root are rationalised and square factors moved into the
    coefficient, so equal values compare equal.
    """

    coefficient: Fraction
    pi_power: int
    radicand: int

    def __post_init__(self):
        if self.coefficient <= 0:
            raise ValueError("coefficient must be positive")
        if self.pi_power < 0:
            raise ValueError("pi_power must be nonnegative")
        if self.radicand < 1 or not is_squarefree(self.radicand):
            raise ValueError("radicand must be a squarefree positive integer; use from_parts")

    @classmethod
    def from_parts(cls, coefficient, pi_power: int, radicand=1) -> "CanonicalRadical":
        """Canonicalise coefficient·π^pi_power·√radicand for rational inputs."""
        coefficient, radicand = Fraction(coefficient), Fraction(radicand)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        # √(c/d) = √(c·d)/d
        num_out, num_in = _split_square(radicand.numerator)
        den_out, den_in = _split_square(radicand.denominator)
        inside = num_in * den_in
        coefficient = coefficient * num_out / (den_out * den_in)
        return cls(coefficient, int(pi_power), inside)

    def value(self, prec: int = DEFAULT_PREC) -> mpfr:
        pi = pi_value(prec + 16)
        with working_precision(prec + 16):
            out = mpfr(self.coefficient) * pi**self.pi_power * gmpy2.sqrt(self.radicand)
        with working_precision(prec):
            return +out

    def to_unicode(self) -> str:
        """Render like ``π^3·√15/90``."""
        parts = []
        if self.coefficient.numerator != 1:
            parts.append(str(self.coefficient.numerator))
        if self.pi_power:
            parts.append("π" if self.pi_power == 1 else f"π^{self.pi_power}")
        if self.radicand != 1:
            parts.append(f"√{self.radicand}")
        text = "·".join(parts) or "1"
        if self.coefficient.denominator != 1:
            text += f"/{self.coefficient.denominator}"
        return text

    def to_json(self) -> dict:
        return {
            "coef_num": self.coefficient.numerator,
            "coef_den": self.coefficient.denominator,
            "pi_power": self.pi_power,
            "rad_num": self.radicand,
            "rad_den": 1,
        }

    def __str__(self) -> str:
        return self.to_unicode()


# Closed forms exactly as printed in the published table of odd zeta
# bounds, keyed by k.  The k = 5 entry does not equal the bound.
PRINTED_RADICALS: dict[int, CanonicalRadical] = {
    1: CanonicalRadical.from_parts(Fraction(1, 6), 3, Fraction(1, 15)),
    2: CanonicalRadical.from_parts(Fraction(1, 45), 5, Fraction(1, 42)),
    3: CanonicalRadical.from_parts(Fraction(1, 945), 7, Fraction(1, 10)),
    4: CanonicalRadical.from_parts(Fraction(1, 2835), 9, Fraction(1, 110)),
    5: CanonicalRadical.from_parts(Fraction(1, 5), 11, Fraction(691, 273)),
}


def _check_k(k) -> int:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    return k


def odd_zeta_closed_form(k: int) -> CanonicalRadical:
    """Exact √(ζ(2k)ζ(2k+2)) as a canonical radical."""
    _check_k(k)
    product = zeta_even_closed_form(2 * k) * zeta_even_closed_form(2 * k + 2)
    return CanonicalRadical.from_parts(1, 2 * k + 1, product)


def odd_zeta_bound(k: int, prec: int = DEFAULT_PREC) -> mpfr:
    """√(ζ(2k)·ζ(2k+2)) from the even closed forms q·π^(2j)."""
    _check_k(k)
    wp = prec + 16
    pi = pi_value(wp)
    with working_precision(wp):
        lower = mpfr(zeta_even_closed_form(2 * k)) * pi ** (2 * k)
        upper = mpfr(zeta_even_closed_form(2 * k + 2)) * pi ** (2 * k + 2)
        out = gmpy2.sqrt(lower * upper)
    with working_precision(prec):
        return +out


@dataclass(frozen=True)
class ZetaTableRow:
    odd_index: int
    zeta_value: Enclosure
    bound_numeric: mpfr
    bound_closed: CanonicalRadical
    ratio: mpfr
    printed_form: Optional[CanonicalRadical] = None

    @property
    def holds(self) -> bool:
        return self.zeta_value.upper <= self.bound_numeric

    @property
    def printed_matches(self) -> Optional[bool]:
        """Whether the printed radical equals the exact one (None if unknown)."""
        if self.printed_form is None:
            return None
        return self.printed_form == self.bound_closed


def zeta_table(k_max: int, prec: int = DEFAULT_PREC) -> list[ZetaTableRow]:
    """Rows (2k+1, ζ(2k+1), bound, closed form, ratio) for k = 1..k_max."""
    _check_k(k_max)
    rows = []
    tol = verification_tolerance(prec)
    for k in range(1, k_max + 1):
        value = zeta_reference(2 * k + 1, prec)
        bound = odd_zeta_bound(k, prec)
        closed = odd_zeta_closed_form(k)
        with working_precision(prec):
            if abs(bound - closed.value(prec)) > tol * bound:
                raise ArithmeticError(f"closed form and numeric bound disagree at k={k}")
            ratio = bound / value.estimate
        rows.append(ZetaTableRow(2 * k + 1, value, bound, closed, ratio, PRINTED_RADICALS.get(k)))
    return rows


def verify_odd_bound_chain(k: int, prec: int = DEFAULT_PREC) -> BoundReport:
    """Check ζ(2k+1) <= √(ζ(2k)ζ(2k+2)) along two independent routes.

    The closed-form bound is compared with the interpolation engine fed
    the k- and (k+1)-norms of {1/n²}, whose power sums come from the
    series reference rather than the closed forms.  ``details`` carries
    the engine value and the relative disagreement.
    """
    _check_k(k)
    lhs = zeta_reference(2 * k + 1, prec)
    rhs = odd_zeta_bound(k, prec)
    wp = prec + 16
    with working_precision(wp):
        norm_l = zeta_reference(2 * k, wp).estimate ** (mpfr(1) / k)
        norm_m = zeta_reference(2 * k + 2, wp).estimate ** (mpfr(1) / (k + 1))
    engine = bound_from_norms(norm_l, norm_m, k, Fraction(2 * k + 1, 2), k + 1, prec=wp)
    with working_precision(prec):
        disagreement = abs(engine - rhs) / rhs
        tolerance = verification_tolerance(prec) * rhs + lhs.error_bound
        return BoundReport.compare(
            lhs.estimate,
            rhs,
            tolerance,
            "odd_zeta",
            k=k,
            engine_rhs=+engine,
            route_disagreement=disagreement,
        )
