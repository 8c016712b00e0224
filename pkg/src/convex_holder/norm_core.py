"""p-norms on weighted counting measures and the convex Hölder bound.

For 1 <= l < s < m <= ∞ the s-th power sum of a nonnegative sequence is
bounded by its l- and m-norms::

    ||f||_s^s <= ||f||_l^(l(m-s)/(m-l)) * ||f||_m^(m(s-l)/(m-l))

and, for m = ∞, ``||f||_s^s <= ||f||_l^l * ||f||_∞^(s-l)``.  All
exponent algebra is exact (:class:`~fractions.Fraction`); only the norm
evaluation itself is done in floating point at the requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import gmpy2
from gmpy2 import mpfr

from .numerics import DEFAULT_PREC, real, working_precision

__all__ = [
    "INF",
    "BoundReport",
    "InterpolationSplit",
    "WeightedSequence",
    "as_exponent",
    "bound_from_norms",
    "conjugate",
    "convex_holder_bound",
    "holder_check",
    "interpolation_exponents",
    "p_norm",
    "power_sums",
    "reciprocal",
    "verification_tolerance",
]

INF = math.inf

Exponent = Union[Fraction, float]  # float only for INF

# Integer-root path for rational exponents: r = v^(1/D), v^e = r^(e·D).
_MAX_ROOT_DEGREE = 1000
_MAX_ROOT_POWER = 10_000


def as_exponent(value) -> Exponent:
    """Normalise an exponent to an exact Fraction >= 1 or :data:`INF`.

    Accepts ints, Fractions, decimal strings (``"1.25"``), ratio strings
    (``"5/4"``) and the strings ``"inf"``/``"∞"``.  Floats are read via
    their shortest repr so ``1.1`` means 11/10.
    """
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "∞"):
            return INF
        value = Fraction(text)
    elif isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        value = Fraction(repr(value))
    elif isinstance(value, mpfr):
        if gmpy2.is_infinite(value) and value > 0:
            return INF
        value = Fraction(*value.as_integer_ratio())
    else:
        value = Fraction(value)
    if value < 1:
        raise ValueError(f"exponent must be >= 1, got {value}")
    return value


def reciprocal(p: Exponent) -> Fraction:
    return Fraction(0) if p == INF else 1 / p


def conjugate(p: Exponent) -> Exponent:
    """Hölder conjugate q with 1/p + 1/q = 1."""
    p = as_exponent(p)
    if p == INF:
        return Fraction(1)
    if p == 1:
        return INF
    return p / (p - 1)


def verification_tolerance(prec: int) -> mpfr:
    """Relative slack 2^(-prec/2) granted to numerically checked bounds."""
    with working_precision(prec):
        return mpfr(2) ** (-(prec // 2))


@dataclass(frozen=True)
class WeightedSequence:
    """Finite nonnegative function on a weighted counting measure.

    Values and weights keep the exact type they were given in (int,
    float, Fraction, mpfr; decimal strings become Fractions) and are
    rounded only when a norm is evaluated.
    """

    values: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        values = tuple(_exact(v) for v in self.values)
        weights = tuple(_exact(w) for w in self.weights) if self.weights else (1,) * len(values)
        if len(values) != len(weights):
            raise ValueError("values and weights must have the same length")
        if any(v < 0 for v in values):
            raise ValueError("values must be nonnegative")
        if any(not w > 0 for w in weights):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, values: Iterable) -> "WeightedSequence":
        values = tuple(values)
        return cls(values, (1,) * len(values))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(zip(self.values, self.weights))

    def has_unit_weights(self) -> bool:
        return all(w == 1 for w in self.weights)


def _exact(x):
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite entry {x!r}")
    return x


@dataclass(frozen=True)
class InterpolationSplit:
    """Exact exponents of the Hölder split |f|^s = |f|^α · |f|^β.

    ``exp_l`` and ``exp_m`` are the powers of ||f||_l and ||f||_m in the
    bound; they coincide with α and β.  For m = ∞, p = 1 and exp_m = s - l.
    """

    p: Exponent
    q: Exponent
    alpha: Fraction
    beta: Fraction
    exp_l: Fraction
    exp_m: Fraction


@dataclass(frozen=True)
class BoundReport:
    """Numerical check of ``lhs <= rhs`` with slack ``tolerance``."""

    lhs: mpfr
    rhs: mpfr
    margin: mpfr
    holds: bool
    tolerance: mpfr
    label: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def compare(cls, lhs, rhs, tolerance, label: str = "", **details) -> "BoundReport":
        margin = rhs - lhs
        return cls(lhs, rhs, margin, bool(lhs <= rhs + tolerance), tolerance, label, details)


def _check_order(l, s, m, closed: bool):
    l, s, m = as_exponent(l), as_exponent(s), as_exponent(m)
    if l == INF or s == INF:
        raise ValueError("l and s must be finite")
    ok = (l <= s <= m and l < m) if closed else (l < s < m)
    if not ok:
        relation = "l <= s <= m, l < m" if closed else "l < s < m"
        raise ValueError(f"exponents must satisfy 1 <= {relation}; got l={l}, s={s}, m={m}")
    return l, s, m


def interpolation_exponents(l, s, m, closed: bool = False) -> InterpolationSplit:
    """Solve the split for the interpolation bound.

    Finite m: p = (m-l)/(m-s), q = (m-l)/(s-l), α = l/p, β = m/q.
    m = ∞: p = 1, α = l, β = s - l.  ``closed=True`` also admits s = l
    and s = m, which the strict theorem excludes.
    """
    l, s, m = _check_order(l, s, m, closed)
    if m == INF:
        return InterpolationSplit(Fraction(1), INF, l, s - l, l, s - l)
    p = INF if s == m else (m - l) / (m - s)
    q = INF if s == l else (m - l) / (s - l)
    alpha = l * reciprocal(p)
    beta = m * reciprocal(q)
    return InterpolationSplit(p, q, alpha, beta, l * (m - s) / (m - l), m * (s - l) / (m - l))


# --------------------------------------------------------------------------
# Power sums and norms
# --------------------------------------------------------------------------


def _pow(x: mpfr, e: Fraction) -> mpfr:
    if e.denominator == 1:
        return x ** int(e)
    return x ** mpfr(e)


def power_sums(f: WeightedSequence, exponents: Sequence[Fraction], prec: int = DEFAULT_PREC) -> list:
    """Return [Σ w·v^e for e in exponents] evaluated at ``prec`` bits.

    Rational exponents with a small common denominator D share one
    correctly rounded D-th root per atom, followed by integer powers.
    ``0^0`` is taken as 1.
    """
    exponents = [Fraction(e) for e in exponents]
    degree = math.lcm(*(e.denominator for e in exponents)) if exponents else 1
    shared_root = (
        degree > 1
        and degree <= _MAX_ROOT_DEGREE
        and all(e * degree <= _MAX_ROOT_POWER for e in exponents)
    )
    with working_precision(prec):
        sums = [mpfr(0)] * len(exponents)
        if shared_root:
            scaled = [int(e * degree) for e in exponents]
            for v, w in f:
                root = gmpy2.root(_to_real(v), degree)
                w = _to_real(w)
                sums = [acc + w * root**k for acc, k in zip(sums, scaled)]
        else:
            exps = [int(e) if e.denominator == 1 else mpfr(e) for e in exponents]
            for v, w in f:
                v, w = _to_real(v), _to_real(w)
                sums = [acc + w * v**e for acc, e in zip(sums, exps)]
        return sums


def _to_real(x) -> mpfr:
    return mpfr(x) if type(x) in (int, float, mpfr) else real(x)


def _sup(f: WeightedSequence, prec: int) -> mpfr:
    with working_precision(prec):
        return max((real(v) for v in f.values), default=mpfr(0))


def p_norm(f: WeightedSequence, p, prec: int = DEFAULT_PREC) -> mpfr:
    """(Σ w·v^p)^(1/p); the max value for p = ∞ (weights ignored)."""
    p = as_exponent(p)
    if p == INF:
        return _sup(f, prec)
    (total,) = power_sums(f, [p], prec)
    with working_precision(prec):
        return total if p == 1 else _pow(total, 1 / p)


def holder_check(f: WeightedSequence, g: WeightedSequence, p, prec: int = DEFAULT_PREC) -> BoundReport:
    """Check ||fg||_1 <= ||f||_p ||g||_q on a shared weighted measure."""
    if len(f) != len(g):
        raise ValueError(f"sequences differ in length ({len(f)} vs {len(g)})")
    if f.weights != g.weights:
        raise ValueError("sequences must share the same weights")
    p = as_exponent(p)
    q = conjugate(p)
    with working_precision(prec):
        lhs = mpfr(0)
        for (a, w), (b, _) in zip(f, g):
            lhs += real(w) * real(a) * real(b)
        rhs = p_norm(f, p, prec) * p_norm(g, q, prec)
        return BoundReport.compare(lhs, rhs, verification_tolerance(prec) * rhs, "holder", p=p, q=q)


def convex_holder_bound(f: WeightedSequence, l, s, m, prec: int = DEFAULT_PREC, closed: bool = False) -> BoundReport:
    """Check ||f||_s^s against the l/m interpolation bound.

    ``lhs`` is Σ w·v^s; ``rhs`` is ||f||_l^exp_l · ||f||_m^exp_m.
    A violation beyond relative 2^(-prec/2) is reported through
    ``holds=False``; nothing is raised.
    """
    split = interpolation_exponents(l, s, m, closed)
    l, s, m = as_exponent(l), as_exponent(s), as_exponent(m)
    finite = [s, l] + ([m] if m != INF else [])
    sums = power_sums(f, finite, prec)
    with working_precision(prec):
        lhs, sum_l = sums[0], sums[1]
        # ||f||_l^exp_l = (Σ w v^l)^(exp_l/l)
        rhs = _pow(sum_l, split.exp_l / l)
        if m == INF:
            rhs *= _pow(_sup(f, prec), split.exp_m)
        else:
            rhs *= _pow(sums[2], split.exp_m / m)
        return BoundReport.compare(
            lhs, rhs, verification_tolerance(prec) * rhs, "convex_holder", l=l, s=s, m=m, split=split
        )


def bound_from_norms(norm_l, norm_m, l, s, m, prec: int = DEFAULT_PREC, closed: bool = False) -> mpfr:
    """norm_l^exp_l · norm_m^exp_m for norms already known."""
    split = interpolation_exponents(l, s, m, closed)
    with working_precision(prec):
        norm_l, norm_m = real(norm_l), real(norm_m)
        if norm_l < 0 or norm_m < 0:
            raise ValueError("norms must be nonnegative")
        return _pow(norm_l, split.exp_l) * _pow(norm_m, split.exp_m)
