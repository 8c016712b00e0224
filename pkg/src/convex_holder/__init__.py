"""Convex Hölder interpolation bounds for p-norms, verified numerically.

The core inequality: for 1 <= l < s < m <= ∞,
``||f||_s^s <= ||f||_l^(l(m-s)/(m-l)) · ||f||_m^(m(s-l)/(m-l))``, with
applications to odd zeta values, binomial moment sums, Γ, B, Lᵖ
integrals and products on the simplex.
"""

from .norm_core import (
    INF,
    BoundReport,
    InterpolationSplit,
    WeightedSequence,
    bound_from_norms,
    convex_holder_bound,
    holder_check,
    interpolation_exponents,
    p_norm,
)
from .numerics import DEFAULT_PREC, Enclosure, format_real

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PREC",
    "INF",
    "BoundReport",
    "Enclosure",
    "InterpolationSplit",
    "WeightedSequence",
    "bound_from_norms",
    "convex_holder_bound",
    "format_real",
    "holder_check",
    "interpolation_exponents",
    "p_norm",
]
