"""Product inequalities on the probability simplex.

For a point a of the open simplex the leave-one-out products
g_k = Π_{i≠k} a_i satisfy ||g||_1 <= (n-1)/(2n) and ||g||_∞ <= 1/4, so
the interpolation bound with l = 1, m = ∞ gives::

    Σ_k g_k^(1+1/m) <= (n-1)/(2n) · (1/4)^(1/m)

For n = 3, m = 4 this is (ab)^(5/4) + (bc)^(5/4) + (ca)^(5/4) <= 0.2357...
The same constant falls out of a chain of m two-factor Hölder steps
(:func:`holder_chain`).  For n > 3 the display is checked empirically by
:func:`verify_general_inequality`, which reports witnesses instead of
raising.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from gmpy2 import mpfr

from .norm_core import (
    INF,
    BoundReport,
    WeightedSequence,
    as_exponent,
    conjugate,
    p_norm,
    power_sums,
    verification_tolerance,
)
from .numerics import DEFAULT_PREC, real, working_precision

__all__ = [
    "ChainCertificate",
    "ChainStep",
    "SimplexPoint",
    "SimplexVerification",
    "dinu_lhs",
    "general_simplex_bound",
    "holder_chain",
    "leave_one_out_products",
    "pairwise_sum",
    "pairwise_sum_bound",
    "verify_general_inequality",
]

# Samples are clamped away from the boundary of the simplex by this much.
BOUNDARY_CLAMP = 1e-12
SHARD_SIZE = 8192
REFINE_ITERATIONS = 100
# Relative slack for the float64 premise checks on sampled points.
FLOAT_SLACK = 1e-12


@dataclass(frozen=True)
class SimplexPoint:
    """Strictly positive coordinates summing to one."""

    coordinates: tuple

    def __post_init__(self):
        coords = tuple(Fraction(c) if isinstance(c, str) else c for c in self.coordinates)
        if len(coords) < 2:
            raise ValueError("a simplex point needs at least two coordinates")
        if any(not c > 0 for c in coords):
            raise ValueError("coordinates must be strictly positive")
        total = sum(Fraction(c) for c in coords)
        if abs(total - 1) > Fraction(1, 2**26):
            raise ValueError(f"coordinates must sum to 1, got {float(total)!r}")
        object.__setattr__(self, "coordinates", coords)

    @classmethod
    def centroid(cls, n: int) -> "SimplexPoint":
        return cls((Fraction(1, n),) * n)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def as_floats(self) -> list[float]:
        return [float(c) for c in self.coordinates]


def pairwise_sum_bound(n: int) -> Fraction:
    """max of Σ_{i<j} a_i a_j over the simplex, attained at the centroid."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    return Fraction(n - 1, 2 * n)


def pairwise_sum(a: SimplexPoint):
    """Σ_{i<j} a_i a_j = (1 - Σ a_i²)/2 on the simplex, evaluated directly."""
    c = a.coordinates
    return sum(c[i] * c[j] for i in range(len(c)) for j in range(i + 1, len(c)))


def leave_one_out_products(a: SimplexPoint) -> WeightedSequence:
    """g_k = Π_{i≠k} a_i with unit weights (ab, bc, ca ordering for n = 3)."""
    c = a.coordinates
    n = len(c)
    if n == 3:
        # Keep the ordering used for three variables: ab, bc, ca.
        values = (c[0] * c[1], c[1] * c[2], c[2] * c[0])
    else:
        values = tuple(math.prod(c[i] for i in range(n) if i != k) for k in range(n))
    return WeightedSequence.uniform(values)


def dinu_lhs(a: SimplexPoint, s=Fraction(5, 4), prec: int = DEFAULT_PREC) -> mpfr:
    """Σ_k g_k^s over the leave-one-out products."""
    s = as_exponent(s)
    (total,) = power_sums(leave_one_out_products(a), [s], prec)
    return total


def general_simplex_bound(n: int, m_int: int, prec: int = DEFAULT_PREC) -> mpfr:
    """((n-1)/(2n)) · 4^(-1/m_int)."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")
    _check_m(m_int)
    with working_precision(prec):
        return mpfr(pairwise_sum_bound(n)) * mpfr(4) ** (-(mpfr(1) / m_int))


def _check_m(m_int) -> int:
    if not isinstance(m_int, int) or isinstance(m_int, bool) or m_int < 1:
        raise ValueError(f"m_int must be a positive integer, got {m_int!r}")
    return m_int


# --------------------------------------------------------------------------
# Hölder chain
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    """One Hölder step Σ f·f^(1/q) <= ||f||_p · ||f^(1/q)||_q.

    ``intermediate_bound`` is the back-substituted bound on Σ f^(1+1/q);
    ``lhs`` is that sum evaluated directly.
    """

    step_index: int
    q: Fraction
    p: object
    intermediate_bound: mpfr
    lhs: mpfr


@dataclass(frozen=True)
class ChainCertificate:
    s: Fraction
    m_int: int
    steps: tuple
    final_bound: mpfr

    @property
    def holds(self) -> bool:
        # slack is applied as a difference so no 1 + ε is ever rounded
        return all(step.lhs - step.intermediate_bound <= step.intermediate_bound * mpfr(2) ** -100 for step in self.steps)


def holder_chain(
    m_int: int,
    f: WeightedSequence,
    prec: int = DEFAULT_PREC,
    caps: Optional[tuple] = None,
) -> ChainCertificate:
    """Replay the recursive Hölder argument for Σ f^(1+1/m_int).

    Step j uses q = m_int - j + 1 and p = q/(q-1), bounding
    X_q = Σ f^(1+1/q) by X_(q-1)^((q-1)/q) · ||f||_1^(1/q); the last step
    (q = 1, p = ∞) gives X_1 <= ||f||_1 ||f||_∞.  Back-substitution
    yields X_q <= ||f||_1 · ||f||_∞^(1/q) at every level.

    ``caps`` = (cap on ||f||_1, cap on ||f||_∞) replaces the actual norms
    with known upper bounds, as in the three-variable argument where
    they are 1/3 and 1/4.
    """
    _check_m(m_int)
    if not f.has_unit_weights():
        raise ValueError("the chain is stated for unit weights")
    with working_precision(prec):
        if caps is None:
            total, top = p_norm(f, 1, prec), p_norm(f, INF, prec)
        else:
            total, top = real(caps[0]), real(caps[1])
        qs = list(range(m_int, 0, -1))
        direct = power_sums(f, [1 + Fraction(1, q) for q in qs], prec)

        # Back-substitution runs from q = 1 upwards.
        bounds = {1: total * top}
        for q in range(2, m_int + 1):
            bounds[q] = bounds[q - 1] ** (mpfr(q - 1) / q) * total ** (mpfr(1) / q)

        steps = tuple(
            ChainStep(j, Fraction(q), conjugate(q), bounds[q], lhs)
            for j, (q, lhs) in enumerate(zip(qs, direct), start=1)
        )
        return ChainCertificate(1 + Fraction(1, m_int), m_int, steps, bounds[m_int])


# --------------------------------------------------------------------------
# Empirical verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplexVerification:
    """Outcome of :func:`verify_general_inequality`.

    ``report.lhs`` is the largest left-hand side found (re-evaluated at
    full precision at ``argmax``); ``premise_violations`` counts samples
    breaking ||g||_1 <= (n-1)/(2n) or ||g||_∞ <= 1/4.
    """

    n: int
    m_int: int
    trials: int
    seed: int
    report: BoundReport
    argmax: SimplexPoint
    samples_checked: int
    max_l1: float
    max_linf: float
    premise_violations: int

    @property
    def holds(self) -> bool:
        return self.report.holds and self.premise_violations == 0

    def to_json(self, digits: int = 15) -> dict:
        from .numerics import format_real

        return {
            "n": self.n,
            "m": self.m_int,
            "trials": self.trials,
            "seed": self.seed,
            "max_lhs": format_real(self.report.lhs, digits),
            "argmax": [format_real(real(c), digits) for c in self.argmax.coordinates],
            "bound": format_real(self.report.rhs, digits),
            "holds": self.holds,
        }


def _loo_products(points: np.ndarray) -> np.ndarray:
    """Leave-one-out products row-wise via prefix/suffix products."""
    ones = np.ones((points.shape[0], 1))
    prefix = np.concatenate([ones, np.cumprod(points, axis=1)[:, :-1]], axis=1)
    suffix = np.concatenate([np.cumprod(points[:, ::-1], axis=1)[:, -2::-1], ones], axis=1)
    return prefix * suffix


def _clamp(points: np.ndarray) -> np.ndarray:
    points = np.maximum(points, BOUNDARY_CLAMP)
    return points / points.sum(axis=1, keepdims=True)


@dataclass
class _BatchSummary:
    best_value: float
    best_point: np.ndarray
    max_l1: float
    max_linf: float
    violations: int
    count: int


def _summarise(points: np.ndarray, s: float, l1_cap: float, linf_cap: float) -> _BatchSummary:
    g = _loo_products(points)
    lhs = (g**s).sum(axis=1)
    l1 = g.sum(axis=1)
    linf = g.max(axis=1)
    idx = int(np.argmax(lhs))
    bad = (l1 > l1_cap * (1 + FLOAT_SLACK)) | (linf > linf_cap * (1 + FLOAT_SLACK))
    return _BatchSummary(
        float(lhs[idx]), points[idx].copy(), float(l1.max()), float(linf.max()), int(bad.sum()), len(points)
    )


def _shard(n: int, count: int, seed: int, index: int, s: float, l1_cap: float, linf_cap: float) -> _BatchSummary:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    # Normalised i.i.d. exponentials are uniform on the simplex.
    points = _clamp(rng.standard_exponential((count, n)))
    return _summarise(points, s, l1_cap, linf_cap)


def _grid(n: int, depth: int) -> np.ndarray:
    """Compositions of ``depth`` into n nonnegative parts, scaled to the simplex."""
    rows = []
    for bars in itertools.combinations(range(depth + n - 1), n - 1):
        edges = (-1,) + bars + (depth + n - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(n)])
    return np.asarray(rows, dtype=float) / depth


def _special_points(n: int) -> np.ndarray:
    rows = [np.full(n, 1.0 / n)]
    for i, j in itertools.combinations(range(n), 2):
        row = np.zeros(n)
        row[i] = row[j] = 0.5
        rows.append(row)
    return np.asarray(rows)


def _refine(point: np.ndarray, s: float) -> np.ndarray:
    """Coordinate ascent moving mass between pairs with a shrinking step."""

    def value(p):
        return float((_loo_products(p[None, :]) ** s).sum())

    best, best_value = point.copy(), value(point)
    step = 0.1
    n = len(point)
    for _ in range(REFINE_ITERATIONS):
        improved = False
        for i, j in itertools.permutations(range(n), 2):
            delta = min(step, best[j] - BOUNDARY_CLAMP)
            if delta <= 0:
                continue
            trial = best.copy()
            trial[i] += delta
            trial[j] -= delta
            v = value(trial)
            if v > best_value:
                best, best_value, improved = trial, v, True
        if not improved:
            step /= 2
    return best


def _to_simplex_point(point: np.ndarray) -> SimplexPoint:
    coords = [Fraction(float(x)) for x in np.maximum(point, BOUNDARY_CLAMP)]
    total = sum(coords)
    return SimplexPoint(tuple(c / total for c in coords))


def verify_general_inequality(
    n: int,
    m_int: int,
    trials: int = 100_000,
    grid_depth: int = 6,
    seed: int = 0,
    prec: int = DEFAULT_PREC,
    workers: int = 1,
) -> SimplexVerification:
    """Search for the largest Σ g_k^(1+1/m) on the n-simplex.

    Candidates: ``trials`` uniform samples (sharded with seeds derived
    from (seed, shard index)), the compositions grid of ``grid_depth``,
    the centroid and the edge midpoints; the best one is refined by
    local ascent and re-evaluated at ``prec`` bits.  A violation is
    reported through ``holds=False`` with the witness in ``argmax``.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")
    _check_m(m_int)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s_exact = 1 + Fraction(1, m_int)
    s = float(s_exact)
    l1_cap, linf_cap = float(pairwise_sum_bound(n)), 0.25

    sizes = [min(SHARD_SIZE, trials - start) for start in range(0, trials, SHARD_SIZE)]
    jobs = [(n, size, seed, i, s, l1_cap, linf_cap) for i, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(lambda job: _shard(*job), jobs))
    else:
        summaries = [_shard(*job) for job in jobs]
    summaries.append(_summarise(_clamp(_grid(n, max(grid_depth, 1))), s, l1_cap, linf_cap))
    summaries.append(_summarise(_clamp(_special_points(n)), s, l1_cap, linf_cap))

    top = max(summaries, key=lambda b: b.best_value)
    refined = _refine(top.best_point, s)
    candidates = [_to_simplex_point(top.best_point), _to_simplex_point(refined), SimplexPoint.centroid(n)]
    values = [dinu_lhs(c, s_exact, prec) for c in candidates]
    best_index = max(range(len(values)), key=values.__getitem__)
    argmax, lhs = candidates[best_index], values[best_index]

    rhs = general_simplex_bound(n, m_int, prec)
    with working_precision(prec):
        report = BoundReport.compare(lhs, rhs, verification_tolerance(prec) * rhs, "simplex", n=n, m=m_int)
    return SimplexVerification(
        n=n,
        m_int=m_int,
        trials=trials,
        seed=seed,
        report=report,
        argmax=argmax,
        samples_checked=sum(b.count for b in summaries),
        max_l1=max(b.max_l1 for b in summaries),
        max_linf=max(b.max_linf for b in summaries),
        premise_violations=sum(b.violations for b in summaries),
    )
