"""Command-line front end.

    convex-holder zeta-table 5
    convex-holder check dinu --trials 100000 --seed 7
    convex-holder check binomial --N 50 --s 1.5
    convex-holder bound --l 1 --s 1.25 --m inf --values 0.1111,0.1111,0.1111

Exit codes: 0 when every checked inequality holds, 1 when a violation is
found (the witness is printed), 2 on usage errors.
"""

from __future__ import annotations

import functools
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click
import gmpy2

from . import combinatorial_bounds as comb
from . import norm_core, simplex, special_bounds, zeta_bounds
from .numerics import DEFAULT_PREC, format_real, pi_value, real, working_precision
from .render import FORMATS, render

PREC_ENV = "HOLDER_PRECISION_BITS"


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PREC
    seed: int = 0
    trials: int = 100_000
    format: str = "markdown"
    digits: int = 15

    def __post_init__(self):
        if self.precision_bits < 64:
            raise click.UsageError("--prec must be at least 64")
        if self.trials < 1:
            raise click.UsageError("--trials must be positive")
        if not 1 <= self.digits <= self.precision_bits * 0.3:
            raise click.UsageError(f"--digits must lie in [1, {int(self.precision_bits * 0.3)}] at this precision")
        if not 0 <= self.seed < 2**64:
            raise click.UsageError("--seed must be a 64-bit unsigned integer")


def run_options(func):
    """Shared precision/format options; passes a RunConfig as ``config``."""

    @click.option("--prec", "precision_bits", type=int, default=DEFAULT_PREC, envvar=PREC_ENV,
                  show_default=True, help=f"Working precision in bits (env {PREC_ENV}).")
    @click.option("--seed", type=int, default=0, show_default=True, help="Seed for sampled checks.")
    @click.option("--trials", type=int, default=100_000, show_default=True, help="Samples for randomised checks.")
    @click.option("--format", "fmt", type=click.Choice(FORMATS), default="markdown", show_default=True)
    @click.option("--digits", type=int, default=15, show_default=True, help="Significant digits printed.")
    @functools.wraps(func)
    def wrapper(precision_bits, seed, trials, fmt, digits, **kwargs):
        config = RunConfig(precision_bits, seed, trials, fmt, digits)
        return func(config=config, **kwargs)

    return wrapper


def _emit(config: RunConfig, rows, notes=(), meta=None) -> None:
    click.echo(render(rows, config.format, config.digits, notes, meta), nl=False)


def _finish(all_hold: bool, witness: str | None = None) -> None:
    if not all_hold:
        click.echo("inequality violated" + (f": {witness}" if witness else ""), err=True)
        sys.exit(1)


@click.group()
def cli():
    """Convex Hölder interpolation bounds, checked at high precision."""


# --------------------------------------------------------------------------
# zeta-table
# --------------------------------------------------------------------------


@cli.command("zeta-table")
@click.argument("k_max", type=int, default=5)
@run_options
def zeta_table_cmd(k_max: int, config: RunConfig):
    """ζ(2k+1) next to the bound √(ζ(2k)ζ(2k+2)) for k = 1..K_MAX."""
    if k_max < 1:
        raise click.BadParameter("K_MAX must be >= 1", param_hint="K_MAX")
    rows_out, notes = [], []
    rows = zeta_bounds.zeta_table(k_max, config.precision_bits)
    for row in rows:
        note = ""
        if row.printed_matches is False:
            note = "†"
            printed = row.printed_form
            notes.append(
                f"† k={row.odd_index}: printed radical {printed} evaluates to "
                f"{format_real(printed.value(config.precision_bits), 6)}; exact form shown"
            )
        entry = {
            "2k+1": row.odd_index,
            "zeta": row.zeta_value.estimate,
            "bound": row.bound_numeric,
            "closed_form": row.bound_closed.to_unicode() + note,
            "ratio": row.ratio,
            "holds": row.holds,
        }
        if config.format == "json":
            entry["closed_form"] = row.bound_closed.to_unicode()
            entry["closed_form_exact"] = row.bound_closed.to_json()
            entry["zeta_error"] = row.zeta_value.error_bound
            entry["printed_form_matches"] = row.printed_matches
        elif config.format == "csv":
            entry["closed_form"] = row.bound_closed.to_unicode()
            entry["printed_form_matches"] = row.printed_matches
        rows_out.append(entry)
    _emit(config, rows_out, notes if config.format != "csv" else ())
    _finish(all(r.holds for r in rows))


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------

SUBJECTS = ("holder", "dinu", "general", "binomial", "gamma", "beta", "integral")

_INTEGRANDS = {
    "sin": (gmpy2.sin, None),
    "x": (lambda x: x, (0, 1)),
    "x2": (lambda x: x * x, (0, 1)),
    "exp": (lambda x: gmpy2.exp(-x), (0, 1)),
}


def _report_row(report: norm_core.BoundReport, **params) -> dict:
    row = dict(params)
    row.update(lhs=report.lhs, rhs=report.rhs, margin=report.margin, holds=report.holds)
    return row


def _rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a number: {text!r}", param_hint=name) from None


@cli.command("check")
@click.argument("subject", type=click.Choice(SUBJECTS))
@click.option("--n", "n", type=int, default=None, help="Simplex dimension (general; dinu uses 3).")
@click.option("--m", "m_int", type=int, default=None, help="Integer m in s = 1 + 1/m (dinu, general).")
@click.option("--grid-depth", type=int, default=6, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--N", "big_n", type=int, default=50, show_default=True, help="Binomial N.")
@click.option("--s", "s_values", multiple=True, help="Exponent s (repeatable).")
@click.option("--p", "p_value", default=None, help="Fixed Hölder exponent (holder); random if omitted.")
@click.option("--x", "x_values", multiple=True, help="Beta x (repeatable); grid if omitted.")
@click.option("--y", "y_values", multiple=True, help="Gamma/Beta y (repeatable); sampled if omitted.")
@click.option("--f", "integrand", type=click.Choice(sorted(_INTEGRANDS)), default="sin", show_default=True)
@click.option("--a", "lower", default=None, help="Integration lower limit.")
@click.option("--b", "upper", default=None, help="Integration upper limit.")
@run_options
def check_cmd(subject, n, m_int, grid_depth, workers, big_n, s_values, p_value, x_values, y_values,
              integrand, lower, upper, config: RunConfig):
    """Run one family of inequality checks and report every comparison."""
    prec = config.precision_bits
    witness = None
    if subject in ("dinu", "general"):
        n = 3 if subject == "dinu" else (n or 4)
        m_int = m_int or 4
        if n < 3 or m_int < 1:
            raise click.UsageError("need --n >= 3 and --m >= 1")
        result = simplex.verify_general_inequality(
            n, m_int, config.trials, grid_depth, config.seed, prec, workers
        )
        data = result.to_json(config.digits)
        rows = [{
            "n": n, "m": m_int, "trials": config.trials, "seed": config.seed,
            "max_lhs": result.report.lhs, "argmax": " ".join(data["argmax"]),
            "bound": result.report.rhs, "premise_violations": result.premise_violations,
            "holds": result.holds,
        }]
        if config.format == "json":
            rows[0]["argmax"] = data["argmax"]
        ok = result.holds
        witness = None if ok else f"a = ({', '.join(data['argmax'])})"
    elif subject == "binomial":
        if big_n < 1 or big_n > comb.BRUTE_FORCE_MAX_N:
            raise click.BadParameter(f"N must lie in [1, {comb.BRUTE_FORCE_MAX_N}]", param_hint="--N")
        rows = []
        for text in s_values or ("1.5",):
            s = _rational(text, "--s")
            if not 1 <= s <= 2:
                raise click.BadParameter("s must lie in [1, 2]", param_hint="--s")
            brute = comb.binomial_moment_brute(big_n, s, prec)
            bound = comb.binomial_moment_bound(big_n, s, prec)
            with working_precision(prec):
                report = norm_core.BoundReport.compare(brute, bound, norm_core.verification_tolerance(prec) * bound)
            rows.append(_report_row(report, N=big_n, s=str(s)))
        ok = all(r["holds"] for r in rows)
    elif subject == "gamma":
        ys = [_rational(t, "--y") for t in y_values] or _sample_ys(config.seed)
        rows = []
        for y in ys:
            if not y > 1:
                raise click.BadParameter("y must exceed 1", param_hint="--y")
            report = special_bounds.check_gamma(y, prec)
            rows.append(_report_row(report, y=str(y), l=report.details["l"]))
        ok = all(r["holds"] for r in rows)
    elif subject == "beta":
        if bool(x_values) != bool(y_values):
            raise click.UsageError("give both --x and --y, or neither for the default grid")
        if x_values:
            pairs = [(_rational(x, "--x"), _rational(y, "--y")) for x in x_values for y in y_values]
        else:
            grid = [1 + Fraction(5 * i, 19) for i in range(20)]
            pairs = [(x, y) for x in grid for y in grid]
        rows = []
        for x, y in pairs:
            if x < 1 or y < 1:
                raise click.BadParameter("x and y must be >= 1")
            rows.append(_report_row(special_bounds.check_beta(x, y, prec), x=str(x), y=str(y)))
        ok = all(r["holds"] for r in rows)
    elif subject == "integral":
        f, default_range = _INTEGRANDS[integrand]
        if default_range is None:
            default_range = (0, pi_value(prec + 16) / 2)
        a = real(lower) if lower is not None else default_range[0]
        b = real(upper) if upper is not None else default_range[1]
        rows = []
        for text in s_values or ("1.5",):
            s = _rational(text, "--s")
            if not 1 < s < 2:
                raise click.BadParameter("s must lie in (1, 2)", param_hint="--s")
            report = special_bounds.lp_integral_bound(f, a, b, s, prec=prec)
            rows.append(_report_row(report, f=integrand, s=str(s)))
        ok = all(r["holds"] for r in rows)
    else:  # holder
        rows, ok, witness = _holder_fuzz(config, p_value)
    _emit(config, rows)
    _finish(ok, witness)


def _sample_ys(seed: int, count: int = 200) -> list[Fraction]:
    rng = random.Random(seed)
    return [Fraction(rng.randrange(1_000_001, 50_000_000), 1_000_000) for _ in range(count)]


def _holder_fuzz(config: RunConfig, p_text):
    rng = random.Random(config.seed)
    fixed = norm_core.as_exponent(p_text) if p_text is not None else None
    worst = None
    violations = 0
    witness = None
    for _ in range(config.trials):
        size = rng.randint(1, 20)
        weights = [Fraction(rng.randint(1, 500), 100) for _ in range(size)]
        f = norm_core.WeightedSequence([Fraction(rng.randint(0, 1000), 100) for _ in range(size)], weights)
        g = norm_core.WeightedSequence([Fraction(rng.randint(0, 1000), 100) for _ in range(size)], weights)
        p = fixed if fixed is not None else 1 + Fraction(rng.randint(0, 70), 10)
        report = norm_core.holder_check(f, g, p, config.precision_bits)
        with working_precision(config.precision_bits):
            relative = report.margin / report.rhs if report.rhs else gmpy2.mpfr(0)
        if worst is None or relative < worst:
            worst = relative
        if not report.holds:
            violations += 1
            witness = witness or f"p={p}, f={[str(v) for v in f.values]}, g={[str(v) for v in g.values]}"
    row = {
        "pairs": config.trials,
        "p": str(fixed) if fixed is not None else "random",
        "violations": violations,
        "min_relative_margin": worst,
        "holds": violations == 0,
    }
    return [row], violations == 0, witness


# --------------------------------------------------------------------------
# bound
# --------------------------------------------------------------------------


def _parse_sequence(text: str, weights_text: str | None) -> norm_core.WeightedSequence:
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            lines = path.read_text().splitlines()
        except OSError as exc:
            raise click.BadParameter(f"cannot read {path}: {exc.strerror}", param_hint="--values") from None
        values, weights = [], []
        for number, line in enumerate(lines, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = [part.strip() for part in line.split(",")]
            if len(fields) > 2:
                raise click.BadParameter(f"{path}:{number}: expected 'value[,weight]'", param_hint="--values")
            values.append(_parse_entry(fields[0], f"{path}:{number}"))
            weights.append(_parse_entry(fields[1], f"{path}:{number}") if len(fields) == 2 else Fraction(1))
    else:
        values = [_parse_entry(t, "--values") for t in text.split(",") if t.strip()]
        weights = [Fraction(1)] * len(values)
    if weights_text is not None:
        weights = [_parse_entry(t, "--weights") for t in weights_text.split(",") if t.strip()]
    try:
        return norm_core.WeightedSequence(values, weights)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--values") from None


def _parse_entry(text: str, where: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"malformed number {text!r}", param_hint=where) from None


@cli.command("bound")
@click.option("--l", "l_text", required=True, help="Lower exponent l >= 1.")
@click.option("--s", "s_text", required=True, help="Interpolated exponent, l < s < m.")
@click.option("--m", "m_text", required=True, help="Upper exponent (may be 'inf').")
@click.option("--values", "values_text", default=None, help="Comma list, or @path (value[,weight] per line).")
@click.option("--weights", "weights_text", default=None, help="Comma list of weights for inline values.")
@click.option("--norm-l", default=None, help="Known ||f||_l (use with --norm-m instead of --values).")
@click.option("--norm-m", default=None, help="Known ||f||_m.")
@run_options
def bound_cmd(l_text, s_text, m_text, values_text, weights_text, norm_l, norm_m, config: RunConfig):
    """Evaluate ||f||_l^exp_l · ||f||_m^exp_m and compare with ||f||_s^s."""
    try:
        l, s, m = (norm_core.as_exponent(t) for t in (l_text, s_text, m_text))
        split = norm_core.interpolation_exponents(l, s, m)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(str(exc)) from None
    meta = {"l": str(l), "s": str(s), "m": "inf" if m == norm_core.INF else str(m),
            "exp_l": str(split.exp_l), "exp_m": str(split.exp_m)}
    prec = config.precision_bits
    if values_text is not None:
        if norm_l is not None or norm_m is not None:
            raise click.UsageError("give either --values or --norm-l/--norm-m, not both")
        f = _parse_sequence(values_text, weights_text)
        report = norm_core.convex_holder_bound(f, l, s, m, prec)
        rows = [_report_row(report, atoms=len(f))]
        _emit(config, rows, meta=meta)
        _finish(report.holds, None if report.holds else f"values from {values_text}")
        return
    if norm_l is None or norm_m is None:
        raise click.UsageError("give --values, or both --norm-l and --norm-m")
    try:
        with working_precision(prec):
            nl, nm = real(norm_l), real(norm_m)
        rhs = norm_core.bound_from_norms(nl, nm, l, s, m, prec)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(str(exc)) from None
    _emit(config, [{"norm_l": nl, "norm_m": nm, "rhs": rhs}], meta=meta)


def main(argv=None):
    cli.main(args=argv, prog_name="convex-holder")


if __name__ == "__main__":
    main()
