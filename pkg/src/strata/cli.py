"""Command-line front door for batch reproduction of the toolkit's numbers.

Subcommands: ``r0``, ``grades``, ``sweep``, ``table``, ``locus``, ``serve``.
Exit codes: 0 on success, 2 on input/validation problems, 3 on numerical
failure.  Outputs are deterministic: fixed rounding, fixed grid generation,
no timestamps.  ``STRATA_THREADS`` caps internal parallelism.
"""

from __future__ import annotations

import json
import sys

import click

from .comparison import (DEFAULT_B_FLOOR, build_comparison_table, build_gradation,
                         extract_locus, min_r0, r0_at, sweep_grid)
from .errors import (CalibrationError, ConfigError, ConvergenceError, DomainError,
                     GradabilityError, NoLocusError, NotInStrategyError)
from .params import calibrate_baseline, load_params, load_params_file
from .r0 import compute_R0
from .strategies import (CohortPartition, StrategicScale, Substrategy,
                         apply_scale, load_catalog)

EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

ANCHOR_R0 = 2.854
DEFAULT_GRADE_AS = (0.2, 0.5, 0.8)

_INPUT_ERRORS = (ConfigError, DomainError, GradabilityError, NoLocusError,
                 NotInStrategyError, FileNotFoundError, json.JSONDecodeError)
_NUMERIC_ERRORS = (ConvergenceError, CalibrationError, AssertionError)


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    try:
        return fn()
    except _INPUT_ERRORS as exc:
        _fail(EXIT_VALIDATION, exc)
    except _NUMERIC_ERRORS as exc:
        _fail(EXIT_NUMERIC, exc)


def _parse_cohorts(text):
    if not text:
        return frozenset()
    try:
        return frozenset(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise DomainError(f"cohort list {text!r} is not comma-separated integers")


def _baseline(params_path, calibrate):
    params = load_params_file(params_path) if params_path else load_params()
    if calibrate is not None:
        params = calibrate_baseline(params, calibrate)
    return params


def _write_output(text, output_path):
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text)
        click.echo(f"wrote {output_path}")
    else:
        click.echo(text, nl=not text.endswith("\n"))


@click.group()
def main():
    """Grade and compare epidemic intervention strategies via their R0."""


@main.command("r0")
@click.option("--params", "params_path", type=click.Path(), default=None,
              help="JSON parameter config (defaults bundled).")
@click.option("--calibrate", type=float, default=ANCHOR_R0, show_default=True,
              help="Rescale transmission so the unrestricted R0 equals this; "
                   "pass 0 to skip calibration.")
@click.option("--horizontal-a", type=float, default=None,
              help="Uniform contact-reduction multiplier on all cohorts.")
@click.option("--wb", default="", help="Cohorts under contact reduction, e.g. 1,2,3.")
@click.option("--wg", default="", help="Cohorts under testing, e.g. 4,5.")
@click.option("-a", "a_value", type=float, default=1.0, show_default=True,
              help="Contact multiplier on targeted cohorts.")
@click.option("-b", "b_value", type=float, default=1.0, show_default=True,
              help="Detection-time fraction of the infectious period.")
@click.option("--raw", is_flag=True, help="Full-precision JSON instead of 3 decimals.")
def run_r0(params_path, calibrate, horizontal_a, wb, wg, a_value, b_value, raw):
    """Print the reproduction number and its breakdown for one configuration."""
    def work():
        baseline = _baseline(params_path, calibrate or None)
        partition = CohortPartition()
        if horizontal_a is not None:
            if not 0.0 <= horizontal_a <= 1.0:
                raise DomainError("--horizontal-a must lie in [0, 1]")
            scale = StrategicScale(partition.all_cohorts, frozenset(), horizontal_a, 1.0)
        else:
            scale = StrategicScale(_parse_cohorts(wb), _parse_cohorts(wg),
                                   a_value, b_value)
        applied = apply_scale(scale, baseline, partition).applied
        breakdown = compute_R0(applied)
        if raw:
            click.echo(json.dumps(breakdown.to_json(), indent=2))
        else:
            click.echo(f"R0 = {breakdown.r0:.3f}")
            click.echo(f"  asymptomatic piece  R_A = {breakdown.r_a:.6e}")
            click.echo(f"  symptomatic piece   R_I = {breakdown.r_i:.6e}")
            click.echo(f"  prefactor               = {breakdown.prefactor:.3f}")
    _guarded(work)


@main.command("grades")
@click.option("--params", "params_path", type=click.Path(), default=None)
@click.option("--calibrate", type=float, default=ANCHOR_R0, show_default=True)
@click.option("--a-values", default=None,
              help="Comma-separated intensities; default 0,0.1,...,0.9.")
def run_grades(params_path, calibrate, a_values):
    """Print the horizontal-lockdown intensity table (a, contact reduction, R0)."""
    def work():
        baseline = _baseline(params_path, calibrate or None)
        if a_values:
            intensities = [float(tok) for tok in a_values.split(",")]
        else:
            intensities = [round(0.1 * i, 1) for i in range(10)]
        base_r0 = compute_R0(baseline).r0
        click.echo("a      reduction   R0")
        for a in intensities:
            if not 0.0 <= a < 1.0:
                raise DomainError("intensities must lie in [0, 1)")
            click.echo(f"{a:<6.2g} {(1 - a) * 100:>6.0f}%   {a * base_r0:.3f}")
    _guarded(work)


@main.command("sweep")
@click.option("--params", "params_path", type=click.Path(), default=None)
@click.option("--calibrate", type=float, default=ANCHOR_R0, show_default=True)
@click.option("--wb", default="", help="Cohorts under contact reduction.")
@click.option("--wg", default="", help="Cohorts under testing.")
@click.option("--row", type=int, default=None,
              help="Catalog row 1..16 instead of explicit --wb/--wg.")
@click.option("--res", type=int, default=64, show_default=True, help="Grid resolution.")
@click.option("--b-floor", type=float, default=DEFAULT_B_FLOOR, show_default=True,
              help="Lower bound of the testing axis.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", "output_path", type=click.Path(), default=None)
@click.option("--raw", is_flag=True, help="Full precision in JSON output.")
def run_sweep(params_path, calibrate, wb, wg, row, res, b_floor, fmt, output_path, raw):
    """Evaluate R0 over an (a, b) grid; emits heatmap-ready CSV or JSON."""
    def work():
        if res < 2:
            raise DomainError("--res must be at least 2")
        baseline = _baseline(params_path, calibrate or None)
        sub = _select_substrategy(wb, wg, row)
        grid = sweep_grid(sub, baseline, res, res, b_floor=b_floor)
        if fmt == "json":
            text = json.dumps(grid.to_json(ndigits=None if raw else 6), indent=2) + "\n"
        else:
            text = grid.to_csv()
        _write_output(text, output_path)
    _guarded(work)


def _select_substrategy(wb, wg, row):
    if row is not None:
        catalog = load_catalog()
        if not 1 <= row <= len(catalog):
            raise DomainError(f"--row must lie in 1..{len(catalog)}")
        return catalog[row - 1]
    return Substrategy(_parse_cohorts(wb), _parse_cohorts(wg), name="ad hoc")


@main.command("table")
@click.option("--params", "params_path", type=click.Path(), default=None)
@click.option("--calibrate", type=float, default=ANCHOR_R0, show_default=True)
@click.option("--substrategies", "catalog_path", type=click.Path(), default=None,
              help="Substrategy catalog JSON (defaults bundled).")
@click.option("--grades", "grades_text", default=None,
              help="Comma-separated horizontal intensities; default 0.2,0.5,0.8.")
@click.option("--format", "fmt", type=click.Choice(["md", "csv", "json"]),
              default="md", show_default=True)
@click.option("--no-loci", is_flag=True, help="Skip representative locus extraction.")
@click.option("--out", "output_path", type=click.Path(), default=None)
def run_table(params_path, calibrate, catalog_path, grades_text, fmt, no_loci,
              output_path):
    """Build the substrategy-versus-grades comparison table with coverages."""
    def work():
        baseline = _baseline(params_path, calibrate or None)
        catalog = load_catalog(catalog_path)
        if not catalog:
            raise DomainError("substrategy catalog is empty")
        intensities = ([float(t) for t in grades_text.split(",")]
                       if grades_text else list(DEFAULT_GRADE_AS))
        grades = build_gradation(intensities, baseline)
        table = build_comparison_table(catalog, grades, baseline,
                                       with_loci=not no_loci)
        if fmt == "json":
            text = json.dumps(table.to_json(ndigits=6), indent=2) + "\n"
        elif fmt == "csv":
            text = table.to_csv()
        else:
            text = table.to_markdown()
        _write_output(text, output_path)
    _guarded(work)


@main.command("locus")
@click.option("--params", "params_path", type=click.Path(), default=None)
@click.option("--calibrate", type=float, default=ANCHOR_R0, show_default=True)
@click.option("--row", type=int, required=True, help="Catalog row 1..16.")
@click.option("--grade", "grade_name", default="M", show_default=True,
              help="Grade name (H/M/L) or an explicit R0 value.")
@click.option("--points", type=int, default=3, show_default=True)
@click.option("--tol", type=float, default=1e-3, show_default=True)
def run_locus(params_path, calibrate, row, grade_name, points, tol):
    """Print equal-R0 locus points (a, detection day, r0) for a catalog row."""
    def work():
        baseline = _baseline(params_path, calibrate or None)
        sub = _select_substrategy("", "", row)
        grades = build_gradation(DEFAULT_GRADE_AS, baseline)
        by_name = {g.name: g for g in grades}
        if grade_name in by_name:
            grade = by_name[grade_name]
        else:
            try:
                value = float(grade_name)
            except ValueError:
                raise DomainError(f"unknown grade {grade_name!r}")
            from .comparison import Grade
            grade = Grade(name=grade_name, r0_value=value, provenance_a=float("nan"))
        pts = extract_locus(sub, grade, baseline, n_points=points, tol=tol)
        click.echo("a         contact_reduction  detection_day  r0")
        for a, b, r0 in pts:
            click.echo(f"{a:<9.4f} {(1 - a) * 100:>8.1f}%          "
                       f"{b * 14:>6.2f}       {r0:.3f}")
    _guarded(work)


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--params", "params_path", type=click.Path(), default=None)
def run_serve(port, host, params_path):
    """Serve the HTTP API (and the bundled explorer UI, when built)."""
    def work():
        import uvicorn

        from .service import create_app
        app = create_app(params_path=params_path)
        uvicorn.run(app, host=host, port=port, log_level="info")
    _guarded(work)


if __name__ == "__main__":
    main()
