"""Gradation, coverage tables, grid sweeps and equal-R0 loci.

A *gradation* is an ascending list of reproduction-number targets achieved by
distinguished horizontal lockdowns.  A substrategy *covers* a grade when its
achievable reproduction-number range reaches down to that grade; since the
range always extends up to the baseline value, this reduces to comparing the
substrategy's minimum against the grade.  Row fractions of the resulting
check matrix are epidemiological coverage, column fractions social coverage.

The minimum is taken over the closure of the admissible (a, b) rectangle.
Its corner ``b = 0`` is the instant-detection limit: tested cohorts are
removed on detection day zero, which zeroes their symptomatic transmission
along with everything downstream of the first tested age.  That limit is
evaluated exactly by clipping the symptomatic transmission profile, so no
infinite rate ever enters a parameter set.

Sweeps and coverage checks are embarrassingly parallel; a thread pool capped
by the ``STRATA_THREADS`` environment variable is used and results are
assembled by index, so the output is deterministic regardless of evaluation
order.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GradabilityError, NoLocusError
from .params import DAYS_PER_YEAR, ParamSet
from .r0 import compute_R0
from .strategies import CohortPartition, Substrategy, apply_scale

# display floor for sweep grids: detection no faster than one day
DEFAULT_B_FLOOR = 1.0 / 14.0
DEFAULT_COVER_TOL = 1e-3
GRADE_NAMES_3 = ("H", "M", "L")


def format_percent(fraction) -> str:
    """Two-decimal percentage, truncated (2/3 renders as 66.66%)."""
    return f"{int(fraction * 10000) / 100:.2f}%"


def _max_workers():
    env = os.environ.get("STRATA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def _parallel_map(fn, items):
    items = list(items)
    if len(items) <= 1 or _max_workers() == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Grade:
    """A named reproduction-number threshold with its generating intensity."""

    name: str
    r0_value: float
    provenance_a: float

    def __post_init__(self):
        if self.r0_value <= 0:
            raise DomainError("grade value must be positive")


def build_gradation(horizontal_as, baseline: ParamSet, rel_tol=1e-8) -> list:
    """Grades ``a * R0(baseline)`` for the given lockdown intensities, ascending.

    Horizontal contact reduction rescales the reproduction number linearly,
    so the grade values follow from the baseline without further quadrature.
    Duplicate intensities would break injectivity and are rejected.
    """
    a_values = [float(a) for a in horizontal_as]
    if any(not 0.0 <= a < 1.0 for a in a_values):
        raise DomainError("horizontal intensities must lie in [0, 1)")
    if len(set(a_values)) != len(a_values):
        raise GradabilityError("duplicate intensities do not yield a gradation")
    base = compute_R0(baseline, rel_tol).r0
    ordered = sorted(a_values)
    names = (GRADE_NAMES_3 if len(ordered) == 3
             else tuple(f"G{i + 1}" for i in range(len(ordered))))
    return [Grade(name=names[i], r0_value=a * base, provenance_a=a)
            for i, a in enumerate(ordered)]


def scaled_params(baseline: ParamSet, sub_or_scale, a, b,
                  partition: CohortPartition = CohortPartition()) -> ParamSet:
    """Parameter set for intensity (a, b); ``b = 0`` is the instant-detection limit.

    For ``b > 0`` this is the plain Hadamard application.  At ``b = 0`` the
    symptomatic transmission profile is clipped to zero from the first tested
    cohort's lower boundary onward (detection on day zero removes those
    cohorts and starves every later age of survivors), with the removal rate
    left at baseline - the exact limit of the ``b -> 0`` family.
    """
    w_beta = frozenset(sub_or_scale.w_beta)
    w_gamma = frozenset(sub_or_scale.w_gamma)
    if b == 0.0 and w_gamma:
        element = apply_scale(Substrategy(w_beta, frozenset()).scale_at(a, 1.0),
                              baseline, partition)
        applied = element.applied
        first_tested = min(w_gamma)
        cut_days = partition.boundaries[first_tested - 1] * DAYS_PER_YEAR
        from dataclasses import replace
        return replace(applied, beta_i=applied.beta_i.clipped_after(cut_days))
    eff_b = 1.0 if not w_gamma else b
    element = apply_scale(Substrategy(w_beta, w_gamma).scale_at(a, eff_b),
                          baseline, partition)
    return element.applied


def r0_at(baseline: ParamSet, sub: Substrategy, a, b,
          partition: CohortPartition = CohortPartition(), rel_tol=1e-8) -> float:
    return compute_R0(scaled_params(baseline, sub, a, b, partition), rel_tol).r0


def min_r0(sub: Substrategy, baseline: ParamSet,
           partition: CohortPartition = CohortPartition(), rel_tol=1e-8,
           verify_grid=8) -> float:
    """Minimum reproduction number over the substrategy's (a, b) closure.

    By monotonicity in both intensities the minimum sits at the lower-left
    corner; a coarse grid re-check guards the assumption (any grid value
    below the corner fails an internal assertion).
    """
    dom = sub.domain
    corner = r0_at(baseline, sub, dom.a_min, dom.b_min, partition, rel_tol)
    if verify_grid:
        a_grid = np.linspace(dom.a_min, dom.a_max, verify_grid)
        b_grid = np.linspace(dom.b_min, dom.b_max, verify_grid)
        values = _parallel_map(
            lambda ab: r0_at(baseline, sub, ab[0], ab[1], partition, rel_tol),
            [(a, b) for a in a_grid for b in b_grid])
        floor = corner - 1e-9 * max(1.0, abs(corner))
        assert all(v >= floor for v in values), \
            "corner is not the minimum; monotonicity assumption violated"
    return corner


def covers(sub: Substrategy, grade: Grade, baseline: ParamSet,
           partition: CohortPartition = CohortPartition(),
           tol: float = DEFAULT_COVER_TOL, rel_tol=1e-8, _min=None) -> bool:
    """True iff the substrategy can push the reproduction number down to the grade."""
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    m = min_r0(sub, baseline, partition, rel_tol, verify_grid=0) if _min is None else _min
    return m <= grade.r0_value * (1.0 + tol)


@dataclass(frozen=True)
class SweepGrid:
    """Reproduction numbers over a rectangular intensity grid.

    Display axes follow the plotting convention: contact-reduction axis as
    ``a * 100`` percent, testing axis as detection day ``b / gamma_I``.
    """

    a_values: tuple
    b_values: tuple
    r0: tuple          # row-major: r0[i][j] at (a_values[i], b_values[j])
    w_beta: tuple
    w_gamma: tuple
    baseline_r0: float
    detection_period_days: float = 14.0

    @property
    def a_percent(self):
        return tuple(a * 100.0 for a in self.a_values)

    @property
    def detection_days(self):
        return tuple(b * self.detection_period_days for b in self.b_values)

    def is_monotone(self):
        arr = np.asarray(self.r0)
        return (bool(np.all(np.diff(arr, axis=0) >= 0.0))
                and bool(np.all(np.diff(arr, axis=1) >= 0.0)))

    def to_json(self, ndigits=None):
        arr = [[round(v, ndigits) if ndigits is not None else v for v in row]
               for row in self.r0]
        return {"a_values": list(self.a_values), "b_values": list(self.b_values),
                "a_percent": list(self.a_percent),
                "detection_days": list(self.detection_days),
                "w_beta": sorted(self.w_beta), "w_gamma": sorted(self.w_gamma),
                "baseline_r0": self.baseline_r0, "r0": arr}

    def to_csv(self, ndigits=6) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["a\\detection_day"] + [f"{d:.6g}" for d in self.detection_days])
        for a, row in zip(self.a_values, self.r0):
            writer.writerow([f"{a:.6g}"] + [f"{v:.{ndigits}f}" for v in row])
        return buf.getvalue()


def sweep_grid(sub: Substrategy, baseline: ParamSet, na: int, nb: int,
               partition: CohortPartition = CohortPartition(),
               b_floor: float = DEFAULT_B_FLOOR, rel_tol=1e-8) -> SweepGrid:
    """Uniform (a, b) grid of reproduction numbers over the substrategy domain.

    The testing axis is floored at ``b_floor`` (detection no faster than one
    day by default, matching the plotted day axes); the upper corners include
    the closure points a = 1 and b = 1 so the baseline appears in the grid.
    """
    if na < 2 or nb < 2:
        raise DomainError("grid needs at least 2 points per axis")
    dom = sub.domain
    a_values = np.linspace(dom.a_min, dom.a_max, na)
    b_values = np.linspace(max(dom.b_min, b_floor), dom.b_max, nb)
    pairs = [(a, b) for a in a_values for b in b_values]
    flat = _parallel_map(lambda ab: r0_at(baseline, sub, ab[0], ab[1], partition, rel_tol),
                         pairs)
    grid = tuple(tuple(flat[i * nb + j] for j in range(nb)) for i in range(na))
    gamma_tail = baseline.gamma_i.tail
    period = 1.0 / gamma_tail if gamma_tail > 0 else float("nan")
    return SweepGrid(a_values=tuple(a_values), b_values=tuple(b_values), r0=grid,
                     w_beta=tuple(sorted(sub.w_beta)), w_gamma=tuple(sorted(sub.w_gamma)),
                     baseline_r0=compute_R0(baseline, rel_tol).r0,
                     detection_period_days=period)


def _bisect(fn, lo, hi, target, tol, max_iter=200):
    """Root of fn(x) = target on [lo, hi] for nondecreasing fn, to |fn-target| <= tol."""
    f_lo, f_hi = fn(lo), fn(hi)
    if abs(f_lo - target) <= tol:
        return lo, f_lo
    if abs(f_hi - target) <= tol:
        return hi, f_hi
    if not f_lo <= target <= f_hi:
        raise NoLocusError("target not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if abs(f_mid - target) <= tol:
            return mid, f_mid
        if f_mid < target:
            lo = mid
        else:
            hi = mid
    raise NoLocusError("bisection failed to reach the requested tolerance")


def extract_locus(sub: Substrategy, grade: Grade, baseline: ParamSet,
                  partition: CohortPartition = CohortPartition(),
                  n_points: int = 3, tol: float = 1e-3, rel_tol=1e-8,
                  quantiles=None) -> list:
    """Points (a, b, r0) on the equal-R0 curve ``r0 = grade`` inside the domain.

    The reproduction number is monotone in both intensities, so for each
    chosen ``a`` the solution in ``b`` is found by bisection; where no
    ``b``-solution exists the locus exits through the no-testing boundary
    ``b = b_max`` and the bisection runs on ``a`` instead.  Points are sorted
    by ``a``; every emitted point re-evaluates to the grade within
    ``tol * grade``.
    """
    dom = sub.domain
    target = grade.r0_value
    abs_tol = tol * target
    b_low = max(dom.b_min, 1e-9) if sub.w_gamma else dom.b_max
    f = lambda a, b: r0_at(baseline, sub, a, b, partition, rel_tol)

    lo_corner = f(dom.a_min, 0.0 if sub.w_gamma and dom.b_min == 0.0 else b_low)
    if lo_corner > target + abs_tol:
        raise NoLocusError(
            f"substrategy cannot reach r0 = {target:.3f} (minimum {lo_corner:.3f})")

    # feasible a-interval [a_lo, a_hi]: below a_lo even b = b_max overshoots
    # downward; above a_hi even the strongest testing cannot reach the grade
    if f(dom.a_min, dom.b_max) >= target - abs_tol:
        a_lo = dom.a_min
    else:
        a_lo, _ = _bisect(lambda a: f(a, dom.b_max), dom.a_min, dom.a_max,
                          target, abs_tol)
    if f(dom.a_max, b_low) <= target + abs_tol:
        a_hi = dom.a_max
    else:
        a_hi, _ = _bisect(lambda a: f(a, b_low), dom.a_min, dom.a_max,
                          target, abs_tol)
    if a_hi < a_lo:
        a_lo = a_hi

    if quantiles is None:
        quantiles = np.linspace(0.1, 0.9, n_points)
    points = []
    for frac in quantiles:
        a = a_lo + (a_hi - a_lo) * float(frac)
        lo_val = f(a, b_low)
        if lo_val > target + abs_tol:
            # no b-solution here: land on the b-boundary and solve in a
            a, val = _bisect(lambda x: f(x, b_low), dom.a_min, a, target, abs_tol)
            points.append((a, b_low, val))
            continue
        if f(a, dom.b_max) < target - abs_tol:
            a, val = _bisect(lambda x: f(x, dom.b_max), a, dom.a_max, target, abs_tol)
            points.append((a, dom.b_max, val))
            continue
        b, val = _bisect(lambda x: f(a, x), b_low, dom.b_max, target, abs_tol)
        points.append((a, b, val))
    return sorted(points, key=lambda p: p[0])


@dataclass(frozen=True)
class ComparisonTable:
    """Check matrix of substrategies against grades, with coverage margins."""

    substrategies: tuple
    grades: tuple
    cells: tuple               # cells[i][j] bool
    min_r0s: tuple             # per substrategy
    row_coverage: tuple        # epidemiological coverage per substrategy
    col_coverage: tuple        # social coverage per grade
    total_coverage: float
    representative_loci: dict = field(default_factory=dict)   # (i, j) -> [(a, b, r0)]
    borderline: tuple = field(default_factory=tuple)          # (i, j) pairs within tol
    baseline_r0: float = 0.0

    def recomputed_coverages(self):
        arr = np.asarray(self.cells, dtype=float)
        return (tuple(arr.mean(axis=1)), tuple(arr.mean(axis=0)), float(arr.mean()))

    def to_json(self, ndigits=None):
        rnd = (lambda v: round(v, ndigits)) if ndigits is not None else (lambda v: v)
        return {
            "grades": [{"name": g.name, "r0": rnd(g.r0_value),
                        "provenance_a": g.provenance_a} for g in self.grades],
            "rows": [{
                "index": sub.index, "label": sub.name,
                "w_beta": sorted(sub.w_beta), "w_gamma": sorted(sub.w_gamma),
                "min_r0": rnd(self.min_r0s[i]),
                "cells": list(self.cells[i]),
                "epidemiological_coverage": self.row_coverage[i],
                "loci": {self.grades[j].name:
                         [[rnd(a), rnd(b), rnd(r)] for a, b, r in
                          self.representative_loci.get((i, j), [])]
                         for j in range(len(self.grades))},
            } for i, sub in enumerate(self.substrategies)],
            "social_coverage": list(self.col_coverage),
            "total_coverage": self.total_coverage,
            "borderline_cells": [list(c) for c in self.borderline],
            "baseline_r0": rnd(self.baseline_r0),
        }

    def to_markdown(self) -> str:
        lines = []
        header = ["Age-based restrictions"] + \
            [f"{g.name} ({g.r0_value:.3f})" for g in self.grades] + \
            ["Epidemiological coverage"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for i, sub in enumerate(self.substrategies):
            marks = []
            for j in range(len(self.grades)):
                mark = "1" if self.cells[i][j] else "0"
                if (i, j) in self.borderline:
                    mark += "*"
                marks.append(mark)
            lines.append("| " + " | ".join([sub.name] + marks +
                                           [format_percent(self.row_coverage[i])]) + " |")
        lines.append("| " + " | ".join(["Social coverage"] +
                                       [format_percent(c) for c in self.col_coverage] +
                                       [format_percent(self.total_coverage)]) + " |")
        if self.borderline:
            lines.append("")
            lines.append("`*` borderline cell (minimum within tolerance of the grade)")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["substrategy"] + [g.name for g in self.grades] +
                        ["min_r0", "epidemiological_coverage"])
        for i, sub in enumerate(self.substrategies):
            writer.writerow([sub.name] +
                            ["1" if c else "0" for c in self.cells[i]] +
                            [f"{self.min_r0s[i]:.6f}", f"{self.row_coverage[i]:.6f}"])
        writer.writerow(["social_coverage"] +
                        [f"{c:.6f}" for c in self.col_coverage] +
                        ["", f"{self.total_coverage:.6f}"])
        return buf.getvalue()


def build_comparison_table(subs, grades, baseline: ParamSet,
                           partition: CohortPartition = CohortPartition(),
                           tol: float = DEFAULT_COVER_TOL, rel_tol=1e-8,
                           loci_points: int = 3, loci_tol: float = 1e-3,
                           with_loci: bool = True) -> ComparisonTable:
    """Populate the check matrix and its coverage margins.

    Rows are substrategies, columns the ascending grades; each checked cell
    gets representative locus points (by default three, at the 10th/50th/90th
    percentile of the feasible contact-reduction range).  Cells whose minimum
    sits within ``tol`` of the grade boundary are flagged as borderline.
    """
    subs = list(subs)
    grades = list(grades)
    if not subs or not grades:
        raise DomainError("need at least one substrategy and one grade")
    if any(g2.r0_value <= g1.r0_value for g1, g2 in zip(grades, grades[1:])):
        raise DomainError("grades must be strictly ascending")

    mins = _parallel_map(lambda s: min_r0(s, baseline, partition, rel_tol), subs)
    cells, borderline = [], []
    for i, sub in enumerate(subs):
        row = []
        for j, grade in enumerate(grades):
            row.append(covers(sub, grade, baseline, partition, tol, rel_tol,
                              _min=mins[i]))
            if abs(mins[i] - grade.r0_value) <= tol * grade.r0_value:
                borderline.append((i, j))
        cells.append(tuple(row))

    loci = {}
    if with_loci:
        for i, sub in enumerate(subs):
            for j, grade in enumerate(grades):
                if cells[i][j]:
                    loci[(i, j)] = extract_locus(sub, grade, baseline, partition,
                                                 loci_points, loci_tol, rel_tol)

    arr = np.asarray(cells, dtype=float)
    return ComparisonTable(
        substrategies=tuple(subs), grades=tuple(grades), cells=tuple(cells),
        min_r0s=tuple(mins),
        row_coverage=tuple(arr.mean(axis=1)),
        col_coverage=tuple(arr.mean(axis=0)),
        total_coverage=float(arr.mean()),
        representative_loci=loci, borderline=tuple(borderline),
        baseline_r0=compute_R0(baseline, rel_tol).r0)
