"""Hyper-parameter sensitivity sweep: average AMT over an (x, y) grid.

Every cell shares one eligible-publication set (publications at least
max(x_values) years old at the as-of year), so the averaged score is
comparable across cells: non-decreasing along x and non-increasing along y,
because cumulative citation series never decrease.
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import kernels
from .corpus import Corpus, Researcher
from .errors import EmptyCorpusError, ValidationError
from .indicators import AmtParams, amt_score
from .parallel import ordered_map
from .stats import PlaneFit, TestResult, fit_plane, shapiro_wilk

DEFAULT_X_VALUES = tuple(range(1, 7))
DEFAULT_Y_VALUES = tuple(range(5, 41, 5))
DEFAULT_SUBSAMPLE_LIMIT = 5000


@dataclass(frozen=True)
class SweepGrid:
    """Per-cell average AMT, indexed cell_means[ix][iy]."""

    x_values: tuple[int, ...]
    y_values: tuple[int, ...]
    cell_means: tuple[tuple[float, ...], ...]

    def cell(self, x: int, y: int) -> float:
        return self.cell_means[self.x_values.index(x)][self.y_values.index(y)]


def _validate_axis(values: Sequence[int], name: str, minimum: int) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if not out:
        raise ValidationError(f"{name} must be non-empty")
    if any(v < minimum for v in out):
        raise ValidationError(f"{name} values must be >= {minimum}")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValidationError(f"{name} values must be strictly ascending")
    return out


def run_sweep(corpus: Corpus, x_values: Sequence[int] = DEFAULT_X_VALUES,
              y_values: Sequence[int] = DEFAULT_Y_VALUES,
              as_of_year: int | None = None) -> SweepGrid:
    """Average AMT score across all researchers for every (x, y) cell.

    Researchers whose shared eligible set is empty contribute a score of 0,
    matching the empty-body-of-work convention of the indicator itself.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("run_sweep requires a non-empty corpus")
    xs = _validate_axis(x_values, "x_values", 0)
    ys = _validate_axis(y_values, "y_values", 1)
    if as_of_year is None:
        as_of_year = corpus.reference_year
    min_pub_age = max(xs)
    xs_buf = kernels.int_buffer(xs)
    ys_buf = kernels.int_buffer(ys)
    n_cells = len(xs) * len(ys)

    def one_researcher(r: Researcher) -> list[float]:
        packed = kernels.PackedPublications(r.publications)
        out = kernels.zero_buffer(n_cells)
        eligible = kernels.grid_hit_counts(
            packed.years, packed.flat, packed.offs, packed.lens,
            as_of_year, min_pub_age, xs_buf, ys_buf, out,
        )
        if eligible == 0:
            return [0.0] * n_cells
        return [hits / eligible for hits in out]

    per_researcher = ordered_map(one_researcher, corpus.researchers)
    totals = [0.0] * n_cells
    for scores in per_researcher:
        for k in range(n_cells):
            totals[k] += scores[k]
    n = len(corpus)
    means = tuple(
        tuple(totals[ix * len(ys) + iy] / n for iy in range(len(ys)))
        for ix in range(len(xs))
    )
    return SweepGrid(x_values=xs, y_values=ys, cell_means=means)


def fit_sweep(grid: SweepGrid) -> PlaneFit:
    """Least-squares plane through all (x, y, cell mean) triples."""
    points = [
        (float(x), float(y), grid.cell_means[ix][iy])
        for ix, x in enumerate(grid.x_values)
        for iy, y in enumerate(grid.y_values)
    ]
    return fit_plane(points)


def format_fit(fit: PlaneFit) -> str:
    """Human-readable fit summary, e.g. ``C = 0.0438 + 0.0659*x - 0.0096*y (R²=0.8370)``."""

    def term(coef: float, var: str) -> str:
        sign = "-" if coef < 0 else "+"
        return f"{sign} {abs(coef):.4f}*{var}"

    return (
        f"C = {fit.intercept:.4f} {term(fit.coef_x, 'x')} {term(fit.coef_y, 'y')} "
        f"(R²={fit.r_squared:.4f})"
    )


def normality_check(corpus: Corpus, params: AmtParams | None = None,
                    max_n: int = DEFAULT_SUBSAMPLE_LIMIT, seed: int = 0,
                    as_of_year: int | None = None) -> TestResult:
    """Shapiro-Wilk on the corpus-wide AMT score distribution.

    The W-test approximation is valid up to n = 5000; larger samples are
    reduced by a seeded uniform subsample, recorded in the result note.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("normality_check requires a non-empty corpus")
    if params is None:
        params = AmtParams()
    if as_of_year is None:
        as_of_year = corpus.reference_year
    scores = ordered_map(lambda r: amt_score(r, params, as_of_year), corpus.researchers)
    note = ""
    if len(scores) > max_n:
        rng = random.Random(seed)
        scores = rng.sample(scores, max_n)
        note = f"subsampled {max_n} of {len(corpus)} scores (seed={seed})"
    result = shapiro_wilk(scores)
    if note:
        return TestResult(
            statistic=result.statistic, p_value=result.p_value,
            method=result.method, n=result.n, note=note,
        )
    return result


def emit_heatmap(grid: SweepGrid, path: str | Path) -> None:
    """Write the grid as CSV rows ``x,y,mean_amt`` (x-major ascending, 4 decimals)."""
    if not grid.x_values or not grid.y_values:
        raise ValidationError("cannot emit an empty grid")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "mean_amt"])
        for ix, x in enumerate(grid.x_values):
            for iy, y in enumerate(grid.y_values):
                writer.writerow([x, y, f"{grid.cell_means[ix][iy]:.4f}"])
