"""Matched-control construction and award-vs-control indicator comparison.

Controls are matched greedily without replacement on standardized
(academic age, publication count), hardest treated researcher first.
Standardization keeps publication counts (range ~5-200) from dominating
ages (range ~3-40) in the Euclidean distance.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus, Researcher
from .errors import (
    DegenerateDataError,
    MissingAwardYearError,
    OverlapError,
    PoolTooSmallError,
    SampleSizeError,
    ValidationError,
)
from .indicators import AmtParams, indicator_report
from .parallel import ordered_map
from .stats import (
    Method,
    TestResult,
    _small_sample_signed_rank,
    mann_whitney_u,
    wilcoxon_signed_rank,
)

INDICATOR_NAMES = ("amt", "h_index", "i10_index", "citation_count")

TREATED = "treated"
CONTROL = "control"


@dataclass(frozen=True)
class MatchedPair:
    treated_id: str
    control_id: str
    distance: float


@dataclass(frozen=True)
class TimePoint:
    """Evaluation snapshot: a fixed year, or each researcher's earliest award year."""

    label: str
    year: int | None = None  # None: prize-year mode


PRIZE_YEAR = TimePoint(label="prize_year", year=None)


def _features(r: Researcher, reference_year: int) -> tuple[float, float]:
    count = sum(1 for p in r.publications if p.year <= reference_year)
    if count == 0:
        raise ValidationError(
            f"researcher {r.researcher_id} has no publications by {reference_year}"
        )
    return float(r.academic_age(reference_year)), float(count)


def _standardizer(rows: Sequence[tuple[float, float]]):
    n = len(rows)
    means = [sum(row[k] for row in rows) / n for k in (0, 1)]
    sds = []
    for k in (0, 1):
        if n > 1:
            var = sum((row[k] - means[k]) ** 2 for row in rows) / (n - 1)
        else:
            var = 0.0
        sds.append(math.sqrt(var))

    def scale(row: tuple[float, float]) -> tuple[float, float]:
        return tuple(
            (row[k] - means[k]) / sds[k] if sds[k] > 0 else 0.0 for k in (0, 1)
        )

    return scale


def build_matched_control(treated: Sequence[Researcher], pool: Sequence[Researcher],
                          reference_year: int) -> list[MatchedPair]:
    """Greedy nearest-neighbor matching without replacement.

    Treated researchers are processed in descending order of their
    nearest-neighbor distance over the full pool (hardest first), so easy
    matches cannot steal the only good control of a hard case. All distance
    ties break on lexicographic researcher id, making the result
    deterministic. Returns one pair per treated researcher, sorted by
    treated id.
    """
    treated_ids = {r.researcher_id for r in treated}
    pool_ids = {r.researcher_id for r in pool}
    shared = treated_ids & pool_ids
    if shared:
        raise OverlapError(f"treated and pool overlap: {sorted(shared)[:5]}")
    if len(pool) < len(treated):
        raise PoolTooSmallError(
            f"pool has {len(pool)} researchers for {len(treated)} treated"
        )
    everyone = list(treated) + list(pool)
    raw = [_features(r, reference_year) for r in everyone]
    scale = _standardizer(raw)
    feat = {r.researcher_id: scale(row) for r, row in zip(everyone, raw)}

    def dist(t: Researcher, c: Researcher) -> float:
        (ta, tc), (ca, cc) = feat[t.researcher_id], feat[c.researcher_id]
        return math.hypot(ta - ca, tc - cc)

    def nearest(t: Researcher, candidates: Sequence[Researcher]) -> tuple[float, Researcher]:
        return min(
            ((dist(t, c), c) for c in candidates),
            key=lambda item: (item[0], item[1].researcher_id),
        )

    hardness = {t.researcher_id: nearest(t, pool)[0] for t in treated}
    order = sorted(treated, key=lambda t: (-hardness[t.researcher_id], t.researcher_id))
    available: dict[str, Researcher] = {r.researcher_id: r for r in pool}
    pairs = []
    for t in order:
        d, chosen = nearest(t, list(available.values()))
        del available[chosen.researcher_id]
        pairs.append(
            MatchedPair(treated_id=t.researcher_id, control_id=chosen.researcher_id,
                        distance=d)
        )
    pairs.sort(key=lambda p: p.treated_id)
    return pairs


@dataclass(frozen=True)
class BalanceReport:
    """Paired covariate tests after matching (academic age, publication count)."""

    academic_age: TestResult
    publication_count: TestResult

    def to_dict(self) -> dict:
        return {
            "academic_age": self.academic_age.to_dict(),
            "publication_count": self.publication_count.to_dict(),
        }


def _paired_test(diff_pairs: Sequence[tuple[float, float]]) -> TestResult:
    diffs = [a - b for a, b in diff_pairs]
    nonzero = sum(1 for d in diffs if d != 0.0)
    if nonzero == 0:
        return TestResult(
            statistic=0.0, p_value=1.0, method=Method.WILCOXON_SIGNED_RANK,
            n=len(diff_pairs), note="all paired differences zero; perfect balance",
        )
    if nonzero < 5:
        # near-perfect matching: too few non-zero differences for the
        # standard minimum-n rule, which verify_balance bypasses by contract
        result = _small_sample_signed_rank(diffs)
        return TestResult(
            statistic=result.statistic, p_value=result.p_value,
            method=result.method, n=result.n,
            note=(f"only {nonzero} non-zero differences among "
                  f"{len(diff_pairs)} pairs; exact enumeration"),
        )
    return wilcoxon_signed_rank(diff_pairs)


def verify_balance(pairs: Sequence[MatchedPair], corpus: Corpus | Mapping[str, Researcher],
                   reference_year: int) -> BalanceReport:
    """Wilcoxon signed-rank on paired academic ages and publication counts.

    Exact-duplicate matching (all differences zero) short-circuits to a
    degenerate perfect-balance result instead of the signed-rank minimum-n
    rule.
    """
    if len(pairs) < 5:
        raise SampleSizeError(f"verify_balance requires >= 5 pairs, got {len(pairs)}")
    lookup = corpus.by_id() if isinstance(corpus, Corpus) else corpus
    ages = []
    counts = []
    for pair in pairs:
        ft = _features(lookup[pair.treated_id], reference_year)
        fc = _features(lookup[pair.control_id], reference_year)
        ages.append((ft[0], fc[0]))
        counts.append((ft[1], fc[1]))
    return BalanceReport(
        academic_age=_paired_test(ages),
        publication_count=_paired_test(counts),
    )


@dataclass(frozen=True)
class GroupCell:
    """One indicator at one time point: group summaries and their difference."""

    mean_treated: float
    sd_treated: float
    mean_control: float
    sd_control: float
    relative_difference_pct: float | None
    p_value: float

    def to_dict(self) -> dict:
        return {
            "mean_treated": self.mean_treated,
            "sd_treated": self.sd_treated,
            "mean_control": self.mean_control,
            "sd_control": self.sd_control,
            "relative_difference_pct": self.relative_difference_pct,
            "p_value": self.p_value,
        }


@dataclass(frozen=True)
class ComparisonReport:
    """Table of relative differences and p-values, plus plot-ready AMT vectors."""

    time_labels: tuple[str, ...]
    cells: Mapping[tuple[str, str], GroupCell]  # (time label, indicator) -> cell
    amt_values: Mapping[tuple[str, str], tuple[float, ...]]  # (group, time label)
    balance: BalanceReport | None = None

    def to_csv_text(self) -> str:
        lines = ["time_point,metric," + ",".join(INDICATOR_NAMES)]
        for label in self.time_labels:
            rel = []
            pvals = []
            for name in INDICATOR_NAMES:
                cell = self.cells[(label, name)]
                rel.append("" if cell.relative_difference_pct is None
                           else f"{cell.relative_difference_pct:.4f}")
                pvals.append(f"{cell.p_value:.4f}")
            lines.append(f"{label},relative_difference_pct," + ",".join(rel))
            lines.append(f"{label},p_value," + ",".join(pvals))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        out: dict = {
            "time_points": {
                label: {
                    name: self.cells[(label, name)].to_dict()
                    for name in INDICATOR_NAMES
                }
                for label in self.time_labels
            }
        }
        if self.balance is not None:
            out["balance"] = self.balance.to_dict()
        return out


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _sample_sd(values: Sequence[float]) -> float:
    n = len(values)
    if n < 2:
        return 0.0
    m = _mean(values)
    return math.sqrt(math.fsum((v - m) ** 2 for v in values) / (n - 1))


def _relative_difference(mean_treated: float, mean_control: float) -> float | None:
    if mean_control > 0:
        return (mean_treated - mean_control) / mean_control * 100.0
    if mean_treated == mean_control:
        return 0.0
    return None  # undefined against a zero baseline


def _group_p_value(a: Sequence[float], b: Sequence[float]) -> float:
    try:
        return mann_whitney_u(a, b).p_value
    except DegenerateDataError:
        return 1.0  # complete overlap: all pooled values identical


def compare_groups(treated: Sequence[Researcher], control: Sequence[Researcher],
                   params: AmtParams, time_points: Sequence[TimePoint],
                   balance: BalanceReport | None = None) -> ComparisonReport:
    """Group means, relative differences, and Mann-Whitney p per indicator.

    treated[i] and control[i] form a matched pair: in prize-year mode both
    are evaluated at treated[i]'s earliest award year, so each pair is
    observed at the same calendar time.
    """
    if not treated or not control:
        raise ValidationError("compare_groups requires non-empty groups")
    if len(treated) != len(control):
        raise ValidationError("treated and control must be matched 1:1")
    cells: dict[tuple[str, str], GroupCell] = {}
    amt_values: dict[tuple[str, str], tuple[float, ...]] = {}
    for tp in time_points:
        if tp.year is None:
            for t in treated:
                if not t.award_years:
                    raise MissingAwardYearError(
                        f"researcher {t.researcher_id} has no award year for "
                        f"prize-year evaluation"
                    )
            years = [min(t.award_years) for t in treated]
        else:
            years = [tp.year] * len(treated)
        treated_reports = ordered_map(
            lambda pair: indicator_report(pair[0], params, pair[1]),
            list(zip(treated, years)),
        )
        control_reports = ordered_map(
            lambda pair: indicator_report(pair[0], params, pair[1]),
            list(zip(control, years)),
        )
        for name in INDICATOR_NAMES:
            tv = [float(getattr(r, name)) for r in treated_reports]
            cv = [float(getattr(r, name)) for r in control_reports]
            mt, mc = _mean(tv), _mean(cv)
            cells[(tp.label, name)] = GroupCell(
                mean_treated=mt,
                sd_treated=_sample_sd(tv),
                mean_control=mc,
                sd_control=_sample_sd(cv),
                relative_difference_pct=_relative_difference(mt, mc),
                p_value=_group_p_value(tv, cv),
            )
        amt_values[(TREATED, tp.label)] = tuple(r.amt for r in treated_reports)
        amt_values[(CONTROL, tp.label)] = tuple(r.amt for r in control_reports)
    return ComparisonReport(
        time_labels=tuple(tp.label for tp in time_points),
        cells=cells,
        amt_values=amt_values,
        balance=balance,
    )


def emit_distribution_data(report: ComparisonReport, path: str | Path) -> None:
    """Long-format CSV ``group,time_point,amt``, one row per researcher per time point."""
    if not report.amt_values:
        raise ValidationError("comparison report carries no AMT vectors")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["group", "time_point", "amt"])
        for label in report.time_labels:
            for group in (TREATED, CONTROL):
                for value in report.amt_values[(group, label)]:
                    writer.writerow([group, label, f"{value:.4f}"])
