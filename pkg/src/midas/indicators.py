"""Researcher-level indicators: AMT, H-index, i10-index, citation count.

The AMT (Academic Midas Touch) score of a researcher is the fraction of
threshold-eligible publications that accumulated at least y citations within
their first x years. All indicators can be evaluated "as of" any year, using
only the citations observable by that year, so award-year and final-year
snapshots are directly comparable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import kernels
from .corpus import Publication, Researcher
from .errors import ValidationError

DEFAULT_TIME_THRESHOLD = 3
DEFAULT_CITATION_THRESHOLD = 15


@dataclass(frozen=True)
class AmtParams:
    """The (x, y) pair: time threshold in years and citation threshold."""

    time_threshold_x: int = DEFAULT_TIME_THRESHOLD
    citation_threshold_y: int = DEFAULT_CITATION_THRESHOLD

    def __post_init__(self) -> None:
        if self.time_threshold_x < 0:
            raise ValidationError("time_threshold_x must be >= 0")
        if self.citation_threshold_y < 1:
            raise ValidationError("citation_threshold_y must be >= 1")


@dataclass(frozen=True)
class IndicatorReport:
    researcher_id: str
    as_of_year: int
    amt: float
    h_index: int
    i10_index: int
    citation_count: int
    academic_age: int
    eligible_pub_count: int

    CSV_HEADER = (
        "researcher_id,as_of_year,amt,h_index,i10_index,citation_count,"
        "academic_age,eligible_pub_count"
    )

    def to_csv_row(self) -> str:
        return (
            f"{self.researcher_id},{self.as_of_year},{self.amt:.4f},{self.h_index},"
            f"{self.i10_index},{self.citation_count},{self.academic_age},"
            f"{self.eligible_pub_count}"
        )

    def to_dict(self) -> dict:
        return {
            "researcher_id": self.researcher_id,
            "as_of_year": self.as_of_year,
            "amt": self.amt,
            "h_index": self.h_index,
            "i10_index": self.i10_index,
            "citation_count": self.citation_count,
            "academic_age": self.academic_age,
            "eligible_pub_count": self.eligible_pub_count,
        }


def citations_as_of(pub: Publication, as_of_year: int) -> int:
    """Cumulative citations known by the end of as_of_year.

    Series shorter than the elapsed time clamp to the last known value:
    cumulative counts cannot decrease, and missing trailing observations
    mean no new data was recorded.
    """
    offset = as_of_year - pub.year
    if offset < 0:
        raise ValidationError(
            f"publication {pub.pub_id}: as_of_year {as_of_year} precedes "
            f"publication year {pub.year}"
        )
    return pub.citation_series[min(offset, len(pub.citation_series) - 1)]


def is_highly_cited(pub: Publication, params: AmtParams,
                    as_of_year: int | None = None) -> bool:
    """True iff the publication reached the citation threshold in time.

    The publication must be at least x years old at evaluation time; when no
    as_of_year is given, the observed series span defines its age.
    """
    x = params.time_threshold_x
    age = (as_of_year - pub.year) if as_of_year is not None \
        else len(pub.citation_series) - 1
    if age < x:
        raise ValidationError(
            f"publication {pub.pub_id}: younger than {x} years at evaluation time"
        )
    c_x = pub.citation_series[min(x, len(pub.citation_series) - 1)]
    return c_x >= params.citation_threshold_y


def amt_score(r: Researcher, params: AmtParams, as_of_year: int) -> float:
    """Fraction of threshold-eligible publications that are highly cited.

    Publications younger than x years at as_of_year are excluded from both
    numerator and denominator; an empty eligible set scores 0.
    """
    packed = kernels.PackedPublications(r.publications)
    hits, eligible = kernels.amt_hit_count(
        packed.years, packed.flat, packed.offs, packed.lens,
        as_of_year, params.time_threshold_x, params.citation_threshold_y,
    )
    if eligible == 0:
        return 0.0
    return hits / eligible


def h_index(citation_counts: Iterable[int]) -> int:
    """Largest h such that at least h publications have >= h citations."""
    counts = sorted(citation_counts, reverse=True)
    h = 0
    for i, c in enumerate(counts, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def i10_index(citation_counts: Iterable[int]) -> int:
    """Number of publications with at least 10 citations."""
    return sum(1 for c in citation_counts if c >= 10)


def indicator_report(r: Researcher, params: AmtParams, as_of_year: int) -> IndicatorReport:
    """All four indicators for one researcher at one point in time.

    Only publications that exist by as_of_year contribute; their citation
    counts are truncated to what was observable then. AMT additionally
    requires publications to be at least x years old (eligible_pub_count).
    """
    visible = [p for p in r.publications if p.year <= as_of_year]
    counts = [citations_as_of(p, as_of_year) for p in visible]
    packed = kernels.PackedPublications(visible)
    hits, eligible = kernels.amt_hit_count(
        packed.years, packed.flat, packed.offs, packed.lens,
        as_of_year, params.time_threshold_x, params.citation_threshold_y,
    )
    first = min((p.year for p in visible), default=None)
    return IndicatorReport(
        researcher_id=r.researcher_id,
        as_of_year=as_of_year,
        amt=hits / eligible if eligible else 0.0,
        h_index=h_index(counts),
        i10_index=i10_index(counts),
        citation_count=sum(counts),
        academic_age=(as_of_year - first) if first is not None else 0,
        eligible_pub_count=eligible,
    )
