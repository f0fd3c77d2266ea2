"""Bibliometric data model, file ingestion, eligibility filtering, summaries.

A corpus is a set of researchers, each carrying a set of publications with
per-year cumulative citation series. Citation series are stored cumulatively
(element i = citations accumulated by the end of the i-th year since
publication); ingestion rejects non-monotone series rather than repairing
them, since a decreasing cumulative count signals upstream data corruption.
"""
from __future__ import annotations

import csv
import datetime
import enum
import io
import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import (
    CorpusFormatError,
    DuplicateIdError,
    EmptyCorpusError,
    ValidationError,
)

MIN_PUBLICATION_YEAR = 1900

JSONL_FORMAT = "jsonl"
CSV_FORMAT = "csv"

CSV_HEADER = [
    "researcher_id",
    "name",
    "gender",
    "continent",
    "award_years",
    "pub_id",
    "year",
    "is_field_core",
    "citation_series",
]


class Gender(enum.Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


class Continent(enum.Enum):
    EUROPE = "EU"
    NORTH_AMERICA = "NA"
    ASIA = "AS"
    AFRICA = "AF"
    OCEANIA = "OC"
    OTHER_UNKNOWN = "OTHER"


@dataclass(frozen=True)
class Publication:
    """One paper: identifier, publication year, venue flag, citation history.

    citation_series[i] is the cumulative citation count by the end of the
    i-th year since publication (element 0 covers the publication year).
    """

    pub_id: str
    year: int
    is_field_core: bool
    citation_series: tuple[int, ...]

    def validate(self, current_year: int | None = None) -> None:
        if current_year is None:
            current_year = datetime.date.today().year
        if not self.pub_id:
            raise ValidationError("publication with empty pub_id")
        if not (MIN_PUBLICATION_YEAR <= self.year <= current_year):
            raise ValidationError(
                f"publication {self.pub_id}: year {self.year} outside "
                f"[{MIN_PUBLICATION_YEAR}, {current_year}]"
            )
        if len(self.citation_series) == 0:
            raise ValidationError(f"publication {self.pub_id}: empty citation series")
        prev = 0
        for c in self.citation_series:
            if not isinstance(c, int) or isinstance(c, bool):
                raise ValidationError(
                    f"publication {self.pub_id}: non-integer citation count {c!r}"
                )
            if c < 0:
                raise ValidationError(
                    f"publication {self.pub_id}: negative citation count {c}"
                )
            if c < prev:
                raise ValidationError(
                    f"publication {self.pub_id}: non-monotone citation series"
                )
            prev = c


@dataclass(frozen=True)
class Researcher:
    """Identity, demographics, and a body of work."""

    researcher_id: str
    name: str
    gender: Gender
    continent: Continent
    publications: tuple[Publication, ...]
    award_years: tuple[int, ...] = ()

    def validate(self, current_year: int | None = None) -> None:
        if not self.researcher_id:
            raise ValidationError("researcher with empty researcher_id")
        seen: set[str] = set()
        for pub in self.publications:
            pub.validate(current_year)
            if pub.pub_id in seen:
                raise DuplicateIdError(
                    f"researcher {self.researcher_id}: duplicate pub_id {pub.pub_id}"
                )
            seen.add(pub.pub_id)
        if self.publications and self.award_years:
            first = min(p.year for p in self.publications)
            for ay in self.award_years:
                if ay < first:
                    raise ValidationError(
                        f"researcher {self.researcher_id}: award year {ay} precedes "
                        f"first publication year {first}"
                    )

    def first_publication_year(self) -> int | None:
        if not self.publications:
            return None
        return min(p.year for p in self.publications)

    def academic_age(self, as_of_year: int) -> int:
        """Years since first publication; 0 for an empty body of work."""
        first = self.first_publication_year()
        if first is None or first > as_of_year:
            return 0
        return as_of_year - first


@dataclass(frozen=True)
class Corpus:
    """Immutable container of researchers plus the last observed year."""

    researchers: tuple[Researcher, ...]
    reference_year: int

    def validate(self) -> None:
        seen: set[str] = set()
        for r in self.researchers:
            r.validate(current_year=max(self.reference_year, datetime.date.today().year))
            if r.researcher_id in seen:
                raise DuplicateIdError(f"duplicate researcher_id {r.researcher_id}")
            seen.add(r.researcher_id)
            for p in r.publications:
                if p.year > self.reference_year:
                    raise ValidationError(
                        f"publication {p.pub_id}: year {p.year} after corpus "
                        f"reference year {self.reference_year}"
                    )
                if len(p.citation_series) > self.reference_year - p.year + 1:
                    raise ValidationError(
                        f"publication {p.pub_id}: citation series longer than the "
                        f"observable window ending {self.reference_year}"
                    )

    def by_id(self) -> dict[str, Researcher]:
        return {r.researcher_id: r for r in self.researchers}

    def __len__(self) -> int:
        return len(self.researchers)


@dataclass(frozen=True)
class EligibilityRule:
    """Cohort membership thresholds.

    A researcher stays in the cohort with at least min_journal_articles
    publications, strictly more than min_core_fraction of them flagged as
    field-core, and a first-to-last publication span of at least
    min_span_years.
    """

    min_journal_articles: int = 5
    min_core_fraction: float = 0.5
    min_span_years: int = 5

    def __post_init__(self) -> None:
        if self.min_journal_articles <= 0:
            raise ValidationError("min_journal_articles must be positive")
        if not (0.0 < self.min_core_fraction <= 1.0):
            raise ValidationError("min_core_fraction must be in (0, 1]")
        if self.min_span_years <= 0:
            raise ValidationError("min_span_years must be positive")


# ---------------------------------------------------------------------------
# Ingestion / serialization
# ---------------------------------------------------------------------------

_GENDERS = {g.value: g for g in Gender}
_CONTINENTS = {c.value: c for c in Continent}


def _parse_int(value: object, line: int, fieldname: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            text = str(value).strip()
            if text != str(int(text)):
                raise ValueError
            return int(text)
        except (TypeError, ValueError):
            raise CorpusFormatError(line, fieldname, f"expected integer, got {value!r}")
    return value


def _parse_series(raw: object, line: int) -> tuple[int, ...]:
    if isinstance(raw, str):
        parts = [p for p in raw.split(";") if p != ""]
        raw = [_parse_int(p, line, "citation_series") for p in parts]
    if not isinstance(raw, list):
        raise CorpusFormatError(line, "citation_series", f"expected array, got {raw!r}")
    series = tuple(_parse_int(c, line, "citation_series") for c in raw)
    if not series:
        raise CorpusFormatError(line, "citation_series", "empty citation series")
    prev = 0
    for c in series:
        if c < 0:
            raise CorpusFormatError(line, "citation_series", f"negative count {c}")
        if c < prev:
            raise CorpusFormatError(line, "citation_series", "non-monotone citation series")
        prev = c
    return series


def _parse_publication(obj: Mapping[str, object], line: int) -> Publication:
    for key in ("pub_id", "year", "is_field_core", "citation_series"):
        if key not in obj:
            raise CorpusFormatError(line, key, "missing publication field")
    flag = obj["is_field_core"]
    if isinstance(flag, str):
        lowered = flag.strip().lower()
        if lowered in ("true", "1"):
            flag = True
        elif lowered in ("false", "0"):
            flag = False
        else:
            raise CorpusFormatError(line, "is_field_core", f"expected boolean, got {flag!r}")
    if not isinstance(flag, bool):
        raise CorpusFormatError(line, "is_field_core", f"expected boolean, got {flag!r}")
    return Publication(
        pub_id=str(obj["pub_id"]),
        year=_parse_int(obj["year"], line, "year"),
        is_field_core=flag,
        citation_series=_parse_series(obj["citation_series"], line),
    )


def _parse_researcher(obj: Mapping[str, object], line: int) -> Researcher:
    for key in ("researcher_id", "name", "gender", "continent", "award_years", "publications"):
        if key not in obj:
            raise CorpusFormatError(line, key, "missing researcher field")
    gender = _GENDERS.get(str(obj["gender"]))
    if gender is None:
        raise CorpusFormatError(
            line, "gender", f"expected one of {sorted(_GENDERS)}, got {obj['gender']!r}"
        )
    continent = _CONTINENTS.get(str(obj["continent"]))
    if continent is None:
        raise CorpusFormatError(
            line, "continent", f"expected one of {sorted(_CONTINENTS)}, got {obj['continent']!r}"
        )
    raw_awards = obj["award_years"]
    if not isinstance(raw_awards, list):
        raise CorpusFormatError(line, "award_years", f"expected array, got {raw_awards!r}")
    awards = tuple(sorted(_parse_int(a, line, "award_years") for a in raw_awards))
    raw_pubs = obj["publications"]
    if not isinstance(raw_pubs, list):
        raise CorpusFormatError(line, "publications", f"expected array, got {raw_pubs!r}")
    pubs = tuple(_parse_publication(p, line) for p in raw_pubs)
    return Researcher(
        researcher_id=str(obj["researcher_id"]),
        name=str(obj["name"]),
        gender=gender,
        continent=continent,
        publications=pubs,
        award_years=awards,
    )


def _validate_loaded(researchers: list[Researcher], lines: list[int],
                     reference_year: int) -> Corpus:
    corpus = Corpus(researchers=tuple(researchers), reference_year=reference_year)
    # Re-run invariant checks per researcher so errors carry the source line.
    seen: set[str] = set()
    for r, line in zip(researchers, lines):
        try:
            r.validate(current_year=max(reference_year, datetime.date.today().year))
        except ValidationError as exc:
            raise CorpusFormatError(line, "researcher", str(exc)) from exc
        if r.researcher_id in seen:
            raise CorpusFormatError(
                line, "researcher_id", f"duplicate researcher_id {r.researcher_id}"
            )
        seen.add(r.researcher_id)
        for p in r.publications:
            if p.year > reference_year:
                raise CorpusFormatError(
                    line, "year",
                    f"publication {p.pub_id}: year {p.year} after reference year {reference_year}",
                )
            if len(p.citation_series) > reference_year - p.year + 1:
                raise CorpusFormatError(
                    line, "citation_series",
                    f"publication {p.pub_id}: series longer than observable window",
                )
    return corpus


def _infer_reference_year(researchers: Sequence[Researcher]) -> int:
    years = []
    for r in researchers:
        for p in r.publications:
            years.append(p.year + len(p.citation_series) - 1)
    return max(years) if years else datetime.date.today().year


def load_corpus(path: str | Path, format: str = JSONL_FORMAT,
                reference_year: int | None = None) -> Corpus:
    """Load and validate a corpus file.

    reference_year defaults to the last observable year in the data (the
    latest year covered by any citation series).
    """
    path = Path(path)
    if format == JSONL_FORMAT:
        researchers, lines = _load_jsonl(path)
    elif format == CSV_FORMAT:
        researchers, lines = _load_csv(path)
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    if reference_year is None:
        reference_year = _infer_reference_year(researchers)
    return _validate_loaded(researchers, lines, reference_year)


def _load_jsonl(path: Path) -> tuple[list[Researcher], list[int]]:
    researchers: list[Researcher] = []
    lines: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(lineno, "json", f"parse error: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(lineno, "json", "expected a JSON object")
            researchers.append(_parse_researcher(obj, lineno))
            lines.append(lineno)
    return researchers, lines


def _load_csv(path: Path) -> tuple[list[Researcher], list[int]]:
    """Long-format CSV: one row per publication, researcher fields repeated."""
    grouped: dict[str, dict] = {}
    first_line: dict[str, int] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != CSV_HEADER:
            raise CorpusFormatError(1, "header", f"expected columns {','.join(CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            rid = (row.get("researcher_id") or "").strip()
            if not rid:
                raise CorpusFormatError(lineno, "researcher_id", "missing researcher_id")
            awards_raw = (row.get("award_years") or "").strip()
            award_years = [a for a in awards_raw.split(";") if a]
            pub = {
                "pub_id": row.get("pub_id"),
                "year": row.get("year"),
                "is_field_core": row.get("is_field_core"),
                "citation_series": row.get("citation_series") or "",
            }
            entry = grouped.get(rid)
            if entry is None:
                grouped[rid] = {
                    "researcher_id": rid,
                    "name": row.get("name") or "",
                    "gender": row.get("gender"),
                    "continent": row.get("continent"),
                    "award_years": award_years,
                    "publications": [pub],
                }
                first_line[rid] = lineno
            else:
                entry["publications"].append(pub)
    researchers = []
    lines = []
    for rid, obj in grouped.items():
        line = first_line[rid]
        obj["award_years"] = [_parse_int(a, line, "award_years") for a in obj["award_years"]]
        researchers.append(_parse_researcher(obj, line))
        lines.append(line)
    return researchers, lines


def researcher_to_dict(r: Researcher) -> dict:
    return {
        "researcher_id": r.researcher_id,
        "name": r.name,
        "gender": r.gender.value,
        "continent": r.continent.value,
        "award_years": list(r.award_years),
        "publications": [
            {
                "pub_id": p.pub_id,
                "year": p.year,
                "is_field_core": p.is_field_core,
                "citation_series": list(p.citation_series),
            }
            for p in r.publications
        ],
    }


def save_corpus(corpus: Corpus, path: str | Path, format: str = JSONL_FORMAT) -> None:
    """Serialize a corpus; inverse of load_corpus on the data model.

    The CSV long format cannot represent researchers without publications;
    use JSONL for corpora that may contain them.
    """
    path = Path(path)
    if format == JSONL_FORMAT:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for r in corpus.researchers:
                fh.write(json.dumps(researcher_to_dict(r), separators=(",", ":")))
                fh.write("\n")
    elif format == CSV_FORMAT:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in corpus.researchers:
            awards = ";".join(str(a) for a in r.award_years)
            for p in r.publications:
                writer.writerow([
                    r.researcher_id,
                    r.name,
                    r.gender.value,
                    r.continent.value,
                    awards,
                    p.pub_id,
                    p.year,
                    "true" if p.is_field_core else "false",
                    ";".join(str(c) for c in p.citation_series),
                ])
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        raise ValueError(f"unknown corpus format {format!r}")


# ---------------------------------------------------------------------------
# Cohort eligibility
# ---------------------------------------------------------------------------

def is_eligible(r: Researcher, rule: EligibilityRule) -> bool:
    n = len(r.publications)
    if n < rule.min_journal_articles:
        return False
    core = sum(1 for p in r.publications if p.is_field_core)
    if not core / n > rule.min_core_fraction:  # strictly more than the fraction
        return False
    years = [p.year for p in r.publications]
    return max(years) - min(years) >= rule.min_span_years


def filter_eligible(corpus: Corpus, rule: EligibilityRule | None = None) -> Corpus:
    """Retain researchers that satisfy the cohort rule; records are not mutated."""
    if rule is None:
        rule = EligibilityRule()
    kept = tuple(r for r in corpus.researchers if is_eligible(r, rule))
    return Corpus(researchers=kept, reference_year=corpus.reference_year)


# ---------------------------------------------------------------------------
# Descriptive statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeanSd:
    mean: float
    sd: float
    n: int


@dataclass(frozen=True)
class CorpusSummary:
    """Counts and mean/sd summaries of the cohort."""

    n_researchers: int
    n_publications: int
    academic_age: MeanSd
    publication_count: MeanSd
    publications_per_year: MeanSd
    gender_counts: Mapping[str, int]
    continent_counts: Mapping[str, int]
    degenerate: bool = False  # single-researcher corpus: sd not estimable

    def to_dict(self) -> dict:
        return {
            "n_researchers": self.n_researchers,
            "n_publications": self.n_publications,
            "academic_age": {"mean": self.academic_age.mean, "sd": self.academic_age.sd},
            "publication_count": {
                "mean": self.publication_count.mean,
                "sd": self.publication_count.sd,
            },
            "publications_per_year": {
                "mean": self.publications_per_year.mean,
                "sd": self.publications_per_year.sd,
            },
            "gender_counts": dict(self.gender_counts),
            "continent_counts": dict(self.continent_counts),
            "degenerate": self.degenerate,
        }


def _mean_sd(values: Sequence[float]) -> MeanSd:
    n = len(values)
    if n == 0:
        return MeanSd(mean=math.nan, sd=math.nan, n=0)
    mean = sum(values) / n
    sd = statistics.stdev(values) if n > 1 else 0.0
    return MeanSd(mean=mean, sd=sd, n=n)


def descriptive_stats(corpus: Corpus, as_of_year: int | None = None) -> CorpusSummary:
    """Cohort summary: ages, productivity, demographic breakdowns.

    Publications per year uses academic_age + 1 calendar years (first
    publication year through the as-of year, inclusive), so a researcher
    whose first paper appeared in the as-of year divides by one.
    Researchers without publications count toward totals and breakdowns but
    not toward age or per-year productivity.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("descriptive_stats requires a non-empty corpus")
    if as_of_year is None:
        as_of_year = corpus.reference_year
    ages = []
    counts = []
    per_year = []
    gender_counts = {g.value: 0 for g in Gender}
    continent_counts = {c.value: 0 for c in Continent}
    n_pubs = 0
    for r in corpus.researchers:
        gender_counts[r.gender.value] += 1
        continent_counts[r.continent.value] += 1
        counts.append(float(len(r.publications)))
        n_pubs += len(r.publications)
        if r.publications:
            age = r.academic_age(as_of_year)
            ages.append(float(age))
            per_year.append(len(r.publications) / (age + 1))
    return CorpusSummary(
        n_researchers=len(corpus),
        n_publications=n_pubs,
        academic_age=_mean_sd(ages),
        publication_count=_mean_sd(counts),
        publications_per_year=_mean_sd(per_year),
        gender_counts=gender_counts,
        continent_counts=continent_counts,
        degenerate=len(corpus) == 1,
    )
