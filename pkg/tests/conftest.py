from __future__ import annotations

import json
from pathlib import Path

import pytest

from midas.corpus import Continent, Gender, Publication, Researcher


def make_pub(pub_id: str, year: int, series, core: bool = True) -> Publication:
    return Publication(
        pub_id=pub_id, year=year, is_field_core=core, citation_series=tuple(series)
    )


def make_researcher(rid: str, pubs, gender=Gender.UNKNOWN,
                    continent=Continent.OTHER_UNKNOWN, awards=()) -> Researcher:
    return Researcher(
        researcher_id=rid,
        name=f"Researcher {rid}",
        gender=gender,
        continent=continent,
        publications=tuple(pubs),
        award_years=tuple(awards),
    )


TWO_RESEARCHER_JSONL = "\n".join(
    [
        json.dumps(
            {
                "researcher_id": "alice",
                "name": "Alice",
                "gender": "female",
                "continent": "EU",
                "award_years": [2015],
                "publications": [
                    {
                        "pub_id": "alice:p0",
                        "year": 2010,
                        "is_field_core": True,
                        "citation_series": [0, 5, 12, 20, 20, 21, 21, 22, 22, 23, 24, 24, 25, 25],
                    },
                    {
                        "pub_id": "alice:p1",
                        "year": 2012,
                        "is_field_core": False,
                        "citation_series": [1, 2, 4, 6, 7, 8, 8, 9, 9, 10, 10, 11],
                    },
                ],
            }
        ),
        json.dumps(
            {
                "researcher_id": "bob",
                "name": "Bob",
                "gender": "male",
                "continent": "NA",
                "award_years": [],
                "publications": [
                    {
                        "pub_id": "bob:p0",
                        "year": 2005,
                        "is_field_core": True,
                        "citation_series": [2, 4, 8, 16, 18, 20, 22, 22, 23, 23, 24, 24, 25, 26, 26, 27, 27, 28, 28],
                    }
                ],
            }
        ),
    ]
) + "\n"


@pytest.fixture
def two_researcher_file(tmp_path: Path) -> Path:
    path = tmp_path / "two.jsonl"
    path.write_text(TWO_RESEARCHER_JSONL, encoding="utf-8")
    return path
