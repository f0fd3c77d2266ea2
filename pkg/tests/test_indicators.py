from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from midas.errors import ValidationError
from midas.indicators import (
    AmtParams,
    amt_score,
    citations_as_of,
    h_index,
    i10_index,
    indicator_report,
    is_highly_cited,
)

from conftest import make_pub, make_researcher


def brute_force_h_index(counts):
    """Independent oracle: check the defining predicate for every h."""
    best = 0
    for h in range(len(counts) + 1):
        if sum(1 for c in counts if c >= h) >= h:
            best = h
    return best


class TestCitationsAsOf:
    def test_reads_series_offset(self):
        p = make_pub("p", 2010, [0, 2, 5, 16])
        assert citations_as_of(p, 2012) == 5

    def test_clamps_to_last_known_value(self):
        p = make_pub("p", 2010, [0, 2, 5, 16])
        assert citations_as_of(p, 2030) == 16

    def test_before_publication_year_rejected(self):
        p = make_pub("p", 2020, [7])
        with pytest.raises(ValidationError):
            citations_as_of(p, 2019)


class TestIsHighlyCited:
    def test_threshold_is_inclusive(self):
        params = AmtParams(time_threshold_x=3, citation_threshold_y=15)
        assert is_highly_cited(make_pub("p", 2010, [0, 1, 4, 15]), params)
        assert not is_highly_cited(make_pub("p", 2010, [0, 1, 4, 14]), params)

    def test_x_zero_reads_first_entry(self):
        params = AmtParams(time_threshold_x=0, citation_threshold_y=15)
        assert is_highly_cited(make_pub("p", 2020, [20]), params)

    def test_young_publication_rejected(self):
        params = AmtParams(time_threshold_x=3, citation_threshold_y=15)
        pub = make_pub("p", 2020, [0, 5])
        with pytest.raises(ValidationError):
            is_highly_cited(pub, params)  # observed span is 1 < 3 years
        with pytest.raises(ValidationError):
            is_highly_cited(pub, params, as_of_year=2021)

    def test_short_series_clamps_for_old_publication(self):
        params = AmtParams(time_threshold_x=3, citation_threshold_y=15)
        pub = make_pub("p", 2000, [0, 16])
        assert is_highly_cited(pub, params, as_of_year=2015)


class TestAmtScore:
    def test_empty_body_of_work_scores_zero(self):
        r = make_researcher("empty", [])
        assert amt_score(r, AmtParams(), 2020) == 0.0

    def test_three_of_ten(self):
        # 10 publications old enough to evaluate; exactly 3 pass c_3 >= 15
        pubs = []
        for i in range(10):
            hit = i < 3
            series = [0, 2, 8, 15 if hit else 9] + [20 if hit else 12] * 7
            pubs.append(make_pub(f"p{i}", 2005, series))
        r = make_researcher("r", pubs)
        assert amt_score(r, AmtParams(3, 15), 2020) == pytest.approx(0.3)

    def test_all_hits_score_one(self):
        pubs = [make_pub(f"p{i}", 2005, [20] * 10) for i in range(4)]
        r = make_researcher("r", pubs)
        assert amt_score(r, AmtParams(3, 15), 2020) == 1.0

    def test_young_publications_excluded_from_both_sides(self):
        old_hit = make_pub("old", 2000, [0, 20] + [25] * 10)
        young = make_pub("young", 2019, [0, 50])
        r = make_researcher("r", [old_hit, young])
        assert amt_score(r, AmtParams(3, 15), 2020) == 1.0

    def test_monotone_in_x_with_fixed_eligible_set(self):
        rng = random.Random(0)
        pubs = []
        for i in range(12):
            incs = [rng.randint(0, 6) for _ in range(21)]
            series = []
            total = 0
            for inc in incs:
                total += inc
                series.append(total)
            pubs.append(make_pub(f"p{i}", 2000, series))
        r = make_researcher("r", pubs)
        for y in (5, 15, 30):
            scores = [amt_score(r, AmtParams(x, y), 2020) for x in range(1, 7)]
            assert all(b >= a for a, b in zip(scores, scores[1:]))

    def test_monotone_in_y(self):
        rng = random.Random(1)
        pubs = []
        for i in range(12):
            series = []
            total = 0
            for _ in range(21):
                total += rng.randint(0, 6)
                series.append(total)
            pubs.append(make_pub(f"p{i}", 2000, series))
        r = make_researcher("r", pubs)
        for x in (1, 3, 6):
            scores = [amt_score(r, AmtParams(x, y), 2020) for y in range(5, 41, 5)]
            assert all(b <= a for a, b in zip(scores, scores[1:]))

    def test_score_stays_in_unit_interval(self):
        rng = random.Random(2)
        for _ in range(50):
            pubs = []
            for i in range(rng.randint(0, 8)):
                n = rng.randint(1, 15)
                series = []
                total = 0
                for _ in range(n):
                    total += rng.randint(0, 10)
                    series.append(total)
                pubs.append(make_pub(f"p{i}", 2020 - n + 1, series))
            r = make_researcher("r", pubs)
            s = amt_score(r, AmtParams(rng.randint(0, 5), rng.randint(1, 30)), 2020)
            assert 0.0 <= s <= 1.0


class TestHIndex:
    def test_known_values(self):
        assert h_index([3, 0, 6, 1, 5]) == 3
        assert h_index([]) == 0
        assert h_index([10, 10, 10]) == 3

    @given(st.lists(st.integers(min_value=0, max_value=20), max_size=12))
    def test_matches_brute_force_oracle(self, counts):
        assert h_index(counts) == brute_force_h_index(counts)

    @given(st.lists(st.integers(min_value=0, max_value=20), min_size=1, max_size=12))
    def test_upper_bounds(self, counts):
        assert h_index(counts) <= min(len(counts), max(counts))


class TestI10Index:
    def test_boundary_inclusive(self):
        assert i10_index([10, 9, 11]) == 2

    def test_empty_and_below_threshold(self):
        assert i10_index([]) == 0
        assert i10_index([9, 9, 9]) == 0


class TestIndicatorReport:
    def single(self):
        return make_researcher("solo", [make_pub("p0", 2010, [0, 5, 12, 20])])

    def test_snapshot_2013(self):
        report = indicator_report(self.single(), AmtParams(3, 15), 2013)
        assert report.amt == 1.0
        assert report.h_index == 1
        assert report.i10_index == 1
        assert report.citation_count == 20
        assert report.academic_age == 3
        assert report.eligible_pub_count == 1

    def test_snapshot_2011(self):
        report = indicator_report(self.single(), AmtParams(3, 15), 2011)
        assert report.amt == 0.0
        assert report.eligible_pub_count == 0
        assert report.h_index == 1
        assert report.i10_index == 0
        assert report.citation_count == 5

    def test_no_publications_by_as_of_year(self):
        r = make_researcher("later", [make_pub("p0", 2015, [0, 100])])
        report = indicator_report(r, AmtParams(), 2012)
        assert (report.amt, report.h_index, report.i10_index,
                report.citation_count, report.academic_age,
                report.eligible_pub_count) == (0.0, 0, 0, 0, 0, 0)

    def test_permutation_invariance(self):
        rng = random.Random(3)
        pubs = [make_pub(f"p{i}", 2000 + i, [i, i + 2, i + 9, i + 20][: 2020 - (2000 + i) + 1] or [i])
                for i in range(15)]
        r = make_researcher("r", pubs)
        base = indicator_report(r, AmtParams(), 2020)
        for _ in range(5):
            shuffled = list(pubs)
            rng.shuffle(shuffled)
            other = indicator_report(make_researcher("r", shuffled), AmtParams(), 2020)
            assert other == base

    def test_monotone_in_as_of_year(self):
        rng = random.Random(4)
        pubs = []
        for i in range(10):
            series = []
            total = 0
            for _ in range(2020 - (2000 + i) + 1):
                total += rng.randint(0, 4)
                series.append(total)
            pubs.append(make_pub(f"p{i}", 2000 + i, series))
        r = make_researcher("r", pubs)
        reports = [indicator_report(r, AmtParams(), year) for year in range(2000, 2021)]
        for a, b in zip(reports, reports[1:]):
            assert b.citation_count >= a.citation_count
            assert b.i10_index >= a.i10_index

    def test_csv_row_formatting(self):
        report = indicator_report(self.single(), AmtParams(3, 15), 2013)
        row = report.to_csv_row()
        assert row == "solo,2013,1.0000,1,1,20,3,1"
