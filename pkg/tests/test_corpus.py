from __future__ import annotations

import json

import pytest

from midas.corpus import (
    Continent,
    Corpus,
    EligibilityRule,
    Gender,
    descriptive_stats,
    filter_eligible,
    load_corpus,
    save_corpus,
)
from midas.errors import (
    ConfigError,
    CorpusFormatError,
    EmptyCorpusError,
    ValidationError,
)
from midas.indicators import AmtParams, amt_score
from midas.synth import SynthConfig, generate_synthetic

from conftest import make_pub, make_researcher


class TestLoadCorpus:
    def test_round_trips_the_fixture(self, two_researcher_file, tmp_path):
        corpus = load_corpus(two_researcher_file)
        assert len(corpus) == 2
        alice = corpus.by_id()["alice"]
        assert alice.gender is Gender.FEMALE
        assert alice.continent is Continent.EUROPE
        assert alice.award_years == (2015,)
        assert alice.publications[0].citation_series[3] == 20
        out = tmp_path / "copy.jsonl"
        save_corpus(corpus, out)
        assert load_corpus(out) == corpus

    def test_csv_round_trip(self, two_researcher_file, tmp_path):
        corpus = load_corpus(two_researcher_file)
        out = tmp_path / "copy.csv"
        save_corpus(corpus, out, format="csv")
        again = load_corpus(out, format="csv")
        assert again == corpus

    def test_non_monotone_series_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        record = {
            "researcher_id": "r1", "name": "R", "gender": "male", "continent": "EU",
            "award_years": [], "publications": [
                {"pub_id": "p1", "year": 2015, "is_field_core": True,
                 "citation_series": [3, 1]},
            ],
        }
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            load_corpus(path)
        assert "non-monotone" in str(err.value)
        assert err.value.line == 1

    def test_duplicate_pub_id_rejected(self, tmp_path):
        pub = {"pub_id": "p1", "year": 2015, "is_field_core": True,
               "citation_series": [0, 1]}
        record = {
            "researcher_id": "r1", "name": "R", "gender": "male", "continent": "EU",
            "award_years": [], "publications": [pub, dict(pub)],
        }
        path = tmp_path / "dup.jsonl"
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            load_corpus(path)
        assert "duplicate" in str(err.value)

    def test_duplicate_researcher_id_rejected(self, tmp_path):
        record = {
            "researcher_id": "r1", "name": "R", "gender": "male", "continent": "EU",
            "award_years": [], "publications": [
                {"pub_id": "p1", "year": 2015, "is_field_core": True,
                 "citation_series": [0, 1]},
            ],
        }
        path = tmp_path / "dup.jsonl"
        path.write_text(json.dumps(record) + "\n" + json.dumps(record) + "\n",
                        encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            load_corpus(path)
        assert err.value.line == 2

    def test_parse_error_carries_line_number(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"researcher_id": "a"}\nnot json\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            load_corpus(path)
        assert err.value.line == 1  # first record is already missing fields

    def test_bad_enum_values_rejected(self, tmp_path):
        record = {
            "researcher_id": "r1", "name": "R", "gender": "other", "continent": "EU",
            "award_years": [], "publications": [],
        }
        path = tmp_path / "g.jsonl"
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError) as err:
            load_corpus(path)
        assert err.value.field == "gender"

    def test_series_longer_than_window_rejected(self, tmp_path):
        record = {
            "researcher_id": "r1", "name": "R", "gender": "male", "continent": "EU",
            "award_years": [], "publications": [
                {"pub_id": "p1", "year": 2020, "is_field_core": True,
                 "citation_series": [0, 1, 2, 3]},
            ],
        }
        path = tmp_path / "long.jsonl"
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError):
            load_corpus(path, reference_year=2021)


class TestModelInvariants:
    def test_award_year_before_first_publication_rejected(self):
        r = make_researcher("r1", [make_pub("p1", 2010, [0, 1])], awards=[2005])
        with pytest.raises(ValidationError):
            r.validate()

    def test_negative_citations_rejected(self):
        with pytest.raises(ValidationError):
            make_pub("p1", 2010, [-1, 0]).validate()

    def test_year_bounds(self):
        with pytest.raises(ValidationError):
            make_pub("p1", 1899, [0]).validate()


class TestFilterEligible:
    def default_rule(self):
        return EligibilityRule()

    def test_meets_all_thresholds(self):
        # 5 pubs, 3 core (60%), span 6 years
        pubs = [make_pub(f"p{i}", 2010 + i, [0], core=i < 3) for i in range(5)]
        pubs.append(make_pub("p5", 2016, [0], core=True))
        r = make_researcher("keep", pubs[1:])  # p1..p5: years 2011..2016
        corpus = Corpus((r,), reference_year=2023)
        assert len(filter_eligible(corpus)) == 1

    def test_exactly_half_core_excluded(self):
        # 6 pubs, exactly 50% core: "more than" is strict
        half = [make_pub(f"h{i}", 2010 + i, [0], core=i < 3) for i in range(6)]
        r = make_researcher("half", half)
        corpus = Corpus((r,), reference_year=2023)
        assert len(filter_eligible(corpus)) == 0

    def test_below_publication_floor_excluded(self):
        pubs = [make_pub(f"p{i}", 2005 + 3 * i, [0]) for i in range(4)]
        r = make_researcher("few", pubs)  # 4 pubs, all core, span 9
        corpus = Corpus((r,), reference_year=2023)
        assert len(filter_eligible(corpus)) == 0

    def test_span_threshold(self):
        pubs = [make_pub(f"p{i}", 2010, [0]) for i in range(4)]
        pubs.append(make_pub("p4", 2014, [0]))
        r = make_researcher("short", pubs)  # span 4 < 5
        corpus = Corpus((r,), reference_year=2023)
        assert len(filter_eligible(corpus)) == 0
        pubs.append(make_pub("p5", 2015, [0]))
        r2 = make_researcher("ok", pubs)  # span 5
        corpus2 = Corpus((r2,), reference_year=2023)
        assert len(filter_eligible(corpus2)) == 1

    def test_idempotent_and_subset(self):
        corpus = generate_synthetic(SynthConfig(n_researchers=60), seed=5)
        once = filter_eligible(corpus)
        twice = filter_eligible(once)
        assert once == twice
        kept = {r.researcher_id for r in once.researchers}
        assert kept <= {r.researcher_id for r in corpus.researchers}
        by_id = corpus.by_id()
        for r in once.researchers:
            assert r == by_id[r.researcher_id]  # no record mutated

    def test_rule_validation(self):
        with pytest.raises(ValidationError):
            EligibilityRule(min_journal_articles=0)
        with pytest.raises(ValidationError):
            EligibilityRule(min_core_fraction=0.0)


class TestDescriptiveStats:
    def test_two_ages(self):
        # ages 10 and 20 as of 2020: first publications 2010 and 2000
        r1 = make_researcher("a", [make_pub("a0", 2010, [0])])
        r2 = make_researcher("b", [make_pub("b0", 2000, [0])])
        corpus = Corpus((r1, r2), reference_year=2020)
        summary = descriptive_stats(corpus)
        assert summary.academic_age.mean == pytest.approx(15.0)
        assert summary.academic_age.sd == pytest.approx(7.0711, abs=1e-4)

    def test_single_researcher_degenerate(self):
        corpus = Corpus(
            (make_researcher("a", [make_pub("a0", 2010, [0])]),), reference_year=2020
        )
        summary = descriptive_stats(corpus)
        assert summary.degenerate
        assert summary.academic_age.sd == 0.0

    def test_breakdowns_partition_researchers(self):
        corpus = generate_synthetic(SynthConfig(n_researchers=80), seed=42)
        summary = descriptive_stats(corpus)
        assert sum(summary.gender_counts.values()) == len(corpus)
        assert sum(summary.continent_counts.values()) == len(corpus)

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyCorpusError):
            descriptive_stats(Corpus((), reference_year=2020))


class TestGenerateSynthetic:
    def test_deterministic(self, tmp_path):
        config = SynthConfig(n_researchers=100)
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        save_corpus(generate_synthetic(config, seed=7), a)
        save_corpus(generate_synthetic(config, seed=7), b)
        assert a.read_bytes() == b.read_bytes()
        assert generate_synthetic(config, seed=8) != generate_synthetic(config, seed=7)

    def test_zero_rate_means_zero_amt(self):
        config = SynthConfig(n_researchers=30, ordinary_rate=0.0, high_rate=0.0)
        corpus = generate_synthetic(config, seed=3)
        for r in corpus.researchers:
            for p in r.publications:
                assert set(p.citation_series) == {0}
        params = AmtParams(time_threshold_x=2, citation_threshold_y=1)
        scores = [amt_score(r, params, corpus.reference_year) for r in corpus.researchers]
        assert sum(scores) == 0.0

    def test_series_monotone_at_scale(self):
        corpus = generate_synthetic(SynthConfig(n_researchers=1000, pubs_min=3,
                                                pubs_max=8), seed=1)
        corpus.validate()
        for r in corpus.researchers:
            for p in r.publications:
                assert all(b >= a for a, b in zip(p.citation_series,
                                                  p.citation_series[1:]))

    def test_award_winners_carry_award_years(self):
        corpus = generate_synthetic(SynthConfig(n_researchers=20, n_award_winners=5),
                                    seed=2)
        winners = [r for r in corpus.researchers if r.award_years]
        assert len(winners) == 5
        for r in winners:
            assert min(r.award_years) >= min(p.year for p in r.publications)

    def test_invalid_config_rejected(self):
        with pytest.raises(ConfigError):
            SynthConfig(n_researchers=0).validate()
        with pytest.raises(ConfigError):
            SynthConfig(ordinary_rate=-1.0).validate()
        with pytest.raises(ConfigError):
            SynthConfig(pubs_min=0).validate()
