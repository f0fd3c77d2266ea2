"""Seeded synthetic corpus generator for tests, demos, and calibration runs.

Every publication draws a latent yearly citation rate from a two-component
mixture (ordinary vs. high-impact); yearly citation increments are Poisson
with that rate, accumulated into the cumulative series the data model
expects. A pure function of (config, seed): the same inputs always produce
byte-identical corpora.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .corpus import Continent, Corpus, Gender, Publication, Researcher
from .errors import ConfigError

# Sampled demographics only need to produce a plausible mix; weights loosely
# follow large bibliometric cohorts (male-skewed, EU/NA-heavy).
_GENDER_CHOICES = (Gender.MALE, Gender.FEMALE, Gender.UNKNOWN)
_GENDER_WEIGHTS = (0.70, 0.25, 0.05)
_CONTINENT_CHOICES = (
    Continent.EUROPE,
    Continent.NORTH_AMERICA,
    Continent.ASIA,
    Continent.AFRICA,
    Continent.OCEANIA,
    Continent.OTHER_UNKNOWN,
)
_CONTINENT_WEIGHTS = (0.47, 0.29, 0.13, 0.05, 0.02, 0.04)


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the generator; see generate_synthetic."""

    n_researchers: int = 100
    reference_year: int = 2023
    career_start_min: int = 1985
    career_start_max: int = 2016
    pubs_min: int = 5
    pubs_max: int = 30
    ordinary_rate: float = 1.5
    high_rate: float = 12.0
    high_impact_prob: float = 0.10
    core_prob: float = 0.8
    n_award_winners: int = 0
    winner_high_impact_prob: float | None = None

    def validate(self) -> None:
        if self.n_researchers <= 0:
            raise ConfigError("n_researchers must be positive")
        if self.pubs_min <= 0 or self.pubs_max < self.pubs_min:
            raise ConfigError("publication count range must be positive and ordered")
        if self.career_start_min > self.career_start_max:
            raise ConfigError("career start range must be ordered")
        if self.career_start_max > self.reference_year:
            raise ConfigError("career starts must not exceed the reference year")
        for name in ("ordinary_rate", "high_rate"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ConfigError(f"{name} must be finite and >= 0")
        for name in ("high_impact_prob", "core_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.winner_high_impact_prob is not None and not (
            0.0 <= self.winner_high_impact_prob <= 1.0
        ):
            raise ConfigError("winner_high_impact_prob must be in [0, 1]")
        if not 0 <= self.n_award_winners <= self.n_researchers:
            raise ConfigError("n_award_winners must be in [0, n_researchers]")


def _poisson(rng: random.Random, lam: float) -> int:
    """Knuth's product method; normal approximation above the exp underflow range."""
    if lam <= 0.0:
        return 0
    if lam > 700.0:
        return max(0, round(rng.gauss(lam, math.sqrt(lam))))
    limit = math.exp(-lam)
    k = 0
    prod = rng.random()
    while prod > limit:
        k += 1
        prod *= rng.random()
    return k


def generate_synthetic(config: SynthConfig, seed: int) -> Corpus:
    """Deterministically generate a corpus satisfying all model invariants."""
    config.validate()
    rng = random.Random(seed)
    winner_hi = (
        config.winner_high_impact_prob
        if config.winner_high_impact_prob is not None
        else config.high_impact_prob
    )
    researchers = []
    for i in range(config.n_researchers):
        rid = f"s{i:05d}"
        is_winner = i < config.n_award_winners
        gender = rng.choices(_GENDER_CHOICES, weights=_GENDER_WEIGHTS)[0]
        continent = rng.choices(_CONTINENT_CHOICES, weights=_CONTINENT_WEIGHTS)[0]
        career_start = rng.randint(config.career_start_min, config.career_start_max)
        n_pubs = rng.randint(config.pubs_min, config.pubs_max)
        hi_prob = winner_hi if is_winner else config.high_impact_prob
        years = sorted(
            rng.randint(career_start, config.reference_year) for _ in range(n_pubs)
        )
        pubs = []
        for j, year in enumerate(years):
            mean_rate = (
                config.high_rate if rng.random() < hi_prob else config.ordinary_rate
            )
            rate = mean_rate * rng.expovariate(1.0)
            total = 0
            series = []
            for _ in range(config.reference_year - year + 1):
                total += _poisson(rng, rate)
                series.append(total)
            pubs.append(
                Publication(
                    pub_id=f"{rid}:p{j:03d}",
                    year=year,
                    is_field_core=rng.random() < config.core_prob,
                    citation_series=tuple(series),
                )
            )
        award_years: tuple[int, ...] = ()
        if is_winner:
            first = min(years)
            earliest = min(first + 5, config.reference_year)
            award_years = (rng.randint(earliest, config.reference_year),)
        researchers.append(
            Researcher(
                researcher_id=rid,
                name=f"Synthetic Researcher {i:05d}",
                gender=gender,
                continent=continent,
                publications=tuple(pubs),
                award_years=award_years,
            )
        )
    corpus = Corpus(researchers=tuple(researchers), reference_year=config.reference_year)
    corpus.validate()
    return corpus
