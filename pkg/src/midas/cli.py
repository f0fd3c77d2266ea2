"""Command-line entry point: validate, compute, sweep, compare, simulate.

Every run is a pure function of (config, seed): repeated invocations write
byte-identical outputs, whatever MIDAS_THREADS is set to. Exit codes are a
stable scripting contract: 0 success, 1 domain/validation failure, 2
usage/config/I-O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .corpus import (
    CSV_FORMAT,
    JSONL_FORMAT,
    Corpus,
    EligibilityRule,
    filter_eligible,
    load_corpus,
    save_corpus,
)
from .errors import ConfigError, CorpusFormatError, MidasError
from .indicators import (
    DEFAULT_CITATION_THRESHOLD,
    DEFAULT_TIME_THRESHOLD,
    AmtParams,
    indicator_report,
    IndicatorReport,
)
from .matching import (
    PRIZE_YEAR,
    TimePoint,
    build_matched_control,
    compare_groups,
    emit_distribution_data,
    verify_balance,
)
from .parallel import ordered_map
from .sweep import (
    DEFAULT_X_VALUES,
    DEFAULT_Y_VALUES,
    emit_heatmap,
    fit_sweep,
    format_fit,
    run_sweep,
)
from .synth import SynthConfig, generate_synthetic

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

_CONFIG_KEYS = {
    "corpus": str,
    "format": str,
    "out": str,
    "seed": int,
    "as_of": int,
    "x": int,
    "y": int,
    "reference_year": int,
    "min_journal_articles": int,
    "min_core_fraction": float,
    "min_span_years": int,
    "sweep_x": str,
    "sweep_y": str,
    "treated": str,
    "researchers": int,
    "award_winners": int,
    "pubs_min": int,
    "pubs_max": int,
    "career_start_min": int,
    "career_start_max": int,
    "ordinary_rate": float,
    "high_rate": float,
    "high_impact_prob": float,
    "winner_high_impact_prob": float,
}


@dataclass
class RunConfig:
    corpus: str | None = None
    format: str = JSONL_FORMAT
    out: str = "."
    seed: int = 0
    as_of: int | None = None
    x: int = DEFAULT_TIME_THRESHOLD
    y: int = DEFAULT_CITATION_THRESHOLD
    reference_year: int | None = None
    min_journal_articles: int = 5
    min_core_fraction: float = 0.5
    min_span_years: int = 5
    sweep_x: str = ",".join(str(v) for v in DEFAULT_X_VALUES)
    sweep_y: str = ",".join(str(v) for v in DEFAULT_Y_VALUES)
    treated: str | None = None
    researchers: int = 100
    award_winners: int = 0
    pubs_min: int = 5
    pubs_max: int = 30
    career_start_min: int = 1985
    career_start_max: int = 2016
    ordinary_rate: float = 1.5
    high_rate: float = 12.0
    high_impact_prob: float = 0.10
    winner_high_impact_prob: float | None = None


def _parse_config_file(path: str) -> dict:
    """Flat key=value file; # starts a comment, blank lines are skipped."""
    values: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in _parse_config_file(args.config).items():
            setattr(cfg, key, value)
    # explicit flags win over the config file
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(cfg, key, flag)
    if cfg.format not in (JSONL_FORMAT, CSV_FORMAT):
        raise ConfigError(f"unknown corpus format {cfg.format!r}")
    return cfg


def _parse_axis(text: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"bad {name} axis {text!r}: expected comma-separated integers") from exc


def _load(cfg: RunConfig) -> Corpus:
    if not cfg.corpus:
        raise ConfigError("no corpus file given (use --corpus or a config file)")
    return load_corpus(cfg.corpus, format=cfg.format, reference_year=cfg.reference_year)


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_validate(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    n_pubs = sum(len(r.publications) for r in corpus.researchers)
    print(f"researchers={len(corpus)} publications={n_pubs}")
    return EXIT_OK


def _rule(cfg: RunConfig) -> EligibilityRule:
    return EligibilityRule(
        min_journal_articles=cfg.min_journal_articles,
        min_core_fraction=cfg.min_core_fraction,
        min_span_years=cfg.min_span_years,
    )


def cmd_compute(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    eligible = filter_eligible(corpus, _rule(cfg))
    as_of = cfg.as_of if cfg.as_of is not None else eligible.reference_year
    params = AmtParams(time_threshold_x=cfg.x, citation_threshold_y=cfg.y)
    researchers = sorted(eligible.researchers, key=lambda r: r.researcher_id)
    reports = ordered_map(lambda r: indicator_report(r, params, as_of), researchers)
    out = _out_dir(cfg) / "indicators.csv"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(IndicatorReport.CSV_HEADER + "\n")
        for report in reports:
            fh.write(report.to_csv_row() + "\n")
    print(f"wrote {out} rows={len(reports)}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    eligible = filter_eligible(corpus, _rule(cfg))
    as_of = cfg.as_of if cfg.as_of is not None else eligible.reference_year
    grid = run_sweep(
        eligible,
        x_values=_parse_axis(cfg.sweep_x, "sweep_x"),
        y_values=_parse_axis(cfg.sweep_y, "sweep_y"),
        as_of_year=as_of,
    )
    fit = fit_sweep(grid)
    out = _out_dir(cfg)
    emit_heatmap(grid, out / "sweep.csv")
    _write_json(out / "fit.json", fit.to_dict())
    print(format_fit(fit))
    print(f"wrote {out / 'sweep.csv'} and {out / 'fit.json'}")
    return EXIT_OK


def _read_treated_ids(path: str) -> list[str]:
    ids = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()]
    return [i for i in ids if i]


def cmd_compare(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    if not cfg.treated:
        raise ConfigError("compare requires --treated with one researcher id per line")
    treated_ids = _read_treated_ids(cfg.treated)
    if not treated_ids:
        raise ConfigError(f"treated id list {cfg.treated} is empty")
    lookup = corpus.by_id()
    missing = [i for i in treated_ids if i not in lookup]
    if missing:
        raise MidasError(f"treated id not in corpus: {missing[0]}")
    treated = [lookup[i] for i in treated_ids]
    treated_set = set(treated_ids)
    pool = [
        r for r in corpus.researchers
        if r.researcher_id not in treated_set and r.publications
    ]
    pairs = build_matched_control(treated, pool, corpus.reference_year)
    balance = verify_balance(pairs, lookup, corpus.reference_year)
    aligned_treated = [lookup[p.treated_id] for p in pairs]
    aligned_control = [lookup[p.control_id] for p in pairs]
    params = AmtParams(time_threshold_x=cfg.x, citation_threshold_y=cfg.y)
    report = compare_groups(
        aligned_treated,
        aligned_control,
        params,
        time_points=(PRIZE_YEAR, TimePoint("final_year", corpus.reference_year)),
        balance=balance,
    )
    out = _out_dir(cfg)
    (out / "comparison.csv").write_text(report.to_csv_text(), encoding="utf-8")
    _write_json(out / "comparison.json", report.to_dict())
    emit_distribution_data(report, out / "distributions.csv")
    print(
        f"balance p (age)={balance.academic_age.p_value:.4f} "
        f"(publications)={balance.publication_count.p_value:.4f}"
    )
    print(f"wrote {out / 'comparison.csv'}, {out / 'comparison.json'}, "
          f"{out / 'distributions.csv'}")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    synth = SynthConfig(
        n_researchers=cfg.researchers,
        reference_year=cfg.reference_year if cfg.reference_year is not None else 2023,
        career_start_min=cfg.career_start_min,
        career_start_max=cfg.career_start_max,
        pubs_min=cfg.pubs_min,
        pubs_max=cfg.pubs_max,
        ordinary_rate=cfg.ordinary_rate,
        high_rate=cfg.high_rate,
        high_impact_prob=cfg.high_impact_prob,
        n_award_winners=cfg.award_winners,
        winner_high_impact_prob=cfg.winner_high_impact_prob,
    )
    corpus = generate_synthetic(synth, cfg.seed)
    out = _out_dir(cfg) / "corpus.jsonl"
    save_corpus(corpus, out, format=JSONL_FORMAT)
    print(f"wrote {out} researchers={len(corpus)}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", help="corpus file path")
    parser.add_argument("--format", choices=[JSONL_FORMAT, CSV_FORMAT],
                        help="corpus file format (default jsonl)")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", help="output directory (default .)")
    parser.add_argument("--seed", type=int, help="seed for all randomness")
    parser.add_argument("--as-of", dest="as_of", type=int,
                        help="evaluate indicators as of this year")
    parser.add_argument("--x", type=int, help="AMT time threshold in years")
    parser.add_argument("--y", type=int, help="AMT citation threshold")
    parser.add_argument("--reference-year", dest="reference_year", type=int,
                        help="last observed year (default: inferred from the data)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="midas",
        description="AMT and classical scientometrics over bibliometric corpora",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a corpus file")
    _add_common(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("compute", help="indicator report per eligible researcher")
    _add_common(p)
    p.add_argument("--min-journal-articles", dest="min_journal_articles", type=int)
    p.add_argument("--min-core-fraction", dest="min_core_fraction", type=float)
    p.add_argument("--min-span-years", dest="min_span_years", type=int)
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("sweep", help="average AMT over an (x, y) grid plus plane fit")
    _add_common(p)
    p.add_argument("--min-journal-articles", dest="min_journal_articles", type=int)
    p.add_argument("--min-core-fraction", dest="min_core_fraction", type=float)
    p.add_argument("--min-span-years", dest="min_span_years", type=int)
    p.add_argument("--sweep-x", dest="sweep_x", help="comma-separated x values")
    p.add_argument("--sweep-y", dest="sweep_y", help="comma-separated y values")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("compare", help="award group vs matched control comparison")
    _add_common(p)
    p.add_argument("--treated", help="file with one treated researcher id per line")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("simulate", help="write a synthetic corpus JSONL")
    _add_common(p)
    p.add_argument("--researchers", type=int, help="number of researchers")
    p.add_argument("--award-winners", dest="award_winners", type=int,
                   help="number of award-winning researchers")
    p.add_argument("--pubs-min", dest="pubs_min", type=int)
    p.add_argument("--pubs-max", dest="pubs_max", type=int)
    p.add_argument("--career-start-min", dest="career_start_min", type=int)
    p.add_argument("--career-start-max", dest="career_start_max", type=int)
    p.add_argument("--ordinary-rate", dest="ordinary_rate", type=float)
    p.add_argument("--high-rate", dest="high_rate", type=float)
    p.add_argument("--high-impact-prob", dest="high_impact_prob", type=float)
    p.add_argument("--winner-high-impact-prob", dest="winner_high_impact_prob", type=float)
    p.set_defaults(handler=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        return args.handler(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusFormatError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN
    except MidasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
