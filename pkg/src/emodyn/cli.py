"""Command-line pipeline: curate, score, ued, compare, report.

Configuration comes from defaults, then an optional key=value config file,
then explicit flags (flags win).  Each run echoes its resolved config and
input checksums into a run-manifest file next to the primary output.
Identical config and inputs produce byte-identical outputs for any worker
count.  Exit codes: 0 success, 1 fatal config/IO error, 2 data validation
failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Optional

from . import __version__
from .ingest import (ParseFailure, corpus_stats, curate, curated_to_json,
                     parse_records, read_curated)
from .lexicon import (DIMENSION_LETTERS, DIMENSIONS, LETTER_FOR_DIMENSION,
                      Lexicon, LexiconError, ThresholdConfig, default_removals,
                      load_lexicon, load_removals)
from .scoring import TweetScorer, Aggregator, make_key_fn
from .stats import box_stats, histogram, paired_t_test
from .ued import (IneligibleSpeakerError, UEDConfig, build_speaker_stream,
                  profile_stream, rekeyed_streams)

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_VALIDATION = 2

_SCORE_CHUNK = 4096


@dataclass
class RunConfig:
    lexicon: Optional[str] = None
    removals: Optional[str] = None   # None: packaged default removal list
    input: Optional[str] = None
    output: Optional[str] = None
    format: str = "jsonl"
    dimensions: str = "V,A,D"
    low: float = 0.33
    high: float = 0.67
    window: int = 20
    min_tweets: int = 100
    min_tokens: int = 3
    language: str = "en"
    speaker_key: str = "user"
    group_by: str = "country,year"
    workers: int = 1
    quartile_method: str = "linear"
    cross_boundaries: bool = True
    polar_states: bool = False
    sample_sd: bool = True
    rate_origin: str = "boundary"
    per_year: bool = False
    alpha: float = 0.001
    bins: float = 0.005


class ConfigError(Exception):
    pass


class ValidationError(Exception):
    pass


_BOOL_VALUES = {"true": True, "1": True, "yes": True,
                "false": False, "0": False, "no": False}


def _coerce(value: str, target_type) -> object:
    if target_type is bool:
        try:
            return _BOOL_VALUES[value.strip().lower()]
        except KeyError:
            raise ConfigError(f"not a boolean: {value!r}")
    if target_type in (int, float):
        try:
            return target_type(value)
        except ValueError:
            raise ConfigError(f"not a number: {value!r}")
    return value


def load_config_file(path: str) -> dict[str, str]:
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value")
            key, value = line.split("=", 1)
            entries[key.strip()] = value.strip()
    return entries


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicit flags"""
    config = RunConfig()
    field_types = {f.name: f.type for f in fields(RunConfig)}
    base_types = {"lexicon": str, "removals": str, "input": str, "output": str}
    if getattr(args, "config", None):
        for key, raw in load_config_file(args.config).items():
            if key not in field_types:
                raise ConfigError(f"unknown config key: {key}")
            target = base_types.get(key) or type(getattr(config, key))
            setattr(config, key, _coerce(raw, target))
    for name in field_types:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    _validate_config(config)
    return config


def _validate_config(config: RunConfig) -> None:
    if config.format not in ("jsonl", "csv"):
        raise ConfigError(f"unknown format: {config.format}")
    try:
        ThresholdConfig(config.low, config.high)
    except ValueError as exc:
        raise ConfigError(str(exc))
    if config.window < 1:
        raise ConfigError("window must be >= 1")
    if config.min_tweets < 0:
        raise ConfigError("min_tweets must be >= 0")
    if config.min_tokens < 0:
        raise ConfigError("min_tokens must be >= 0")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
    if config.speaker_key not in ("user", "city", "country"):
        raise ConfigError(f"unknown speaker key: {config.speaker_key}")
    if config.quartile_method not in ("linear", "tukey"):
        raise ConfigError(f"unknown quartile method: {config.quartile_method}")
    if config.rate_origin not in ("boundary", "center"):
        raise ConfigError(f"unknown rate origin: {config.rate_origin}")
    if not (0.0 < config.alpha < 1.0):
        raise ConfigError("alpha must be in (0, 1)")
    _parse_dimensions(config.dimensions)
    for path_field in ("lexicon", "removals", "input"):
        path = getattr(config, path_field)
        if path is not None and not Path(path).is_file():
            raise ConfigError(f"{path_field} file not found: {path}")


def _parse_dimensions(spec: str) -> tuple[str, ...]:
    wanted = set()
    for part in spec.replace(",", " ").split():
        part = part.strip()
        if not part:
            continue
        if part.upper() in DIMENSION_LETTERS:
            wanted.add(DIMENSION_LETTERS[part.upper()])
        elif part.lower() in DIMENSIONS:
            wanted.add(part.lower())
        else:
            raise ConfigError(f"unknown dimension: {part}")
    dims = tuple(d for d in DIMENSIONS if d in wanted)
    if not dims:
        raise ConfigError("no dimensions selected")
    return dims


def _parse_group_fields(spec: str) -> tuple[str, ...]:
    names = tuple(p.strip() for p in spec.split(",") if p.strip())
    if not names:
        raise ConfigError("empty group-by")
    return names


def _load_lexicon(config: RunConfig) -> Lexicon:
    if config.lexicon is None:
        raise ConfigError("--lexicon is required for this command")
    removals = load_removals(config.removals) if config.removals else default_removals()
    return load_lexicon(config.lexicon, removals)


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(anchor: str, command: str, config: RunConfig,
                   inputs: Iterable[str]) -> None:
    manifest = {
        "command": command,
        "config": asdict(config),
        "inputs": {
            str(p): {"sha256": _sha256(str(p)), "bytes": Path(p).stat().st_size}
            for p in inputs
        },
        "version": __version__,
    }
    with open(f"{anchor}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(value) -> str:
    """CSV cell: floats as shortest round-trip repr, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------- curate

def cmd_curate(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.input is None:
        raise ConfigError("--input is required")
    if not args.stats_only and config.output is None:
        raise ConfigError("--output is required unless --stats-only")
    stats_path = args.stats_out or (f"{config.output}.stats.json" if config.output else None)
    if args.stats_only and stats_path is None:
        raise ConfigError("--stats-only needs --stats-out or --output")

    failures: list[ParseFailure] = []
    with open(config.input, encoding="utf-8") as fh:
        records = parse_records(fh, config.format, failures)
        curated, stats = curate(records, config.min_tokens, config.language)

    if not args.stats_only:
        with open(config.output, "w", encoding="utf-8") as out:
            for tweet in curated:
                out.write(curated_to_json(tweet) + "\n")

    reasons: dict[str, int] = {}
    for failure in failures:
        reasons[failure.reason] = reasons.get(failure.reason, 0) + 1
    report = {
        "input_records": stats.input_count + len(failures),
        "parse_dropped": len(failures),
        "parse_drop_reasons": dict(sorted(reasons.items())),
        "curation_input": stats.input_count,
        "dropped_per_rule": stats.dropped_per_rule,
        "output_count": stats.output_count,
    }
    with open(stats_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    if args.corpus_stats:
        group_fields = _parse_group_fields(config.group_by)
        key_fn = _curated_key_fn(group_fields)
        table = corpus_stats(curated, key_fn)
        with open(args.corpus_stats, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["group", "tweets", "tweeters", "avg_tokens_per_tweet"])
            for key in sorted(table, key=lambda k: tuple(str(p) for p in k)):
                tweets_n, speakers_n, avg = table[key]
                writer.writerow(["/".join(str(p) for p in key),
                                 tweets_n, speakers_n, _fmt(avg)])

    anchor = config.output if config.output else stats_path
    write_manifest(anchor, "curate", config, [config.input])
    return EXIT_OK


def _curated_key_fn(names: tuple[str, ...]):
    allowed = ("country", "city", "language", "speaker_id", "year", "month")
    for name in names:
        if name not in allowed:
            raise ConfigError(f"unknown group field: {name}")

    def key_fn(tweet) -> tuple:
        parts = []
        for name in names:
            if name == "year":
                parts.append(tweet.created_at.year)
            elif name == "month":
                parts.append(tweet.created_at.month)
            else:
                parts.append(getattr(tweet, name) or "")
        return tuple(parts)

    return key_fn


# ---------------------------------------------------------------- score

def _score_header(dims: tuple[str, ...]) -> list[str]:
    header = ["tweet_id", "speaker_id", "country", "city", "year", "month"]
    for dim in dims:
        letter = LETTER_FOR_DIMENSION[dim]
        header += [f"{letter}_mean", f"{letter}_n", f"{letter}_has_low", f"{letter}_has_high"]
    return header


def cmd_score(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.input is None or config.output is None:
        raise ConfigError("--input and --output are required")
    dims = _parse_dimensions(config.dimensions)
    group_fields = _parse_group_fields(config.group_by)
    try:
        key_fn = make_key_fn(group_fields)
    except ValueError as exc:
        raise ConfigError(str(exc))
    lexicon = _load_lexicon(config)
    scorer = TweetScorer(lexicon, ThresholdConfig(config.low, config.high), dims)

    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    scores_path = out_dir / "scores.csv"
    agg_path = out_dir / "aggregates.csv"
    monthly_path = out_dir / "monthly.csv"

    aggregator = Aggregator(key_fn, dims)
    monthly = Aggregator(lambda s: (*key_fn(s), s.year, s.month), dims)

    with open(config.input, encoding="utf-8") as fh, \
         open(scores_path, "w", encoding="utf-8", newline="") as scores_fh:
        writer = csv.writer(scores_fh, lineterminator="\n")
        writer.writerow(_score_header(dims))
        tweets = read_curated(fh)
        for scored_chunk in _scored_chunks(tweets, scorer, config.workers):
            for score in scored_chunk:
                row = [score.tweet_id, score.speaker_id,
                       score.country or "", score.city or "",
                       score.year, score.month]
                for dim in dims:
                    ds = score.dims[dim]
                    row += [_fmt(ds.mean), ds.matched,
                            _fmt(ds.has_low), _fmt(ds.has_high)]
                writer.writerow(row)
                aggregator.add(score)
                monthly.add(score)

    _write_aggregates(agg_path, aggregator.finalize(), group_fields, dims)
    _write_aggregates(monthly_path, monthly.finalize(),
                      group_fields + ("year", "month"), dims)
    write_manifest(str(scores_path), "score", config, [config.input, config.lexicon])
    return EXIT_OK


def _scored_chunks(tweets, scorer: TweetScorer, workers: int):
    """Score in input order; chunks fan out to threads when workers > 1."""
    if workers <= 1:
        iterator = iter(tweets)
        while True:
            chunk = list(itertools.islice(iterator, _SCORE_CHUNK))
            if not chunk:
                return
            yield [scorer.score(t) for t in chunk]
    else:
        iterator = iter(tweets)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            while True:
                chunks = []
                for _ in range(workers):
                    chunk = list(itertools.islice(iterator, _SCORE_CHUNK))
                    if not chunk:
                        break
                    chunks.append(chunk)
                if not chunks:
                    return
                yield from pool.map(lambda c: [scorer.score(t) for t in c], chunks)


def _write_aggregates(path, aggregates, group_fields, dims) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = list(group_fields) + ["n_tweets"]
        for dim in dims:
            letter = LETTER_FOR_DIMENSION[dim]
            header += [f"{letter}_mean", f"{letter}_n_scored",
                       f"{letter}_pct_low", f"{letter}_pct_high"]
        writer.writerow(header)
        for key in sorted(aggregates, key=lambda k: tuple(str(p) for p in k)):
            agg = aggregates[key]
            row = [str(p) for p in key] + [agg.n_tweets]
            for dim in dims:
                da = agg.dims[dim]
                row += [_fmt(da.mean), da.n_scored, _fmt(da.pct_low), _fmt(da.pct_high)]
            writer.writerow(row)


# ---------------------------------------------------------------- ued

_PROFILE_COLUMNS = [
    "speaker", "dimension", "year", "country", "n_tweets", "n_tokens",
    "n_states", "coverage", "mean", "variability", "home_low", "home_high",
    "n_excursions", "rise_rate", "recovery_rate",
    "rate_hm_hi", "rate_hi_hm", "rate_hm_lo", "rate_lo_hm",
]


def _modal_country(tweets) -> str:
    counts: dict[str, int] = {}
    for tweet in tweets:
        if tweet.country:
            counts[tweet.country] = counts.get(tweet.country, 0) + 1
    if not counts:
        return ""
    # deterministic tie-break: highest count, then lexicographically first
    top = max(counts.values())
    return sorted(c for c, n in counts.items() if n == top)[0]


def cmd_ued(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.input is None or config.output is None:
        raise ConfigError("--input and --output are required")
    dims = _parse_dimensions(config.dimensions)
    lexicon = _load_lexicon(config)
    ued_config = UEDConfig(
        window_size=config.window, min_tweets=config.min_tweets,
        cross_boundaries=config.cross_boundaries, polar_only=config.polar_states,
        sample_sd=config.sample_sd, rate_origin=config.rate_origin,
        thresholds=ThresholdConfig(config.low, config.high), dimensions=dims,
    )

    with open(config.input, encoding="utf-8") as fh:
        curated = list(read_curated(fh))
    streams, missing_key = rekeyed_streams(curated, config.speaker_key)

    units: list[tuple[str, str, list]] = []  # (speaker, year_label, tweets)
    for speaker in sorted(streams):
        stream = streams[speaker]
        if config.per_year:
            by_year: dict[int, list] = {}
            for tweet in stream.tweets:
                by_year.setdefault(tweet.created_at.year, []).append(tweet)
            for year in sorted(by_year):
                units.append((speaker, str(year), by_year[year]))
        else:
            units.append((speaker, "", stream.tweets))

    skips: list[tuple[str, str, str]] = []
    states_fh = open(args.states_out, "w", encoding="utf-8") if args.states_out else None
    try:
        with open(config.output, "w", encoding="utf-8", newline="") as out:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(_PROFILE_COLUMNS)
            for speaker, year_label, tweets in units:
                try:
                    profile = profile_stream(build_speaker_stream(tweets), lexicon, ued_config)
                except IneligibleSpeakerError as exc:
                    skips.append((speaker, year_label, exc.reason))
                    continue
                country = _modal_country(tweets)
                for dim in dims:
                    dp = profile.dims[dim]
                    home_low = dp.home.low if dp.home else None
                    home_high = dp.home.high if dp.home else None
                    writer.writerow([
                        speaker, LETTER_FOR_DIMENSION[dim], year_label, country,
                        profile.n_tweets, profile.n_tokens, dp.n_states,
                        _fmt(dp.coverage), _fmt(dp.mean), _fmt(dp.variability),
                        _fmt(home_low), _fmt(home_high), dp.n_excursions,
                        _fmt(dp.rates.rise), _fmt(dp.rates.recovery),
                        _fmt(dp.rates.hm_hi), _fmt(dp.rates.hi_hm),
                        _fmt(dp.rates.hm_lo), _fmt(dp.rates.lo_hm),
                    ])
                if states_fh is not None:
                    _dump_states(states_fh, speaker, year_label, tweets, lexicon, ued_config)
    finally:
        if states_fh is not None:
            states_fh.close()

    with open(f"{config.output}.skips.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["speaker", "year", "reason"])
        for speaker, year_label, reason in skips:
            writer.writerow([speaker, year_label, reason])
        if missing_key:
            writer.writerow(["", "", f"missing_{config.speaker_key}:{missing_key}"])

    write_manifest(config.output, "ued", config, [config.input, config.lexicon])
    return EXIT_OK


def _dump_states(fh, speaker: str, year_label: str, tweets, lexicon, ued_config) -> None:
    from .ued import build_state_series

    stream = build_speaker_stream(tweets)
    for dim in ued_config.dimensions:
        series = build_state_series(
            stream, lexicon, dim,
            window_size=ued_config.window_size, step=ued_config.step,
            cross_boundaries=ued_config.cross_boundaries,
            polar_only=ued_config.polar_only, thresholds=ued_config.thresholds,
        )
        fh.write(json.dumps({
            "speaker": speaker,
            "year": year_label,
            "dimension": LETTER_FOR_DIMENSION[dim],
            "window": ued_config.window_size,
            "indices": series.indices,
            "values": series.values,
        }) + "\n")


# ---------------------------------------------------------------- compare

def _read_keyed_csv(path: str, pair_key: str) -> tuple[list[str], dict[str, dict[str, str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or pair_key not in reader.fieldnames:
            raise ValidationError(f"{path}: pairing key column {pair_key!r} not found")
        rows: dict[str, dict[str, str]] = {}
        for row in reader:
            key = row[pair_key]
            if key in rows:
                raise ValidationError(f"{path}: duplicate pairing key {key!r}")
            rows[key] = row
        return list(reader.fieldnames), rows


def cmd_compare(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.output is None:
        raise ConfigError("--output is required")
    for path in (args.left, args.right):
        if not Path(path).is_file():
            raise ConfigError(f"input file not found: {path}")
    header_a, rows_a = _read_keyed_csv(args.left, args.pair_key)
    header_b, rows_b = _read_keyed_csv(args.right, args.pair_key)
    only_a = sorted(set(rows_a) - set(rows_b))
    only_b = sorted(set(rows_b) - set(rows_a))
    if only_a or only_b:
        raise ValidationError(
            "unpaired rows; keys only in left: %s; only in right: %s"
            % (only_a or "[]", only_b or "[]"))
    if not rows_a:
        raise ValidationError("no rows to pair")

    if args.metrics:
        metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
        for metric in metrics:
            if metric not in header_a or metric not in header_b:
                raise ValidationError(f"metric column {metric!r} missing from input")
    else:
        metrics = [c for c in header_a
                   if c != args.pair_key and c in header_b and _column_is_numeric(rows_a, c)]

    keys = sorted(rows_a)
    out_rows = []
    for metric in metrics:
        pairs = []
        for key in keys:
            left_cell = rows_a[key].get(metric, "")
            right_cell = rows_b[key].get(metric, "")
            if left_cell == "" or right_cell == "":
                continue
            try:
                pairs.append((float(left_cell), float(right_cell)))
            except ValueError:
                raise ValidationError(
                    f"metric column {metric!r} has a non-numeric value at key {key!r}")
        if len(pairs) < 2:
            out_rows.append([metric, len(pairs), "", "", "", "", ""])
            continue
        a_vals = [p[0] for p in pairs]
        b_vals = [p[1] for p in pairs]
        try:
            result = paired_t_test(a_vals, b_vals, config.alpha)
        except ValueError as exc:
            # e.g. degenerate_variance: report the row with empty statistics
            print(f"warning: {metric}: {exc}", file=sys.stderr)
            out_rows.append([metric, len(pairs), "", "", "", "", ""])
            continue
        out_rows.append([
            metric, result.n_pairs, _fmt(result.mean_difference),
            _fmt(result.t_statistic), result.degrees_of_freedom,
            _fmt(result.p_value), _fmt(result.significant),
        ])

    target = config.output
    with open(target, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["comparison", "n", "mean_diff", "t", "df", "p", "significant"])
        writer.writerows(out_rows)
    write_manifest(target, "compare", config, [args.left, args.right])
    return EXIT_OK


def _column_is_numeric(rows: dict[str, dict[str, str]], column: str) -> bool:
    saw_value = False
    for row in rows.values():
        cell = row.get(column, "")
        if cell == "":
            continue
        saw_value = True
        try:
            float(cell)
        except ValueError:
            return False
    return saw_value


# ---------------------------------------------------------------- report

def cmd_report(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.input is None or config.output is None:
        raise ConfigError("--input and --output are required")
    try:
        histogram([], config.bins)  # validate bin width before touching outputs
    except ValueError as exc:
        raise ConfigError(str(exc))
    with open(config.input, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        rows = list(reader)

    if args.report_group_by:
        group_cols = [c.strip() for c in args.report_group_by.split(",") if c.strip()]
        for col in group_cols:
            if col not in header:
                raise ValidationError(f"group column {col!r} not in input")
    else:
        group_cols = [c for c in ("country", "year", "dimension") if c in header]

    ids = {"speaker", "speaker_id", "tweet_id", "group"}
    keyed_rows: dict[str, dict[str, str]] = {str(i): r for i, r in enumerate(rows)}
    if args.metrics:
        metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
        for metric in metrics:
            if metric not in header:
                raise ValidationError(f"metric column {metric!r} not in input")
    else:
        metrics = [c for c in header
                   if c not in group_cols and c not in ids
                   and _column_is_numeric(keyed_rows, c)]

    groups: dict[tuple, list[dict[str, str]]] = {}
    for row in rows:
        key = tuple(row.get(c, "") for c in group_cols)
        groups.setdefault(key, []).append(row)

    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    box_path = out_dir / "box.csv"
    hist_path = out_dir / "hist.csv"

    with open(box_path, "w", encoding="utf-8", newline="") as box_fh, \
         open(hist_path, "w", encoding="utf-8", newline="") as hist_fh:
        box_writer = csv.writer(box_fh, lineterminator="\n")
        hist_writer = csv.writer(hist_fh, lineterminator="\n")
        box_writer.writerow(group_cols + [
            "metric", "n", "mean", "q1", "median", "q3",
            "whisker_low", "whisker_high", "n_outliers", "outliers"])
        hist_writer.writerow(group_cols + ["metric", "bin_index", "bin_lo", "bin_hi", "count"])
        for key in sorted(groups, key=lambda k: tuple(str(p) for p in k)):
            for metric in metrics:
                try:
                    values = [float(cell) for row in groups[key]
                              if (cell := row.get(metric, "")) != ""]
                except ValueError:
                    raise ValidationError(f"metric column {metric!r} has non-numeric values")
                if not values:
                    continue
                box = box_stats(values, config.quartile_method)
                box_writer.writerow(list(key) + [
                    metric, box.n, _fmt(box.mean), _fmt(box.q1), _fmt(box.median),
                    _fmt(box.q3), _fmt(box.whisker_low), _fmt(box.whisker_high),
                    len(box.outliers), ";".join(repr(v) for v in box.outliers)])
                hist = histogram(values, config.bins)
                for index, count in enumerate(hist.counts):
                    if count:
                        lo, hi = hist.bin_edges(index)
                        hist_writer.writerow(list(key) + [metric, index, _fmt(lo), _fmt(hi), count])
                if hist.out_of_range:
                    hist_writer.writerow(list(key) + [metric, "out_of_range", "", "", hist.out_of_range])

    write_manifest(str(box_path), "report", config, [config.input])
    return EXIT_OK


# ---------------------------------------------------------------- driver

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--lexicon", help="lexicon file (word<TAB>V<TAB>A<TAB>D)")
    parser.add_argument("--removals", help="removal list; packaged default when omitted")
    parser.add_argument("--input", help="input file")
    parser.add_argument("--output", help="output file or directory")
    parser.add_argument("--format", choices=("jsonl", "csv"), default=None)
    parser.add_argument("--dimensions", default=None, help="e.g. V or V,A,D")
    parser.add_argument("--window", type=int, default=None)
    parser.add_argument("--min-tweets", dest="min_tweets", type=int, default=None)
    parser.add_argument("--min-tokens", dest="min_tokens", type=int, default=None)
    parser.add_argument("--speaker-key", dest="speaker_key",
                        choices=("user", "city", "country"), default=None)
    parser.add_argument("--group-by", dest="group_by", default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--low", type=float, default=None, help="low polar threshold")
    parser.add_argument("--high", type=float, default=None, help="high polar threshold")
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--bins", type=float, default=None, help="histogram bin width")
    parser.add_argument("--quartile-method", dest="quartile_method",
                        choices=("linear", "tukey"), default=None)
    parser.add_argument("--rate-origin", dest="rate_origin",
                        choices=("boundary", "center"), default=None)
    parser.add_argument("--no-cross-boundaries", dest="cross_boundaries",
                        action="store_false", default=None)
    parser.add_argument("--polar-states", dest="polar_states",
                        action="store_true", default=None)
    parser.add_argument("--population-sd", dest="sample_sd",
                        action="store_false", default=None)
    parser.add_argument("--per-year", dest="per_year", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emodyn",
        description="Lexicon-based emotion scores and emotion-dynamics profiles "
                    "over timestamped short texts.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curate", help="filter raw records into the curated corpus")
    _add_common(p)
    p.add_argument("--stats-only", dest="stats_only", action="store_true")
    p.add_argument("--stats-out", dest="stats_out")
    p.add_argument("--corpus-stats", dest="corpus_stats",
                   help="also write group,tweets,tweeters,avg_tokens_per_tweet CSV")
    p.set_defaults(func=cmd_curate)

    p = sub.add_parser("score", help="per-post scores, group aggregates, monthly rollup")
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("ued", help="per-speaker emotion-dynamics profiles")
    _add_common(p)
    p.add_argument("--states-out", dest="states_out",
                   help="also dump per-speaker state series as JSONL")
    p.set_defaults(func=cmd_ued)

    p = sub.add_parser("compare", help="paired t-tests between two keyed CSVs")
    _add_common(p)
    p.add_argument("left", help="first CSV")
    p.add_argument("right", help="second CSV")
    p.add_argument("--pair-key", dest="pair_key", required=True,
                   help="column that pairs rows across the two files")
    p.add_argument("--metrics", help="comma-separated metric columns (default: shared numeric)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="plot-ready box stats and histograms")
    _add_common(p)
    p.add_argument("--metrics", help="comma-separated metric columns")
    p.add_argument("--report-group-by", dest="report_group_by",
                   help="columns to group on (default: country,year,dimension present)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except LexiconError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except UnicodeDecodeError as exc:
        print(f"error: input is not valid UTF-8: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
