"""End-to-end pipeline integration on a larger generated corpus.

Drives curate -> score -> ued -> report through the CLI on a few thousand
synthetic raw records and checks the seams between stages: conservation
through curation, agreement between per-post scores and group aggregates,
and consistency between curated speakers and profile rows.
"""

import csv
import json
import math
import random

import pytest

from emodyn.cli import main


N_RECORDS = 2500


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline")
    rng = random.Random(2024)
    words = [f"word{i:02d}" for i in range(40)] + ["café", "naïve"]

    lexicon_path = root / "lexicon.tsv"
    with open(lexicon_path, "w", encoding="utf-8") as fh:
        fh.write("term\tvalence\tarousal\tdominance\n")
        for word in words:
            fh.write(f"{word}\t{rng.uniform(0, 1)!r}\t{rng.uniform(0, 1)!r}"
                     f"\t{rng.uniform(0, 1)!r}\n")

    raw_path = root / "raw.jsonl"
    cities = {"ca": ["toronto", "vancouver"], "us": ["austin", "newyork"]}
    with open(raw_path, "w", encoding="utf-8") as fh:
        for i in range(N_RECORDS):
            country = rng.choice(["ca", "us"])
            record = {
                "tweet_id": f"t{i:05d}",
                "speaker_id": f"user{rng.randrange(40):02d}",
                "created_at": f"2020-{rng.randrange(1, 13):02d}-"
                              f"{rng.randrange(1, 29):02d}T"
                              f"{rng.randrange(24):02d}:{rng.randrange(60):02d}:00Z",
                "country": country,
                "city": rng.choice(cities[country]),
                "language": rng.choice(["en"] * 8 + ["fr", "es"]),
                "is_retweet": rng.random() < 0.1,
                "has_url_or_media": rng.random() < 0.1,
                "text": " ".join(rng.choices(words + ["oov1", "oov2"],
                                             k=rng.randrange(1, 16))),
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    return root, raw_path, lexicon_path


def run(*argv):
    return main([str(a) for a in argv])


def test_full_pipeline_consistency(corpus):
    root, raw_path, lexicon_path = corpus
    curated_path = root / "curated.jsonl"
    stats_path = root / "stats.json"
    assert run("curate", "--input", raw_path, "--output", curated_path,
               "--stats-out", stats_path) == 0

    report = json.loads(stats_path.read_text())
    assert report["input_records"] == N_RECORDS
    assert report["parse_dropped"] == 0
    assert report["curation_input"] == (
        report["output_count"] + sum(report["dropped_per_rule"].values()))

    curated = [json.loads(line) for line in open(curated_path, encoding="utf-8")]
    assert len(curated) == report["output_count"]
    day_keys = [tuple(t["day_key"]) for t in curated]
    assert len(day_keys) == len(set(day_keys))
    assert all(len(t["tokens"]) >= 3 for t in curated)

    scored_dir = root / "scored"
    assert run("score", "--input", curated_path, "--output", scored_dir,
               "--lexicon", lexicon_path) == 0

    # group aggregates agree with a direct pass over the per-post score rows
    with open(scored_dir / "scores.csv", newline="", encoding="utf-8") as fh:
        score_rows = list(csv.DictReader(fh))
    assert len(score_rows) == len(curated)
    regrouped = {}
    for row in score_rows:
        key = (row["country"], row["year"])
        bucket = regrouped.setdefault(key, {"n": 0, "means": [], "low": 0, "high": 0})
        bucket["n"] += 1
        if row["V_mean"] != "":
            bucket["means"].append(float(row["V_mean"]))
        bucket["low"] += row["V_has_low"] == "1"
        bucket["high"] += row["V_has_high"] == "1"
    with open(scored_dir / "aggregates.csv", newline="", encoding="utf-8") as fh:
        for agg in csv.DictReader(fh):
            bucket = regrouped[(agg["country"], agg["year"])]
            assert int(agg["n_tweets"]) == bucket["n"]
            assert int(agg["V_n_scored"]) == len(bucket["means"])
            if bucket["means"]:
                expected = math.fsum(bucket["means"]) / len(bucket["means"])
                assert float(agg["V_mean"]) == pytest.approx(expected, abs=1e-12)
            assert float(agg["V_pct_high"]) == pytest.approx(
                100.0 * bucket["high"] / bucket["n"], abs=1e-12)

    # monthly rollup totals re-sum to the overall aggregates
    with open(scored_dir / "monthly.csv", newline="", encoding="utf-8") as fh:
        monthly = list(csv.DictReader(fh))
    monthly_totals = {}
    for row in monthly:
        key = (row["country"], row["year"])
        monthly_totals[key] = monthly_totals.get(key, 0) + int(row["n_tweets"])
    assert {k: b["n"] for k, b in regrouped.items()} == monthly_totals

    profiles_path = root / "profiles.csv"
    assert run("ued", "--input", curated_path, "--output", profiles_path,
               "--lexicon", lexicon_path, "--window", "10", "--min-tweets", "5") == 0
    with open(profiles_path, newline="", encoding="utf-8") as fh:
        profile_rows = list(csv.DictReader(fh))
    skips = list(csv.DictReader(open(f"{profiles_path}.skips.csv", encoding="utf-8")))
    curated_speakers = {t["speaker_id"] for t in curated}
    profiled = {r["speaker"] for r in profile_rows}
    skipped = {s["speaker"] for s in skips if s["speaker"]}
    assert profiled | skipped == curated_speakers
    assert not profiled & skipped
    for row in profile_rows:
        if row["mean"] == "":
            continue
        assert 0.0 <= float(row["mean"]) <= 1.0
        assert float(row["home_low"]) <= float(row["mean"]) <= float(row["home_high"])
        n_tweets = sum(1 for t in curated if t["speaker_id"] == row["speaker"])
        assert int(row["n_tweets"]) == n_tweets

    report_dir = root / "report"
    assert run("report", "--input", profiles_path, "--output", report_dir) == 0
    box_rows = list(csv.DictReader(open(report_dir / "box.csv", encoding="utf-8")))
    assert box_rows
    for row in box_rows:
        assert float(row["q1"]) <= float(row["median"]) <= float(row["q3"])
