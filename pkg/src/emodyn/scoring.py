"""Per-post emotion scores and group-level aggregates.

A post's score on one dimension is the mean score of its tokens that appear
in that dimension's polar lexicon view, with flags for whether any matched
token was low or high.  Group aggregates average the per-post means over
posts that matched at least one word, while the presence percentages use
every post in the group as denominator.  Accumulation is exact (Shewchuk
partials), so aggregates are identical for any input permutation and any
worker partitioning.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from .accum import ExactSum
from .ingest import CuratedTweet
from .lexicon import DEFAULT_THRESHOLDS, DIMENSIONS, HIGH, Lexicon, ThresholdConfig, classify_score

_CHUNK_SIZE = 8192


@dataclass
class DimensionScore:
    mean: Optional[float]
    matched: int
    has_low: bool
    has_high: bool


@dataclass
class TweetScore:
    tweet_id: str
    speaker_id: str
    country: Optional[str]
    city: Optional[str]
    year: int
    month: int
    dims: dict[str, DimensionScore]


@dataclass
class DimensionAggregate:
    mean: Optional[float]
    n_scored: int
    pct_low: float
    pct_high: float


@dataclass
class GroupAggregate:
    key: tuple
    n_tweets: int
    dims: dict[str, DimensionAggregate]


class TweetScorer:
    """Scores token lists against the polar views of a loaded lexicon."""

    def __init__(self, lexicon: Lexicon, thresholds: ThresholdConfig = DEFAULT_THRESHOLDS,
                 dimensions: tuple[str, ...] = DIMENSIONS):
        self.dimensions = tuple(dimensions)
        self.thresholds = thresholds
        # one lookup table: word -> ((score, is_high) | None) per dimension,
        # holding only words polar in at least one dimension
        table: dict[str, tuple] = {}
        for word, entry in lexicon.entries.items():
            slots = []
            any_polar = False
            for dim in self.dimensions:
                score = entry.score(dim)
                polarity = classify_score(score, thresholds)
                if polarity == "neutral":
                    slots.append(None)
                else:
                    slots.append((score, polarity == HIGH))
                    any_polar = True
            if any_polar:
                table[word] = tuple(slots)
        self._table = table

    def score_tokens(self, tokens: Iterable[str]) -> dict[str, DimensionScore]:
        table = self._table
        n_dims = len(self.dimensions)
        matched_scores: list[list[float]] = [[] for _ in range(n_dims)]
        has_low = [False] * n_dims
        has_high = [False] * n_dims
        for token in tokens:
            slots = table.get(token.lower())
            if slots is None:
                continue
            for i in range(n_dims):
                slot = slots[i]
                if slot is None:
                    continue
                score, is_high = slot
                matched_scores[i].append(score)
                if is_high:
                    has_high[i] = True
                else:
                    has_low[i] = True
        result = {}
        for i, dim in enumerate(self.dimensions):
            scores = matched_scores[i]
            mean = math.fsum(scores) / len(scores) if scores else None
            result[dim] = DimensionScore(mean, len(scores), has_low[i], has_high[i])
        return result

    def score(self, tweet: CuratedTweet) -> TweetScore:
        stamp = tweet.created_at
        return TweetScore(
            tweet_id=tweet.tweet_id,
            speaker_id=tweet.speaker_id,
            country=tweet.country,
            city=tweet.city,
            year=stamp.year,
            month=stamp.month,
            dims=self.score_tokens(tweet.tokens),
        )


def score_tweets(tweets: Iterable[CuratedTweet], scorer: TweetScorer) -> Iterator[TweetScore]:
    for tweet in tweets:
        yield scorer.score(tweet)


class _GroupAccumulator:
    __slots__ = ("n_tweets", "sums", "n_scored", "n_low", "n_high")

    def __init__(self, n_dims: int):
        self.n_tweets = 0
        self.sums = [ExactSum() for _ in range(n_dims)]
        self.n_scored = [0] * n_dims
        self.n_low = [0] * n_dims
        self.n_high = [0] * n_dims

    def add(self, score: TweetScore, dimensions: tuple[str, ...]) -> None:
        self.n_tweets += 1
        for i, dim in enumerate(dimensions):
            ds = score.dims[dim]
            if ds.mean is not None:
                self.sums[i].add(ds.mean)
                self.n_scored[i] += 1
            if ds.has_low:
                self.n_low[i] += 1
            if ds.has_high:
                self.n_high[i] += 1

    def merge(self, other: "_GroupAccumulator") -> None:
        self.n_tweets += other.n_tweets
        for i in range(len(self.sums)):
            self.sums[i].merge(other.sums[i])
            self.n_scored[i] += other.n_scored[i]
            self.n_low[i] += other.n_low[i]
            self.n_high[i] += other.n_high[i]


class Aggregator:
    """Single-pass, mergeable group aggregation."""

    def __init__(self, key_fn: Callable[[TweetScore], tuple],
                 dimensions: tuple[str, ...] = DIMENSIONS):
        self.key_fn = key_fn
        self.dimensions = tuple(dimensions)
        self._groups: dict[tuple, _GroupAccumulator] = {}

    def add(self, score: TweetScore) -> None:
        key = self.key_fn(score)
        acc = self._groups.get(key)
        if acc is None:
            acc = self._groups[key] = _GroupAccumulator(len(self.dimensions))
        acc.add(score, self.dimensions)

    def merge(self, other: "Aggregator") -> None:
        for key, acc in other._groups.items():
            mine = self._groups.get(key)
            if mine is None:
                self._groups[key] = acc
            else:
                mine.merge(acc)

    def finalize(self) -> dict[tuple, GroupAggregate]:
        out = {}
        for key, acc in self._groups.items():
            dims = {}
            for i, dim in enumerate(self.dimensions):
                n = acc.n_scored[i]
                dims[dim] = DimensionAggregate(
                    mean=acc.sums[i].value() / n if n else None,
                    n_scored=n,
                    pct_low=100.0 * acc.n_low[i] / acc.n_tweets if acc.n_tweets else 0.0,
                    pct_high=100.0 * acc.n_high[i] / acc.n_tweets if acc.n_tweets else 0.0,
                )
            out[key] = GroupAggregate(key=key, n_tweets=acc.n_tweets, dims=dims)
        return out


def aggregate_scores(scores: Iterable[TweetScore], key_fn: Callable[[TweetScore], tuple],
                     dimensions: tuple[str, ...] = DIMENSIONS,
                     workers: int = 1) -> dict[tuple, GroupAggregate]:
    """Aggregate per-post scores per group.

    With workers > 1 the stream is consumed in fixed-size chunks handed to a
    thread pool; partial aggregators merge in chunk order, and the exact-sum
    accumulators make the result identical for any worker count.
    """
    if workers <= 1:
        agg = Aggregator(key_fn, dimensions)
        for score in scores:
            agg.add(score)
        return agg.finalize()

    def consume(chunk: list[TweetScore]) -> Aggregator:
        part = Aggregator(key_fn, dimensions)
        for score in chunk:
            part.add(score)
        return part

    total = Aggregator(key_fn, dimensions)
    iterator = iter(scores)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            chunks = []
            for _ in range(workers):
                chunk = list(itertools.islice(iterator, _CHUNK_SIZE))
                if not chunk:
                    break
                chunks.append(chunk)
            if not chunks:
                break
            for part in pool.map(consume, chunks):
                total.merge(part)
    return total.finalize()


def monthly_rollup(scores: Iterable[TweetScore], key_fn: Callable[[TweetScore], tuple],
                   dimensions: tuple[str, ...] = DIMENSIONS,
                   workers: int = 1) -> dict[tuple, GroupAggregate]:
    """Same aggregation keyed additionally by calendar (year, month)."""
    return aggregate_scores(
        scores,
        lambda s: (*key_fn(s), s.year, s.month),
        dimensions,
        workers,
    )


def make_key_fn(fields: Iterable[str]) -> Callable[[TweetScore], tuple]:
    """Group key from TweetScore attributes; None values become ''."""
    names = tuple(fields)
    for name in names:
        if name not in ("country", "city", "speaker_id", "year", "month"):
            raise ValueError(f"unknown group field: {name}")

    def key_fn(score: TweetScore) -> tuple:
        return tuple(
            value if (value := getattr(score, name)) is not None else ""
            for name in names
        )

    return key_fn
