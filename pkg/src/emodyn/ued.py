"""Per-speaker emotion dynamics over rolling token windows.

A speaker's curated posts are sorted by time, their tokens concatenated,
and a window slid one token at a time.  Each window's emotion state is the
mean lexicon score of the matched tokens inside it (full lexicon by
default; a polar-only switch exists for sensitivity analysis).  From the
state series come the summary metrics: mean, variability (standard
deviation of states), the home base interval at one variability around the
mean, excursions outside that interval, and displacement-per-step rise and
recovery rates split by direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from ._kernels import window_states
from .ingest import CuratedTweet
from .lexicon import DEFAULT_THRESHOLDS, DIMENSIONS, Lexicon, ThresholdConfig, classify_score

HIGH = "high"
LOW = "low"


class InsufficientTokensError(ValueError):
    pass


class IneligibleSpeakerError(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass
class SpeakerStream:
    speaker_id: str
    tweets: list[CuratedTweet]       # sorted by (created_at, tweet_id)
    tokens: list[str]                # concatenation of per-tweet tokens
    spans: list[tuple[int, int]]     # [start, end) token span of each tweet


@dataclass
class EmotionStateSeries:
    dimension: str
    indices: list[int]               # window start token index per state
    values: list[float]
    window_size: int
    step: int
    n_windows: int                   # admissible window positions
    coverage: float                  # len(values) / n_windows

    @property
    def states(self) -> list[tuple[int, float]]:
        return list(zip(self.indices, self.values))


@dataclass(frozen=True)
class HomeBase:
    center: float
    half_width: float

    @property
    def low(self) -> float:
        return self.center - self.half_width

    @property
    def high(self) -> float:
        return self.center + self.half_width


@dataclass
class Excursion:
    direction: str                   # high | low
    exit_index: int                  # window index of first state outside home
    peak_index: int
    peak_value: float
    reentry_index: Optional[int]     # window index of first state back inside
    complete: bool


@dataclass
class RateStats:
    rise: Optional[float] = None
    recovery: Optional[float] = None
    hm_hi: Optional[float] = None
    hi_hm: Optional[float] = None
    hm_lo: Optional[float] = None
    lo_hm: Optional[float] = None


@dataclass
class DimensionProfile:
    dimension: str
    n_states: int
    coverage: float
    mean: Optional[float] = None
    variability: Optional[float] = None
    home: Optional[HomeBase] = None
    n_excursions: int = 0
    rates: RateStats = field(default_factory=RateStats)


@dataclass
class UEDProfile:
    speaker_id: str
    n_tweets: int
    n_tokens: int
    dims: dict[str, DimensionProfile]


@dataclass(frozen=True)
class UEDConfig:
    window_size: int = 20
    step: int = 1
    min_tweets: int = 100
    cross_boundaries: bool = True    # windows may span adjacent posts
    polar_only: bool = False         # restrict matching to polar lexicon views
    sample_sd: bool = True           # n-1 variability; False: population
    rate_origin: str = "boundary"    # displacement from home boundary or center
    thresholds: ThresholdConfig = DEFAULT_THRESHOLDS
    dimensions: tuple[str, ...] = DIMENSIONS


def build_speaker_stream(tweets: Iterable[CuratedTweet]) -> SpeakerStream:
    """Sort one speaker's posts by (created_at, tweet_id) and concatenate tokens."""
    ordered = sorted(tweets, key=lambda t: (t.created_at, t.tweet_id))
    if not ordered:
        raise ValueError("no tweets for speaker")
    speaker_ids = {t.speaker_id for t in ordered}
    if len(speaker_ids) != 1:
        raise ValueError(f"stream mixes speakers: {sorted(speaker_ids)}")
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    for tweet in ordered:
        start = len(tokens)
        tokens.extend(tweet.tokens)
        spans.append((start, len(tokens)))
    return SpeakerStream(ordered[0].speaker_id, ordered, tokens, spans)


def build_state_series(stream: SpeakerStream, lexicon: Lexicon, dimension: str,
                       window_size: int = 20, step: int = 1,
                       cross_boundaries: bool = True, polar_only: bool = False,
                       thresholds: ThresholdConfig = DEFAULT_THRESHOLDS) -> EmotionStateSeries:
    """Rolling-window emotion states over the stream's token sequence.

    Windows with no matched token produce no state; recorded indices make
    the gaps explicit.  Raises InsufficientTokensError when the stream is
    shorter than one window.
    """
    tokens = stream.tokens
    n = len(tokens)
    if n < window_size:
        raise InsufficientTokensError(
            f"insufficient_tokens: {n} tokens < window of {window_size}")

    scores = np.zeros(n, dtype=np.float64)
    matched = np.zeros(n, dtype=np.uint8)
    entries = lexicon.entries
    memo: dict[str, tuple[int, float]] = {}
    for i, token in enumerate(tokens):
        cached = memo.get(token)
        if cached is None:
            entry = entries.get(token.lower())
            if entry is None:
                cached = (0, 0.0)
            else:
                value = entry.score(dimension)
                if polar_only and classify_score(value, thresholds) == "neutral":
                    cached = (0, 0.0)
                else:
                    cached = (1, value)
            memo[token] = cached
        matched[i], scores[i] = cached

    n_pos = (n - window_size) // step + 1
    valid = None
    if not cross_boundaries:
        # a window is admissible only when it fits inside one post
        token_end = np.empty(n, dtype=np.int64)
        for start, end in stream.spans:
            token_end[start:end] = end
        starts = np.arange(n_pos, dtype=np.int64) * step
        valid = (token_end[starts] >= starts + window_size).astype(np.uint8)
        n_admissible = int(valid.sum())
    else:
        n_admissible = n_pos

    indices, values = window_states(scores, matched, window_size, step, valid)
    coverage = len(values) / n_admissible if n_admissible else 0.0
    return EmotionStateSeries(
        dimension=dimension,
        indices=[int(i) for i in indices],
        values=[float(v) for v in values],
        window_size=window_size,
        step=step,
        n_windows=n_admissible,
        coverage=coverage,
    )


def summarize(series: EmotionStateSeries, sample_sd: bool = True) -> tuple[float, float]:
    """Mean of the states and their standard deviation (n-1 by default)."""
    values = series.values
    if not values:
        raise ValueError("empty state series")
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    denom = n - 1 if sample_sd else n
    variance = math.fsum((v - mean) ** 2 for v in values) / denom
    return mean, math.sqrt(variance)


def home_base(mean: float, variability: float) -> HomeBase:
    return HomeBase(center=mean, half_width=variability)


def find_excursions(series: EmotionStateSeries, home: HomeBase) -> list[Excursion]:
    """Maximal runs of states strictly outside the home interval.

    States exactly on a boundary count as inside.  A direction flip without
    an intervening inside state closes the current excursion (the path
    crossed home between windows, so it counts as complete with reentry at
    the flip) and opens a new one at the same state.  A run still open at
    series end is kept with complete=False.
    """
    low, high = home.low, home.high
    excursions: list[Excursion] = []
    current: Optional[Excursion] = None
    for idx, value in zip(series.indices, series.values):
        if low <= value <= high:
            if current is not None:
                current.reentry_index = idx
                current.complete = True
                excursions.append(current)
                current = None
            continue
        direction = HIGH if value > high else LOW
        if current is None:
            current = Excursion(direction, idx, idx, value, None, False)
        elif direction != current.direction:
            current.reentry_index = idx
            current.complete = True
            excursions.append(current)
            current = Excursion(direction, idx, idx, value, None, False)
        else:
            # strict comparison keeps the earliest extremum on ties
            if direction == HIGH:
                if value > current.peak_value:
                    current.peak_value = value
                    current.peak_index = idx
            elif value < current.peak_value:
                current.peak_value = value
                current.peak_index = idx
    if current is not None:
        excursions.append(current)
    return excursions


def rates(excursions: Iterable[Excursion], home: HomeBase,
          rate_origin: str = "boundary") -> RateStats:
    """Displacement-per-window-step statistics over qualifying excursions.

    Rise uses (peak - origin) / (peak_index - exit_index + 1); recovery uses
    (peak - origin) / (reentry_index - peak_index) and only complete
    excursions qualify.  Low-side excursions use the absolute displacement
    below their origin.  The pooled rise/recovery statistics average the
    per-excursion values of both directions together.
    """
    if rate_origin not in ("boundary", "center"):
        raise ValueError(f"unknown rate origin: {rate_origin}")
    rises_high: list[float] = []
    rises_low: list[float] = []
    recoveries_high: list[float] = []
    recoveries_low: list[float] = []
    for exc in excursions:
        if rate_origin == "boundary":
            origin = home.high if exc.direction == HIGH else home.low
        else:
            origin = home.center
        displacement = abs(exc.peak_value - origin)
        rise = displacement / (exc.peak_index - exc.exit_index + 1)
        if exc.direction == HIGH:
            rises_high.append(rise)
        else:
            rises_low.append(rise)
        if exc.complete:
            recovery = displacement / (exc.reentry_index - exc.peak_index)
            if exc.direction == HIGH:
                recoveries_high.append(recovery)
            else:
                recoveries_low.append(recovery)

    def _mean(values: list[float]) -> Optional[float]:
        return math.fsum(values) / len(values) if values else None

    return RateStats(
        rise=_mean(rises_high + rises_low),
        recovery=_mean(recoveries_high + recoveries_low),
        hm_hi=_mean(rises_high),
        hi_hm=_mean(recoveries_high),
        hm_lo=_mean(rises_low),
        lo_hm=_mean(recoveries_low),
    )


def ued_profile(tweets: Iterable[CuratedTweet], lexicon: Lexicon,
                config: UEDConfig = UEDConfig()) -> UEDProfile:
    """Full profile for one speaker; raises IneligibleSpeakerError on skip."""
    tweets = list(tweets)
    if len(tweets) < config.min_tweets:
        raise IneligibleSpeakerError("min_tweets")
    return profile_stream(build_speaker_stream(tweets), lexicon, config)


def profile_stream(stream: SpeakerStream, lexicon: Lexicon,
                   config: UEDConfig = UEDConfig()) -> UEDProfile:
    if len(stream.tweets) < config.min_tweets:
        raise IneligibleSpeakerError("min_tweets")
    if len(stream.tokens) < config.window_size:
        raise IneligibleSpeakerError("insufficient_tokens")
    dims: dict[str, DimensionProfile] = {}
    for dimension in config.dimensions:
        series = build_state_series(
            stream, lexicon, dimension,
            window_size=config.window_size, step=config.step,
            cross_boundaries=config.cross_boundaries,
            polar_only=config.polar_only, thresholds=config.thresholds,
        )
        profile = DimensionProfile(dimension, len(series.values), series.coverage)
        if series.values:
            mean, variability = summarize(series, config.sample_sd)
            home = home_base(mean, variability)
            excursions = find_excursions(series, home)
            profile.mean = mean
            profile.variability = variability
            profile.home = home
            profile.n_excursions = len(excursions)
            profile.rates = rates(excursions, home, config.rate_origin)
        dims[dimension] = profile
    return UEDProfile(
        speaker_id=stream.speaker_id,
        n_tweets=len(stream.tweets),
        n_tokens=len(stream.tokens),
        dims=dims,
    )


def speaker_rekey(curated: Iterable[CuratedTweet],
                  key: str = "user") -> tuple[dict[str, list[CuratedTweet]], int]:
    """Group curated posts under an alternative speaker unit.

    key 'user' groups by speaker_id (the default pipeline behavior); 'city'
    and 'country' treat each city or country as one speaker.  Records with
    the key missing are skipped and counted.
    """
    if key not in ("user", "city", "country"):
        raise ValueError(f"unknown speaker key: {key}")
    groups: dict[str, list[CuratedTweet]] = {}
    skipped = 0
    for tweet in curated:
        if key == "user":
            value = tweet.speaker_id
        elif key == "city":
            value = tweet.city
        else:
            value = tweet.country
        if not value:
            skipped += 1
            continue
        groups.setdefault(value, []).append(tweet)
    return groups, skipped


def rekeyed_streams(curated: Iterable[CuratedTweet],
                    key: str = "user") -> tuple[dict[str, SpeakerStream], int]:
    """speaker_rekey plus stream construction, relabelling speaker ids."""
    groups, skipped = speaker_rekey(curated, key)
    streams = {}
    for value, tweets in groups.items():
        if key != "user":
            tweets = [
                replace(t, speaker_id=value, day_key=(value, t.day_key[1]))
                for t in tweets
            ]
        streams[value] = build_speaker_stream(tweets)
    return streams, skipped
