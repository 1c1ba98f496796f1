"""Record parsing and the tweet curation pipeline.

Curation applies, in a fixed order so drop counts are well defined:
language filter, retweet filter, URL/media filter, tokenization with a
minimum token count, then one-post-per-(speaker, UTC day) deduplication
keeping the earliest post of the day.  Every input record is attributed to
exactly one outcome: emitted, dropped with the first failing rule, or
dropped at parse time.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, IO, Iterable, Iterator, Optional

from .tokenizer import tokenize

CURATION_RULES = ("language", "retweet", "url_or_media", "min_tokens", "one_per_day")

_REQUIRED_FIELDS = ("tweet_id", "speaker_id", "created_at", "text")


@dataclass
class RawTweet:
    tweet_id: str
    speaker_id: str
    created_at: datetime  # tz-aware UTC
    country: Optional[str] = None
    city: Optional[str] = None
    language: str = ""
    is_retweet: bool = False
    has_url_or_media: Optional[bool] = None  # None: flag absent, detect from text
    text: str = ""


@dataclass
class CuratedTweet:
    tweet_id: str
    speaker_id: str
    created_at: datetime
    country: Optional[str]
    city: Optional[str]
    language: str
    is_retweet: bool
    has_url_or_media: Optional[bool]
    text: str
    tokens: list[str]
    day_key: tuple[str, str]  # (speaker_id, YYYY-MM-DD in UTC)

    @property
    def token_count(self) -> int:
        return len(self.tokens)


@dataclass
class ParseFailure:
    record_no: int
    reason: str


@dataclass
class CurationStats:
    input_count: int = 0
    dropped_per_rule: dict[str, int] = field(default_factory=dict)
    output_count: int = 0

    @property
    def conserved(self) -> bool:
        return self.input_count == self.output_count + sum(self.dropped_per_rule.values())


def parse_timestamp(value: str) -> datetime:
    """RFC-3339 timestamp; 'Z' suffix accepted; naive values assumed UTC."""
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    stamp = datetime.fromisoformat(value)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def _parse_flag(value) -> Optional[bool]:
    if value is None or value == "":
        return None
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes"):
        return True
    if text in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _record_from_mapping(obj: dict) -> RawTweet:
    for name in _REQUIRED_FIELDS:
        value = obj.get(name)
        if value is None or value == "":
            raise ValueError(f"missing_field:{name}")
    try:
        created = parse_timestamp(str(obj["created_at"]))
    except ValueError:
        raise ValueError("invalid_field:created_at")
    try:
        is_retweet = _parse_flag(obj.get("is_retweet")) or False
        has_url = _parse_flag(obj.get("has_url_or_media"))
    except ValueError as exc:
        raise ValueError(f"invalid_field:{exc}")
    return RawTweet(
        tweet_id=str(obj["tweet_id"]),
        speaker_id=str(obj["speaker_id"]),
        created_at=created,
        country=obj.get("country") or None,
        city=obj.get("city") or None,
        language=str(obj.get("language") or ""),
        is_retweet=is_retweet,
        has_url_or_media=has_url,
        text=str(obj["text"]),
    )


def parse_records(stream: IO[str], fmt: str = "jsonl",
                  failures: Optional[list[ParseFailure]] = None) -> Iterator[RawTweet]:
    """Yield RawTweets from a JSONL or CSV stream in stream order.

    Malformed records are skipped; each is appended to `failures` (when
    given) with a per-record reason.  An undecodable stream is fatal.
    """
    if fmt == "jsonl":
        for record_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                if failures is not None:
                    failures.append(ParseFailure(record_no, "invalid_json"))
                continue
            if not isinstance(obj, dict):
                if failures is not None:
                    failures.append(ParseFailure(record_no, "invalid_json"))
                continue
            try:
                yield _record_from_mapping(obj)
            except ValueError as exc:
                if failures is not None:
                    failures.append(ParseFailure(record_no, str(exc)))
    elif fmt == "csv":
        reader = csv.DictReader(stream)
        for record_no, row in enumerate(reader, start=1):
            try:
                yield _record_from_mapping(row)
            except ValueError as exc:
                if failures is not None:
                    failures.append(ParseFailure(record_no, str(exc)))
    else:
        raise ValueError(f"unknown input format: {fmt}")


def _detect_url_or_media(tweet: RawTweet) -> bool:
    if tweet.has_url_or_media is not None:
        return tweet.has_url_or_media
    lowered = tweet.text.lower()
    return "http://" in lowered or "https://" in lowered or "www." in lowered


def curate(records: Iterable[RawTweet], min_tokens: int = 3,
           language: str = "en") -> tuple[list[CuratedTweet], CurationStats]:
    """Apply the curation rules; returns survivors in input order plus stats.

    Dedup keeps the earliest post of each (speaker, UTC day); timestamp ties
    break by tweet_id.  Output order follows the input order of survivors,
    which requires buffering one candidate per day key until the stream ends.
    """
    stats = CurationStats()
    drops = dict.fromkeys(CURATION_RULES, 0)
    winners: dict[tuple[str, str], tuple[int, CuratedTweet]] = {}
    for index, tweet in enumerate(records):
        stats.input_count += 1
        if tweet.language != language:
            drops["language"] += 1
            continue
        if tweet.is_retweet:
            drops["retweet"] += 1
            continue
        if _detect_url_or_media(tweet):
            drops["url_or_media"] += 1
            continue
        tokens = tokenize(tweet.text)
        if len(tokens) < min_tokens:
            drops["min_tokens"] += 1
            continue
        day = tweet.created_at.astimezone(timezone.utc).date().isoformat()
        curated = CuratedTweet(
            tweet_id=tweet.tweet_id,
            speaker_id=tweet.speaker_id,
            created_at=tweet.created_at,
            country=tweet.country,
            city=tweet.city,
            language=tweet.language,
            is_retweet=tweet.is_retweet,
            has_url_or_media=tweet.has_url_or_media,
            text=tweet.text,
            tokens=tokens,
            day_key=(tweet.speaker_id, day),
        )
        held = winners.get(curated.day_key)
        if held is None:
            winners[curated.day_key] = (index, curated)
        else:
            drops["one_per_day"] += 1
            if (curated.created_at, curated.tweet_id) < (held[1].created_at, held[1].tweet_id):
                winners[curated.day_key] = (index, curated)
    output = [tweet for _, tweet in sorted(winners.values(), key=lambda item: item[0])]
    stats.dropped_per_rule = drops
    stats.output_count = len(output)
    return output, stats


def corpus_stats(curated: Iterable[CuratedTweet],
                 key_fn: Callable[[CuratedTweet], tuple]) -> dict[tuple, tuple[int, int, float]]:
    """Per-group (#tweets, #distinct speakers, mean tokens per tweet)."""
    counts: dict[tuple, int] = {}
    speakers: dict[tuple, set] = {}
    token_sums: dict[tuple, int] = {}
    for tweet in curated:
        key = key_fn(tweet)
        counts[key] = counts.get(key, 0) + 1
        speakers.setdefault(key, set()).add(tweet.speaker_id)
        token_sums[key] = token_sums.get(key, 0) + tweet.token_count
    return {
        key: (counts[key], len(speakers[key]), token_sums[key] / counts[key])
        for key in counts
    }


def curated_to_json(tweet: CuratedTweet) -> str:
    obj = {
        "tweet_id": tweet.tweet_id,
        "speaker_id": tweet.speaker_id,
        "created_at": tweet.created_at.astimezone(timezone.utc).isoformat(),
        "country": tweet.country,
        "city": tweet.city,
        "language": tweet.language,
        "is_retweet": tweet.is_retweet,
        "has_url_or_media": tweet.has_url_or_media,
        "text": tweet.text,
        "tokens": tweet.tokens,
        "day_key": list(tweet.day_key),
    }
    return json.dumps(obj, ensure_ascii=False)


def curated_from_json(line: str) -> CuratedTweet:
    obj = json.loads(line)
    return CuratedTweet(
        tweet_id=obj["tweet_id"],
        speaker_id=obj["speaker_id"],
        created_at=parse_timestamp(obj["created_at"]),
        country=obj.get("country"),
        city=obj.get("city"),
        language=obj.get("language", ""),
        is_retweet=bool(obj.get("is_retweet", False)),
        has_url_or_media=obj.get("has_url_or_media"),
        text=obj.get("text", ""),
        tokens=list(obj["tokens"]),
        day_key=tuple(obj["day_key"]),
    )


def read_curated(stream: IO[str]) -> Iterator[CuratedTweet]:
    for line in stream:
        if line.strip():
            yield curated_from_json(line)
