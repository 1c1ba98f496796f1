import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes oracles importable

from emodyn.ingest import CuratedTweet

DATA_DIR = Path(__file__).parent / "data"


def utc(year, month, day, hour=0, minute=0, second=0):
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


def gen_tokens(rng, words, n, window, oov=()):
    """Random token stream with no repeats near lag `window`.

    Two rolling windows tie exactly when the tokens one sheds equal the
    tokens the other gains; forbidding repeats at lags window-3..window+3
    removes that degeneracy, which would otherwise make peak indices
    unstable under ulp-level perturbations (e.g. shifted lexicons).
    """
    pool = list(words) + list(oov)
    tokens = []
    for i in range(n):
        banned = {tokens[i - lag] for lag in range(window - 3, window + 4)
                  if 0 <= i - lag < i}
        choices = [w for w in pool if w not in banned] or pool
        tokens.append(rng.choice(choices))
    return tokens


def make_curated(tweet_id, speaker, when, tokens, country=None, city=None):
    return CuratedTweet(
        tweet_id=tweet_id,
        speaker_id=speaker,
        created_at=when,
        country=country,
        city=city,
        language="en",
        is_retweet=False,
        has_url_or_media=False,
        text=" ".join(tokens),
        tokens=list(tokens),
        day_key=(speaker, when.date().isoformat()),
    )


@pytest.fixture
def data_dir():
    return DATA_DIR
