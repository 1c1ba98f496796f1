"""Emotion dynamics over timestamped short texts.

Lexicon-based per-post emotion scores (valence, arousal, dominance) and
per-speaker rolling-window dynamics profiles: mean, variability, home base,
excursions, and rise/recovery rates, plus the curation, aggregation, and
statistical-comparison machinery around them.
"""

from ._kernels import BACKEND as kernel_backend
from .ingest import CuratedTweet, RawTweet, corpus_stats, curate, parse_records
from .lexicon import (DIMENSIONS, Lexicon, LexiconEntry, ThresholdConfig,
                      classify, default_removals, load_lexicon)
from .scoring import TweetScorer, aggregate_scores, monthly_rollup
from .stats import box_stats, histogram, paired_t_test
from .tokenizer import tokenize
from .ued import (EmotionStateSeries, HomeBase, UEDConfig, UEDProfile,
                  build_speaker_stream, build_state_series, find_excursions,
                  home_base, rates, speaker_rekey, summarize, ued_profile)

__version__ = "0.1.0"
