"""Word-score lexicon with three affect dimensions and thresholded polar views.

The on-disk format is one entry per line, ``word<TAB>valence<TAB>arousal
<TAB>dominance`` with all scores in [0, 1].  A removal list of ambiguous
terms is applied at load time; removed words never match anywhere.  Each
dimension can be restricted to its "polar" subset: scores at or below the
low threshold, or at or above the high threshold, with everything between
considered neutral.
"""

from __future__ import annotations

import importlib.resources
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Optional

VALENCE = "valence"
AROUSAL = "arousal"
DOMINANCE = "dominance"
DIMENSIONS = (VALENCE, AROUSAL, DOMINANCE)

# single-letter aliases used by the CLI and CSV headers
DIMENSION_LETTERS = {"V": VALENCE, "A": AROUSAL, "D": DOMINANCE}
LETTER_FOR_DIMENSION = {v: k for k, v in DIMENSION_LETTERS.items()}

LOW = "low"
HIGH = "high"
NEUTRAL = "neutral"


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class ThresholdConfig:
    """Polar cutoffs; scores <= low or >= high are polar (inclusive)."""

    low: float = 0.33
    high: float = 0.67

    def __post_init__(self):
        if not (0.0 <= self.low < self.high <= 1.0):
            raise ValueError(f"thresholds must satisfy 0 <= low < high <= 1, got {self.low}/{self.high}")


DEFAULT_THRESHOLDS = ThresholdConfig()


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    valence: float
    arousal: float
    dominance: float

    def score(self, dimension: str) -> float:
        return getattr(self, dimension)


@dataclass(frozen=True)
class PolarClass:
    dimension: str
    polarity: str  # low | high | neutral


def classify_score(score: float, thresholds: ThresholdConfig = DEFAULT_THRESHOLDS) -> str:
    if score <= thresholds.low:
        return LOW
    if score >= thresholds.high:
        return HIGH
    return NEUTRAL


def classify(entry: LexiconEntry, dimension: str,
             thresholds: ThresholdConfig = DEFAULT_THRESHOLDS) -> PolarClass:
    return PolarClass(dimension, classify_score(entry.score(dimension), thresholds))


@dataclass
class LoadReport:
    loaded: int = 0
    removed: int = 0
    malformed: int = 0
    duplicates: int = 0
    diagnostics: list[str] = field(default_factory=list)


class Lexicon:
    """Immutable after construction; safe for concurrent reads."""

    def __init__(self, entries: dict[str, LexiconEntry], removed: Iterable[str] = (),
                 load_report: Optional[LoadReport] = None):
        self.entries = entries
        self.removed = frozenset(removed)
        self.load_report = load_report

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries.values())

    def lookup(self, token: str) -> Optional[tuple[float, float, float]]:
        """Scores for an already-lowercased token, or None."""
        entry = self.entries.get(token)
        if entry is None:
            return None
        return (entry.valence, entry.arousal, entry.dominance)

    def polar_subset(self, dimension: str,
                     thresholds: ThresholdConfig = DEFAULT_THRESHOLDS) -> "Lexicon":
        """View holding only the entries polar for `dimension`; self unchanged."""
        if dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension: {dimension}")
        kept = {
            word: entry
            for word, entry in self.entries.items()
            if classify_score(entry.score(dimension), thresholds) != NEUTRAL
        }
        return Lexicon(kept, self.removed)

    def dump(self, stream: IO[str]) -> None:
        """Serialize entries (sorted by word) back to the tab format."""
        for word in sorted(self.entries):
            e = self.entries[word]
            stream.write(f"{word}\t{e.valence!r}\t{e.arousal!r}\t{e.dominance!r}\n")


def _parse_score(text: str) -> float:
    value = float(text)
    if not math.isfinite(value) or not (0.0 <= value <= 1.0):
        raise ValueError(f"score out of range: {text}")
    return value


def load_lexicon(source, removals: Iterable[str] = ()) -> Lexicon:
    """Load a tab-separated word/score lexicon, applying the removal list.

    `source` is a path or an open text stream.  Malformed lines (wrong field
    count, unparseable or out-of-range scores) are skipped and reported per
    line in the load report; duplicate words resolve to the last occurrence.
    An optional single header line is auto-detected when its second field
    does not parse as a number.  A stream yielding no valid entries is an
    error.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            return load_lexicon(fh, removals)

    removed_words = {w.strip().lower() for w in removals if w.strip()}
    report = LoadReport()
    entries: dict[str, LexiconEntry] = {}
    first_line_pending = True
    for line_no, line in enumerate(source, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        may_be_header = first_line_pending
        first_line_pending = False
        fields = line.split("\t")
        if len(fields) != 4:
            report.malformed += 1
            report.diagnostics.append(f"line {line_no}: expected 4 tab-separated fields, got {len(fields)}")
            continue
        if may_be_header:
            try:
                float(fields[1])
            except ValueError:
                continue  # header line: second field is not numeric
        word = fields[0].strip().lower()
        try:
            scores = tuple(_parse_score(f) for f in fields[1:])
        except ValueError as exc:
            report.malformed += 1
            report.diagnostics.append(f"line {line_no}: {exc}")
            continue
        if not word:
            report.malformed += 1
            report.diagnostics.append(f"line {line_no}: empty word")
            continue
        if word in removed_words:
            report.removed += 1
            continue
        if word in entries:
            report.duplicates += 1
        entries[word] = LexiconEntry(word, *scores)
    if not entries:
        raise LexiconError("lexicon stream contained no valid entries")
    report.loaded = len(entries)
    return Lexicon(entries, removed_words, report)


def load_removals(source) -> list[str]:
    """Read a removal list: one word per line, '#' comments allowed."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            return load_removals(fh)
    words = []
    for line in source:
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.append(word)
    return words


def default_removals() -> list[str]:
    """The removal list shipped with the package (23 ambiguous terms)."""
    ref = importlib.resources.files("emodyn").joinpath("data/removed_terms.txt")
    with ref.open(encoding="utf-8") as fh:
        return load_removals(fh)
