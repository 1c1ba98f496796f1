"""Tweet-aware tokenizer.

Protect-then-split design: a combined regex marks spans that must survive as
single tokens (URLs, emails, HTML entities, emoticons, hearts, arrows,
hashtags, @-mentions, numbers, times, abbreviations, punctuation runs,
contractions); everything between protected spans is split on whitespace
after peeling bracket/quote punctuation off word edges.  Tokens keep their
original case; lowercasing is the lexicon lookup's job.
"""

from __future__ import annotations

import re


def _group(*alternatives: str) -> str:
    return "(?:" + "|".join(alternatives) + ")"


_URL = r"(?:https?://|www\.)(?:[^\s<>]*[^\s<>.,;:!?'\")\]])?"
_BARE_DOMAIN = (
    r"\b[A-Za-z0-9][A-Za-z0-9.\-]*\.(?:com|net|org|edu|gov|info|io|ly|co\.uk|co|ca)"
    r"(?:/(?:[^\s<>]*[^\s<>.,;:!?'\")\]])?)?"
)
_EMAIL = r"\b[\w.+-]+@[\w-]+\.[\w.-]*[A-Za-z]"
_ENTITY = r"&(?:amp|lt|gt|quot|nbsp|#\d+);"
_TIMELIKE = r"\d+:\d+"
_DECIMAL_NUMBER = r"\d+\.\d+"
_COMMA_NUMBER = r"(?:\d+,)+\d{3}(?!\d)"

_NOSE = r"[-o'^*]?"
_MOUTH_SYM = r"[)(\]\[}{/\\|*@<>$&]"
_MOUTH_ALNUM = r"[dDpPb3oO0cC]"
# alphanumeric eyes/mouths are boundary-guarded so emoticons cannot eat into
# words (x-Day, :Dude); purely symbolic ones may sit flush against a word
_EMOTICON = _group(
    rf"[:;=]'?{_NOSE}{_MOUTH_SYM}+",
    rf"[:;=]'?{_NOSE}{_MOUTH_ALNUM}+(?![A-Za-z0-9])",
    rf"(?<![A-Za-z0-9])[8xX]{_NOSE}{_MOUTH_SYM}+",
    rf"(?<![A-Za-z0-9])[8xX]{_NOSE}{_MOUTH_ALNUM}+(?![A-Za-z0-9])",
    rf"(?<![A-Za-z0-9])[)(dD/\\|]{_NOSE}[:;=](?![A-Za-z0-9])",  # reversed, e.g. D:
    r"(?:\^_+\^|[oO]_+[oO]|[oO]\.[oO]|-_+-|T_T|\*_\*|\^\.\^)",
)
_HEART = r"<+/?3+"
_ARROW = _group(r"<*[-=]+>+", r"<+[-=]+>*")
_HASHTAG = r"#[A-Za-z0-9_]+"
_MENTION = r"@\w+"
_ABBREV = r"(?:[A-Za-z]\.){2,}"
_SEPARATOR = r"(?:--+|―|—)"
_APOSTROPHE_WORD = r"[A-Za-z0-9]+['’][A-Za-z]+(?:['’][A-Za-z]+)*"
_PUNCT_RUN = r"""['"“”‘’.?!…,:;]+"""

# order matters: alternatives earlier in the list win at equal positions
_PROTECTED = re.compile(
    _group(
        _URL,
        _BARE_DOMAIN,
        _EMAIL,
        _ENTITY,
        _TIMELIKE,
        _DECIMAL_NUMBER,
        _COMMA_NUMBER,
        _HEART,
        _EMOTICON,
        _ARROW,
        _HASHTAG,
        _MENTION,
        _ABBREV,
        _SEPARATOR,
        _APOSTROPHE_WORD,
        _PUNCT_RUN,
    ),
    re.UNICODE,
)

_WHITESPACE = re.compile(r"\s+")
_EDGE_PUNCT = r"""['"“”‘’«»{}()\[\]*]"""
_EDGE_LEFT = re.compile(rf"(\s|^)({_EDGE_PUNCT}+)([A-Za-z0-9])")
_EDGE_RIGHT = re.compile(rf"([A-Za-z0-9])({_EDGE_PUNCT}+)(\s|$)")


def _split_edge_punct(text: str) -> str:
    text = _EDGE_LEFT.sub(r"\1\2 \3", text)
    text = _EDGE_RIGHT.sub(r"\1 \2\3", text)
    return text


def tokenize(text: str) -> list[str]:
    """Tokenize one post; empty or whitespace-only input yields []."""
    text = _WHITESPACE.sub(" ", text).strip()
    if not text:
        return []
    text = _split_edge_punct(text)

    protected: list[str] = []
    plain: list[str] = []
    pos = 0
    for match in _PROTECTED.finditer(text):
        plain.append(text[pos:match.start()])
        protected.append(match.group())
        pos = match.end()
    plain.append(text[pos:])

    tokens: list[str] = []
    for i, span in enumerate(plain):
        tokens.extend(span.split())
        if i < len(protected):
            tokens.append(protected[i])
    return tokens
