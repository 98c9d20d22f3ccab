"""Tweet cleaning, tokenization, stopword removal and stemming.

The cleaning pass lowercases and strips URLs, @-mentions, the retweet
marker and redundant whitespace, in that order.  Tokens are maximal runs
of alphanumeric characters (internal apostrophes allowed); stopwords are
removed before stemming.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .porter import porter_stem

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_RETWEET_RE = re.compile(r"\brt\b")
_SPACE_RE = re.compile(r"\s+")
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")

_STOPWORD_RESOURCE = "stopwords_english.txt"


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]
    version: str

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower():
                raise ValueError(f"stopword entries must be lowercase and non-empty: {w!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.words


def parse_stopwords(text: str, version: str = "custom") -> StopwordList:
    """Parse a one-word-per-line stopword file; ``#`` starts a comment.

    A comment of the form ``# version: <tag>`` overrides the version tag.
    """
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("#"):
            if line[1:].strip().startswith("version:"):
                version = line[1:].strip().split(":", 1)[1].strip()
            continue
        if line:
            words.add(line)
    return StopwordList(words=frozenset(words), version=version)


def load_default_stopwords() -> StopwordList:
    """The bundled classic 318-entry English list."""
    text = (
        resources.files("toxscreen")
        .joinpath("data", _STOPWORD_RESOURCE)
        .read_text(encoding="utf-8")
    )
    return parse_stopwords(text)


def clean(raw: str) -> str:
    """Lowercase and remove URLs, mentions, retweet markers and extra
    whitespace.  Total over arbitrary strings and idempotent."""
    s = raw.lower()
    # replacing with a space (collapsed later) rather than "" so that a
    # removal can never join fragments into a new removable pattern
    s = _URL_RE.sub(" ", s)
    s = _MENTION_RE.sub(" ", s)
    s = _RETWEET_RE.sub(" ", s)
    s = _SPACE_RE.sub(" ", s)
    return s.strip()


def tokenize(cleaned: str) -> list[str]:
    return _TOKEN_RE.findall(cleaned)


def remove_stopwords(tokens: list[str], stop: StopwordList) -> list[str]:
    return [t for t in tokens if t not in stop.words]


def preprocess(raw: str, stop: StopwordList) -> list[str]:
    """clean -> tokenize -> remove stopwords -> Porter-stem."""
    return [porter_stem(t) for t in remove_stopwords(tokenize(clean(raw)), stop)]
