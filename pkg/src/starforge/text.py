"""Sentence splitting, tokenization, and the stopword policy.

No stemming anywhere: "like", "likes", and "liked" stay distinct terms.
"""

import hashlib
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

# A sentence ends at . ! or ? only when followed by whitespace or the end
# of the text, so "5.5" and "end.Next" do not split.
_BOUNDARY_RE = re.compile(r"(?<=[.!?])\s+")

# Maximal alphanumeric runs, letters or digits, with interior apostrophes
# or hyphens: "don't-stop" and "5pm" are single tokens. Underscore is not
# a word character here.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")

_STOPWORDS_RESOURCE = "assets/stopwords.txt"


class StopwordPolicy(Enum):
    ENABLED = "enabled"
    DISABLED = "disabled"


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def norms(self) -> list[str]:
        return [t.norm for t in self.tokens]


def split_sentences(text: str) -> list[str]:
    """Split review text into sentences, keeping the closing delimiter."""
    pieces = _BOUNDARY_RE.split(text)
    return [p.strip() for p in pieces if p.strip()]


def tokenize(sentence: str) -> Sentence:
    """Word tokens in order; punctuation and whitespace are dropped.

    The norm is the Unicode-lowercased surface and is the unit every
    downstream count operates on.
    """
    tokens = tuple(
        Token(surface=m.group(0), norm=m.group(0).lower())
        for m in _TOKEN_RE.finditer(sentence)
    )
    return Sentence(tokens=tokens)


@lru_cache(maxsize=1)
def _stopword_bytes() -> bytes:
    return (resources.files("starforge") / _STOPWORDS_RESOURCE).read_bytes()


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The pinned stopword list, shipped as a package asset."""
    return frozenset(_stopword_bytes().decode("utf-8").split())


def stopword_list_hash() -> str:
    """SHA-256 of the stopword asset, recorded in output metadata."""
    return hashlib.sha256(_stopword_bytes()).hexdigest()


def is_stopword(norm: str, policy: StopwordPolicy = StopwordPolicy.ENABLED) -> bool:
    if policy is StopwordPolicy.DISABLED:
        return False
    return norm in stopwords()
