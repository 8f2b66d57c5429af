"""Coarse part-of-speech tagging from an embedded lexicon plus suffix rules.

Tagging priority per token: exact lexicon lookup, numeric pattern, suffix
rules, then one contextual retag (Other after a Determiner becomes Noun),
and finally Noun. The tagger is total: no token is ever dropped.
"""

import hashlib
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from .errors import IoFailure
from .text import Sentence, Token

_LEXICON_RESOURCE = "assets/lexicon.tsv"

_NUMERIC_RE = re.compile(r"\d+(?:[.,:/-]\d+)*")


class PosTag(Enum):
    NOUN = "Noun"
    VERB = "Verb"
    ADJECTIVE = "Adjective"
    ADVERB = "Adverb"
    PRONOUN = "Pronoun"
    DETERMINER = "Determiner"
    PREPOSITION = "Preposition"
    CONJUNCTION = "Conjunction"
    NUMBER = "Number"
    OTHER = "Other"


_TSV_TAGS = {
    "NOUN": PosTag.NOUN,
    "VERB": PosTag.VERB,
    "ADJ": PosTag.ADJECTIVE,
    "ADV": PosTag.ADVERB,
    "PRON": PosTag.PRONOUN,
    "DET": PosTag.DETERMINER,
    "PREP": PosTag.PREPOSITION,
    "CONJ": PosTag.CONJUNCTION,
    "NUM": PosTag.NUMBER,
    "OTHER": PosTag.OTHER,
}

# Checked longest suffix first so "-ity" beats "-y" and "-ly" beats "-y".
# Within a length, adjective rules come before the others.
_SUFFIX_RULES = [
    ("able", PosTag.ADJECTIVE),
    ("ible", PosTag.ADJECTIVE),
    ("less", PosTag.ADJECTIVE),
    ("tion", PosTag.NOUN),
    ("ness", PosTag.NOUN),
    ("ment", PosTag.NOUN),
    ("ous", PosTag.ADJECTIVE),
    ("ful", PosTag.ADJECTIVE),
    ("ive", PosTag.ADJECTIVE),
    ("ing", PosTag.VERB),
    ("ity", PosTag.NOUN),
    ("al", PosTag.ADJECTIVE),
    ("ic", PosTag.ADJECTIVE),
    ("ly", PosTag.ADVERB),
    ("ed", PosTag.VERB),
    ("y", PosTag.ADJECTIVE),
]

_OPEN_CLASS = {PosTag.NOUN, PosTag.VERB, PosTag.ADJECTIVE, PosTag.ADVERB}


class TagLexicon:
    """Immutable word-to-tag map; entries always override suffix rules."""

    def __init__(self, entries: dict[str, PosTag], content_hash: str | None = None):
        self._entries = dict(entries)
        self._hash = content_hash

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, norm: str) -> bool:
        return norm in self._entries

    def get(self, norm: str) -> PosTag | None:
        return self._entries.get(norm)

    def with_entries(self, extra: dict[str, PosTag]) -> "TagLexicon":
        """A copy with extra entries layered on top, for tests and overrides."""
        merged = dict(self._entries)
        merged.update(extra)
        return TagLexicon(merged)

    @property
    def content_hash(self) -> str:
        """SHA-256 of the source file, or of the entry list if built in memory."""
        if self._hash is None:
            canon = "\n".join(
                f"{w}\t{t.value}" for w, t in sorted(self._entries.items())
            )
            self._hash = hashlib.sha256(canon.encode("utf-8")).hexdigest()
        return self._hash

    @classmethod
    def from_tsv_bytes(cls, raw: bytes) -> "TagLexicon":
        entries: dict[str, PosTag] = {}
        for line_no, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] not in _TSV_TAGS:
                raise IoFailure(f"bad lexicon line {line_no}: {line!r}")
            entries[parts[0]] = _TSV_TAGS[parts[1]]
        return cls(entries, hashlib.sha256(raw).hexdigest())

    @classmethod
    def from_tsv(cls, path) -> "TagLexicon":
        with open(path, "rb") as fh:
            return cls.from_tsv_bytes(fh.read())


@dataclass(frozen=True)
class TaggedSentence:
    pairs: tuple[tuple[Token, PosTag], ...]


@lru_cache(maxsize=1)
def default_lexicon() -> TagLexicon:
    """The lexicon shipped with the package, loaded once."""
    raw = (resources.files("starforge") / _LEXICON_RESOURCE).read_bytes()
    return TagLexicon.from_tsv_bytes(raw)


def _suffix_tag(norm: str) -> PosTag | None:
    for suffix, tag in _SUFFIX_RULES:
        # Require a stem of at least two characters so "ed" or "y" alone
        # do not trigger.
        if len(norm) >= len(suffix) + 2 and norm.endswith(suffix):
            return tag
    return None


def _base_tag(norm: str, lexicon: TagLexicon) -> PosTag:
    tag = lexicon.get(norm)
    if tag is not None:
        return tag
    if _NUMERIC_RE.fullmatch(norm):
        return PosTag.NUMBER
    tag = _suffix_tag(norm)
    if tag is not None:
        return tag
    return PosTag.NOUN


def tag_sentence(sentence: Sentence, lexicon: TagLexicon | None = None) -> TaggedSentence:
    """Assign one coarse tag per token, preserving order and length."""
    if lexicon is None:
        lexicon = default_lexicon()
    tags = [_base_tag(tok.norm, lexicon) for tok in sentence.tokens]
    # Contextual retag: a word the rules could only call Other reads as a
    # noun when it directly follows a determiner ("the hmm was odd").
    for i in range(1, len(tags)):
        if tags[i] is PosTag.OTHER and tags[i - 1] is PosTag.DETERMINER:
            tags[i] = PosTag.NOUN
    return TaggedSentence(pairs=tuple(zip(sentence.tokens, tags)))


def extract_adjectives(tagged: TaggedSentence) -> list[str]:
    """Adjective norms in order, duplicates retained for counting."""
    return [tok.norm for tok, tag in tagged.pairs if tag is PosTag.ADJECTIVE]


def open_class_filter(tagged: TaggedSentence) -> list[str]:
    """Norms tagged Noun, Verb, Adjective, or Adverb, in order."""
    return [tok.norm for tok, tag in tagged.pairs if tag in _OPEN_CLASS]


def lexicon_hash() -> str:
    return default_lexicon().content_hash
