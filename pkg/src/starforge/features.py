"""Top-K vocabularies and the N×K frequency matrix.

Three ways to turn a review into countable terms: every non-stopword token
(Baseline), open-class words only (WordsAfterPos), or adjectives only
(AdjectivesAfterPos). Each business row is its term counts over the
vocabulary divided by their sum, so a row sums to 1 unless the business
uses no vocabulary term at all, in which case it stays all-zero.

Businesses with very many reviews are counted in chunks whose partial
counts spill to disk and merge by addition, which bounds memory without
changing a single count.
"""

import csv
import json
import logging
import os
import tempfile
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import postag, text
from .corpus import Corpus, chunk_reviews
from .errors import IoFailure

log = logging.getLogger(__name__)

DEFAULT_CHUNK_THRESHOLD = 10_000

TMP_ENV_VAR = "STARFORGE_TMP"


class FeatureMethod(Enum):
    BASELINE = "baseline"
    WORDS_AFTER_POS = "words_after_pos"
    ADJECTIVES_AFTER_POS = "adjectives_after_pos"


@dataclass(frozen=True)
class Vocabulary:
    method: FeatureMethod
    k: int
    terms: tuple[tuple[str, int], ...]
    total_tokens: int

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def shortfall(self) -> int:
        """How far the corpus fell short of the requested k distinct terms."""
        return max(0, self.k - len(self.terms))

    def norms(self) -> list[str]:
        return [t for t, _ in self.terms]


@dataclass
class FeatureMatrix:
    row_ids: tuple[str, ...]
    x: np.ndarray
    y: np.ndarray
    vocabulary: Vocabulary


def review_terms(review_text: str, method: FeatureMethod,
                 lexicon: postag.TagLexicon | None = None,
                 stopword_policy: text.StopwordPolicy = text.StopwordPolicy.ENABLED,
                 ) -> list[str]:
    """The countable term stream of one review under a feature method."""
    terms: list[str] = []
    for raw in text.split_sentences(review_text):
        sentence = text.tokenize(raw)
        if method is FeatureMethod.BASELINE:
            terms.extend(n for n in sentence.norms()
                         if not text.is_stopword(n, stopword_policy))
            continue
        tagged = postag.tag_sentence(sentence, lexicon)
        if method is FeatureMethod.WORDS_AFTER_POS:
            terms.extend(postag.open_class_filter(tagged))
        else:
            terms.extend(postag.extract_adjectives(tagged))
    return terms


def _count_reviews(texts, method, lexicon, stopword_policy) -> Counter:
    counts: Counter = Counter()
    for body in texts:
        counts.update(review_terms(body, method, lexicon, stopword_policy))
    return counts


def _spill_dir() -> Path:
    base = os.environ.get(TMP_ENV_VAR) or tempfile.gettempdir()
    return Path(tempfile.mkdtemp(prefix="starforge-counts-", dir=base))


def _write_partial(counts: Counter, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for term in sorted(counts):
            fh.write(f"{term}\t{counts[term]}\n")


def _read_partial(path: Path) -> Counter:
    counts: Counter = Counter()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            term, _, n = line.rstrip("\n").rpartition("\t")
            counts[term] += int(n)
    return counts


def _count_business_chunked(corpus, business_id, method, lexicon,
                            stopword_policy, chunk_threshold) -> Counter:
    """Count one oversized business via spill-to-disk chunk partials."""
    chunks = chunk_reviews(corpus, business_id, chunk_threshold)
    spill = _spill_dir()
    partials: list[Path] = []
    try:
        for i, chunk in enumerate(chunks):
            part = spill / f"{business_id}.part{i}.tsv"
            _write_partial(_count_reviews(chunk, method, lexicon, stopword_policy), part)
            partials.append(part)
        merged: Counter = Counter()
        for part in partials:
            merged.update(_read_partial(part))
        return merged
    finally:
        for part in partials:
            part.unlink(missing_ok=True)
        try:
            spill.rmdir()
        except OSError:
            pass


def count_terms(corpus: Corpus, method: FeatureMethod,
                lexicon: postag.TagLexicon | None = None,
                stopword_policy: text.StopwordPolicy = text.StopwordPolicy.ENABLED,
                chunk_threshold: int = DEFAULT_CHUNK_THRESHOLD,
                ) -> tuple[Counter, dict[str, Counter]]:
    """Per-business and global term counts under one feature method.

    Returns:
        (global_counts, per_business) where global_counts is the sum of
        every per-business map. A business whose review count exceeds
        chunk_threshold is counted chunk by chunk with partials spilled
        to disk and merged by addition; the merged result is bit-identical
        to a single pass.
    """
    if chunk_threshold < 1:
        raise ValueError("chunk_threshold must be >= 1")
    per_business: dict[str, Counter] = {}
    global_counts: Counter = Counter()
    for business_id in corpus.businesses:
        texts = corpus.reviews_by_business.get(business_id, [])
        if len(texts) > chunk_threshold:
            log.info("business %s has %d reviews, counting in chunks of %d",
                     business_id, len(texts), chunk_threshold)
            counts = _count_business_chunked(
                corpus, business_id, method, lexicon, stopword_policy,
                chunk_threshold)
        else:
            counts = _count_reviews(texts, method, lexicon, stopword_policy)
        per_business[business_id] = counts
        global_counts.update(counts)
    return global_counts, per_business


def build_vocabulary(global_counts, method: FeatureMethod, k: int) -> Vocabulary:
    """The k most frequent terms, count descending, ties by norm ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ordered = sorted(global_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    terms = tuple((t, c) for t, c in ordered[:k] if c > 0)
    vocab = Vocabulary(method=method, k=k, terms=terms,
                       total_tokens=sum(global_counts.values()))
    if vocab.shortfall:
        log.info("vocabulary for %s has %d terms, %d short of k=%d",
                 method.value, len(terms), vocab.shortfall, k)
    return vocab


def freq_vector(business_counts, vocabulary: Vocabulary) -> np.ndarray:
    """Relative frequencies of the vocabulary terms for one business.

    v[i] = x_i / sum_j x_j over the vocabulary counts; an all-zero count
    vector stays all-zero rather than dividing 0 by 0.
    """
    x = np.array([business_counts.get(term, 0) for term, _ in vocabulary.terms],
                 dtype=np.float64)
    total = x.sum()
    if total == 0:
        return x
    return x / total


def build_matrix(corpus: Corpus, method: FeatureMethod, k: int,
                 lexicon: postag.TagLexicon | None = None,
                 stopword_policy: text.StopwordPolicy = text.StopwordPolicy.ENABLED,
                 chunk_threshold: int = DEFAULT_CHUNK_THRESHOLD) -> FeatureMatrix:
    """Count, build the vocabulary, and assemble rows in one call."""
    global_counts, per_business = count_terms(
        corpus, method, lexicon, stopword_policy, chunk_threshold)
    vocabulary = build_vocabulary(global_counts, method, k)
    return assemble_matrix(corpus, per_business, vocabulary)


def assemble_matrix(corpus: Corpus, per_business: dict[str, Counter],
                    vocabulary: Vocabulary) -> FeatureMatrix:
    """Rows ordered by business_id ascending over an existing count pass.

    Split out from build_matrix so a K sweep can reuse one counting pass.
    """
    row_ids = tuple(sorted(corpus.businesses))
    x = np.zeros((len(row_ids), len(vocabulary)), dtype=np.float64)
    y = np.zeros(len(row_ids), dtype=np.float64)
    for i, business_id in enumerate(row_ids):
        x[i, :] = freq_vector(per_business.get(business_id, {}), vocabulary)
        y[i] = corpus.businesses[business_id].stars
    return FeatureMatrix(row_ids=row_ids, x=x, y=y, vocabulary=vocabulary)


def vocabulary_report(vocabulary: Vocabulary, top_n: int) -> list[tuple[str, float]]:
    """Top terms with their share of all counted tokens."""
    if top_n < 1 or top_n > len(vocabulary):
        raise ValueError(f"top_n must be in [1, {len(vocabulary)}]")
    total = vocabulary.total_tokens
    return [(term, count / total if total else 0.0)
            for term, count in vocabulary.terms[:top_n]]


def export_matrix(matrix: FeatureMatrix, csv_path, sidecar_path=None) -> None:
    """Write the matrix as CSV plus a JSON sidecar describing it.

    The CSV header is business_id, term_1..term_K, star; the sidecar
    carries the actual vocabulary terms and the asset hashes that pin the
    token pipeline.
    """
    csv_path = Path(csv_path)
    if sidecar_path is None:
        sidecar_path = csv_path.with_suffix(".json")
    k = len(matrix.vocabulary)
    try:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["business_id"] + [f"term_{i + 1}" for i in range(k)]
                            + ["star"])
            for i, business_id in enumerate(matrix.row_ids):
                writer.writerow([business_id]
                                + [repr(v) for v in matrix.x[i].tolist()]
                                + [repr(float(matrix.y[i]))])
        sidecar = {
            "method": matrix.vocabulary.method.value,
            "k": matrix.vocabulary.k,
            "vocabulary": [[t, c] for t, c in matrix.vocabulary.terms],
            "total_tokens": matrix.vocabulary.total_tokens,
            "stopword_list_hash": text.stopword_list_hash(),
            "lexicon_hash": postag.lexicon_hash(),
        }
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot export matrix: {exc}") from exc
