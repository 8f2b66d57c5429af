"""Streaming ingestion of Yelp-style JSON-lines dumps into a Corpus.

The corpus is the pair of indexes everything downstream runs on: business id
to aggregate star, and business id to that business's review texts. Reviews
for unsampled businesses are discarded as they stream by and are never held
in memory.
"""

import hashlib
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptySelection, IoFailure, MalformedJson, UnknownBusiness

log = logging.getLogger(__name__)

CACHE_MAGIC = "STARFORGE-CORPUS"
CACHE_VERSION = 1

_HALF_STARS = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0}


@dataclass(frozen=True)
class BusinessRecord:
    business_id: str
    stars: float
    categories: tuple[str, ...]
    review_count: int


@dataclass(frozen=True)
class ReviewRecord:
    review_id: str
    business_id: str
    stars: int
    text: str


@dataclass
class Corpus:
    """Immutable after construction; keys iterate sorted by business_id."""

    businesses: dict[str, BusinessRecord]
    reviews_by_business: dict[str, list[str]]
    provenance: dict = field(default_factory=dict)

    def business_ids(self) -> list[str]:
        return list(self.businesses)

    def __len__(self) -> int:
        return len(self.businesses)

    def n_reviews(self) -> int:
        return sum(len(v) for v in self.reviews_by_business.values())


def parse_business_line(line: str) -> BusinessRecord | None:
    """One business JSON object, or None when required fields are absent.

    Raises MalformedJson when the line is not JSON at all; the caller logs
    the line number and keeps going.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedJson(str(exc)) from exc
    if not isinstance(obj, dict):
        raise MalformedJson("line is not a JSON object")
    business_id = obj.get("business_id")
    stars = obj.get("stars")
    if not business_id or not isinstance(stars, (int, float)):
        return None
    stars = float(stars)
    if stars not in _HALF_STARS:
        return None
    categories = obj.get("categories") or []
    if not isinstance(categories, list):
        categories = []
    return BusinessRecord(
        business_id=str(business_id),
        stars=stars,
        categories=tuple(str(c) for c in categories),
        review_count=int(obj.get("review_count") or 0),
    )


def parse_review_line(line: str) -> ReviewRecord | None:
    """One review JSON object, or None when required fields are absent."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedJson(str(exc)) from exc
    if not isinstance(obj, dict):
        raise MalformedJson("line is not a JSON object")
    business_id = obj.get("business_id")
    text = obj.get("text")
    stars = obj.get("stars")
    if not business_id or text is None or not isinstance(stars, (int, float)):
        return None
    return ReviewRecord(
        review_id=str(obj.get("review_id") or ""),
        business_id=str(business_id),
        stars=int(stars),
        text=str(text),
    )


def _sample_business_stream(path: Path, category_filter: str | None,
                            sample_n: int | None, seed: int):
    """Reservoir-sample matching businesses in one pass over the file.

    Returns (records, matched_count, malformed, skipped). With sample_n of
    None every matching business is kept.
    """
    rng = random.Random(seed)
    reservoir: list[BusinessRecord] = []
    matched = 0
    malformed = 0
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_business_line(line)
            except MalformedJson as exc:
                malformed += 1
                log.warning("business line %d unparseable: %s", line_no, exc)
                continue
            if record is None:
                skipped += 1
                log.warning("business line %d missing required fields", line_no)
                continue
            if category_filter and category_filter not in record.categories:
                continue
            matched += 1
            if sample_n is None:
                reservoir.append(record)
            elif len(reservoir) < sample_n:
                reservoir.append(record)
            else:
                j = rng.randrange(matched)
                if j < sample_n:
                    reservoir[j] = record
    return reservoir, matched, malformed, skipped


def build_corpus(business_path, review_path, category_filter: str | None = None,
                 sample_n: int | None = None, seed: int = 0) -> Corpus:
    """Build the two review indexes from a business file and a review file.

    Args:
        business_path: JSON-lines business records.
        review_path: JSON-lines review records.
        category_filter: exact category membership test, or None for all.
        sample_n: number of businesses to keep via seeded reservoir
            sampling, or None to keep every match.
        seed: drives the reservoir; same inputs and seed give the same
            business set.

    Raises:
        FileNotFoundError: either input file is absent.
        EmptySelection: the filter matched nothing.
    """
    business_path = Path(business_path)
    review_path = Path(review_path)
    for p in (business_path, review_path):
        if not p.is_file():
            raise FileNotFoundError(str(p))
    if sample_n is not None and sample_n < 1:
        raise ValueError("sample_n must be positive or None")

    sampled, matched, bad_biz, skipped_biz = _sample_business_stream(
        business_path, category_filter, sample_n, seed)
    if matched == 0:
        raise EmptySelection(
            f"no business matches category filter {category_filter!r}")

    businesses = {r.business_id: r for r in sorted(sampled, key=lambda r: r.business_id)}
    reviews: dict[str, list[str]] = {bid: [] for bid in businesses}

    bad_rev = 0
    skipped_rev = 0
    kept = 0
    with open(review_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_review_line(line)
            except MalformedJson as exc:
                bad_rev += 1
                log.warning("review line %d unparseable: %s", line_no, exc)
                continue
            if record is None:
                skipped_rev += 1
                log.warning("review line %d missing required fields", line_no)
                continue
            bucket = reviews.get(record.business_id)
            if bucket is None:
                continue
            bucket.append(record.text)
            kept += 1

    provenance = {
        "business_path": str(business_path),
        "review_path": str(review_path),
        "category_filter": category_filter,
        "sample_n": sample_n,
        "seed": seed,
        "businesses_matched": matched,
        "businesses_sampled": len(businesses),
        "reviews_kept": kept,
        "malformed_business_lines": bad_biz,
        "malformed_review_lines": bad_rev,
        "skipped_business_records": skipped_biz,
        "skipped_review_records": skipped_rev,
    }
    return Corpus(businesses=businesses, reviews_by_business=reviews,
                  provenance=provenance)


def chunk_reviews(corpus: Corpus, business_id: str,
                  max_reviews_per_chunk: int) -> list[list[str]]:
    """Partition one business's reviews into order-preserving chunks."""
    if business_id not in corpus.businesses:
        raise UnknownBusiness(business_id)
    if max_reviews_per_chunk < 1:
        raise ValueError("max_reviews_per_chunk must be >= 1")
    texts = corpus.reviews_by_business.get(business_id, [])
    return [texts[i:i + max_reviews_per_chunk]
            for i in range(0, len(texts), max_reviews_per_chunk)]


def corpus_hash(corpus: Corpus) -> str:
    """Content hash over businesses and reviews, for result metadata."""
    payload = {
        "businesses": [
            [r.business_id, r.stars, list(r.categories), r.review_count]
            for r in corpus.businesses.values()
        ],
        "reviews": corpus.reviews_by_business,
    }
    canon = json.dumps(payload, sort_keys=True, ensure_ascii=True)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def save_corpus(corpus: Corpus, path) -> None:
    """Write the corpus cache file (versioned JSON with a magic header)."""
    doc = {
        "magic": CACHE_MAGIC,
        "version": CACHE_VERSION,
        "seed": corpus.provenance.get("seed"),
        "filter": corpus.provenance.get("category_filter"),
        "provenance": corpus.provenance,
        "businesses": [
            {
                "business_id": r.business_id,
                "stars": r.stars,
                "categories": list(r.categories),
                "review_count": r.review_count,
            }
            for r in corpus.businesses.values()
        ],
        "reviews": corpus.reviews_by_business,
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, ensure_ascii=True)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write corpus cache {path}: {exc}") from exc


def load_corpus(path) -> Corpus:
    """Read a corpus cache file written by save_corpus."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoFailure(f"cannot read corpus cache {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("magic") != CACHE_MAGIC:
        raise IoFailure(f"{path} is not a corpus cache")
    if doc.get("version") != CACHE_VERSION:
        raise IoFailure(f"unsupported corpus cache version {doc.get('version')!r}")
    records = [
        BusinessRecord(
            business_id=b["business_id"],
            stars=float(b["stars"]),
            categories=tuple(b.get("categories", [])),
            review_count=int(b.get("review_count", 0)),
        )
        for b in doc["businesses"]
    ]
    businesses = {r.business_id: r for r in sorted(records, key=lambda r: r.business_id)}
    reviews = {bid: list(doc["reviews"].get(bid, [])) for bid in businesses}
    return Corpus(businesses=businesses, reviews_by_business=reviews,
                  provenance=doc.get("provenance", {}))
