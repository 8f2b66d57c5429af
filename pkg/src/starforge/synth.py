"""Seeded synthetic review corpus with a planted word-to-star signal.

Each business draws a sentiment level that sets the mixing ratio of
positive and negative pool words across its reviews. Its star is then
computed from the words actually generated: base plus the planted weight
of each word times that word's share of the business's tokens, plus
Gaussian noise, rounded to the half-star grid and clamped to [1, 5].
Because the star is a linear function of the realized word shares, a
frequency-feature regression can recover the signal down to the noise
and rounding floor.

Review text is assembled into capitalized, punctuated sentences so the
splitter and tokenizer are exercised rather than bypassed.
"""

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IoFailure

DEFAULT_POSITIVE = ("amazing", "delicious", "fantastic", "friendly", "fresh",
                    "excellent", "tasty", "wonderful", "perfect", "cozy")
DEFAULT_NEGATIVE = ("terrible", "awful", "horrible", "bland", "rude",
                    "stale", "greasy", "dirty", "mediocre", "disgusting")
DEFAULT_NEUTRAL = ("food", "place", "service", "staff", "menu",
                   "table", "dinner", "lunch", "pizza", "waiter")

# Levels are spaced so signal_weight * signal_fraction * level lands on
# the half-star grid; the multinomial scatter of real samples supplies
# the off-grid jitter.
DEFAULT_LEVELS = (-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75)

DEFAULT_SIGNAL_WEIGHT = 2.5
DEFAULT_SIGNAL_FRACTION = 0.8


@dataclass(frozen=True)
class SynthSpec:
    n_businesses: int = 500
    reviews_per_business: tuple[int, int] = (8, 16)
    words_per_review: tuple[int, int] = (30, 60)
    positive_words: tuple[str, ...] = DEFAULT_POSITIVE
    negative_words: tuple[str, ...] = DEFAULT_NEGATIVE
    neutral_words: tuple[str, ...] = DEFAULT_NEUTRAL
    planted_weights: dict[str, float] | None = None
    base_star: float = 3.0
    signal_weight: float = DEFAULT_SIGNAL_WEIGHT
    signal_fraction: float = DEFAULT_SIGNAL_FRACTION
    sentiment_levels: tuple[float, ...] = DEFAULT_LEVELS
    noise_sigma: float = 0.1
    seed: int = 0

    def weights(self) -> dict[str, float]:
        """Planted weight per word; pool defaults are +w, -w, and 0."""
        if self.planted_weights is not None:
            return dict(self.planted_weights)
        weights = {w: self.signal_weight for w in self.positive_words}
        weights.update({w: -self.signal_weight for w in self.negative_words})
        weights.update({w: 0.0 for w in self.neutral_words})
        return weights


def round_to_half(value: float) -> float:
    """Round to the nearest 0.5, halves upward, independent of locale."""
    return math.floor(2.0 * value + 0.5) / 2.0


def _clamp_star(value: float) -> float:
    return min(5.0, max(1.0, value))


def _draw_word(rng, spec: SynthSpec, level: float) -> str:
    u = rng.random()
    q = spec.signal_fraction
    if u < q * (1.0 + level) / 2.0:
        return spec.positive_words[rng.randrange(len(spec.positive_words))]
    if u < q:
        return spec.negative_words[rng.randrange(len(spec.negative_words))]
    return spec.neutral_words[rng.randrange(len(spec.neutral_words))]


def _render_review(rng, words: list[str]) -> str:
    """Sentences of 5-12 words, capitalized, with end punctuation and the
    occasional comma."""
    sentences = []
    i = 0
    while i < len(words):
        size = min(rng.randint(5, 12), len(words) - i)
        chunk = list(words[i:i + size])
        i += size
        chunk[0] = chunk[0].capitalize()
        for j in range(len(chunk) - 1):
            if rng.random() < 0.08:
                chunk[j] += ","
        closer = rng.choice(".......!?")
        sentences.append(" ".join(chunk) + closer)
    return " ".join(sentences)


def generate(spec: SynthSpec, out_dir) -> tuple[Path, Path]:
    """Write business.json and review.json JSON-lines files.

    Byte-identical output for identical specs: a single seeded PRNG
    stream drives every draw in a fixed order.
    """
    if spec.n_businesses < 1:
        raise ValueError("n_businesses must be >= 1")
    if not (spec.positive_words and spec.negative_words and spec.neutral_words):
        raise ValueError("word pools must be nonempty")
    if spec.noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")

    out_dir = Path(out_dir)
    business_path = out_dir / "business.json"
    review_path = out_dir / "review.json"
    weights = spec.weights()
    rng = random.Random(spec.seed)

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(business_path, "w", encoding="utf-8") as biz_fh, \
                open(review_path, "w", encoding="utf-8") as rev_fh:
            for b in range(spec.n_businesses):
                business_id = f"synth-b{b:05d}"
                level = rng.choice(spec.sentiment_levels)
                n_reviews = rng.randint(*spec.reviews_per_business)

                counts: dict[str, int] = {}
                total_words = 0
                bodies = []
                for _ in range(n_reviews):
                    n_words = rng.randint(*spec.words_per_review)
                    words = [_draw_word(rng, spec, level) for _ in range(n_words)]
                    for w in words:
                        counts[w] = counts.get(w, 0) + 1
                    total_words += n_words
                    bodies.append(_render_review(rng, words))

                contribution = 0.0
                if total_words:
                    contribution = sum(weights.get(w, 0.0) * c
                                       for w, c in counts.items()) / total_words
                noise = rng.gauss(0.0, spec.noise_sigma) if spec.noise_sigma else 0.0
                star = _clamp_star(round_to_half(
                    spec.base_star + contribution + noise))

                biz_fh.write(json.dumps({
                    "business_id": business_id,
                    "name": f"Synth Business {b}",
                    "stars": star,
                    "categories": ["Restaurants", "Synthetic"],
                    "review_count": n_reviews,
                }, sort_keys=True) + "\n")
                for r, body in enumerate(bodies):
                    rev_fh.write(json.dumps({
                        "review_id": f"synth-r{b:05d}-{r:03d}",
                        "business_id": business_id,
                        "stars": int(star + 0.5),
                        "text": body,
                    }, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write synthetic corpus to {out_dir}: {exc}") from exc
    return business_path, review_path
