"""Synthetic corpus generation: planted signal, determinism, round-trip."""

import json

import pytest

from starforge.corpus import build_corpus
from starforge.evaluation import ModelKind, cross_validate, make_folds
from starforge.features import FeatureMethod, assemble_matrix, build_vocabulary, count_terms
from starforge.synth import SynthSpec, generate, round_to_half
from starforge.text import split_sentences, tokenize

ONLY_POSITIVE = SynthSpec(
    n_businesses=5,
    positive_words=("amazing",),
    planted_weights={"amazing": 2.0},
    signal_fraction=1.0,
    sentiment_levels=(1.0,),
    noise_sigma=0.0,
    seed=0,
)


def read_lines(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh]


class TestRoundToHalf:
    @pytest.mark.parametrize("value,expected", [
        (3.24, 3.0), (3.25, 3.5), (3.74, 3.5), (3.75, 4.0),
        (2.4, 2.5), (1.2, 1.0), (1.25, 1.5), (-1.25, -1.0), (3.0, 3.0),
    ])
    def test_nearest_half_with_halves_upward(self, value, expected):
        assert round_to_half(value) == expected


class TestPlantedRule:
    def test_pure_positive_reviews_reach_five_stars(self, tmp_path):
        """Weight +2 on the only drawable word, base 3, no noise."""
        business_path, _ = generate(ONLY_POSITIVE, tmp_path)
        for record in read_lines(business_path):
            assert record["stars"] == 5.0

    def test_no_signal_words_leaves_the_base_star(self, tmp_path):
        spec = SynthSpec(n_businesses=5, planted_weights={"amazing": 2.0},
                         signal_fraction=0.0, noise_sigma=0.0, seed=0)
        business_path, _ = generate(spec, tmp_path)
        for record in read_lines(business_path):
            assert record["stars"] == 3.0

    def test_stars_stay_on_the_half_grid(self, tmp_path):
        business_path, _ = generate(SynthSpec(n_businesses=40), tmp_path)
        for record in read_lines(business_path):
            star = record["stars"]
            assert 1.0 <= star <= 5.0
            assert star * 2 == int(star * 2)

    def test_review_stars_are_integers(self, tmp_path):
        _, review_path = generate(SynthSpec(n_businesses=5), tmp_path)
        for record in read_lines(review_path):
            assert isinstance(record["stars"], int)
            assert 1 <= record["stars"] <= 5


class TestDeterminism:
    def test_same_seed_writes_identical_bytes(self, tmp_path):
        spec = SynthSpec(n_businesses=40, seed=11)
        first = generate(spec, tmp_path / "one")
        second = generate(spec, tmp_path / "two")
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes()

    def test_different_seed_differs(self, tmp_path):
        first = generate(SynthSpec(n_businesses=40, seed=11), tmp_path / "one")
        second = generate(SynthSpec(n_businesses=40, seed=12), tmp_path / "two")
        assert first[0].read_bytes() != second[0].read_bytes()


class TestRoundTrip:
    def test_ingestion_recovers_every_business_and_review(self, tmp_path):
        spec = SynthSpec(n_businesses=25, seed=4)
        business_path, review_path = generate(spec, tmp_path)
        corpus = build_corpus(business_path, review_path)
        assert len(corpus) == 25
        for business_id, record in corpus.businesses.items():
            reviews = corpus.reviews_by_business[business_id]
            assert len(reviews) == record.review_count
            assert spec.reviews_per_business[0] <= len(reviews) \
                <= spec.reviews_per_business[1]

    def test_both_polarities_appear(self, tmp_path):
        spec = SynthSpec(n_businesses=25, seed=4)
        business_path, review_path = generate(spec, tmp_path)
        text = review_path.read_text(encoding="utf-8")
        assert any(w in text for w in spec.positive_words)
        assert any(w in text for w in spec.negative_words)

    def test_text_survives_the_pipeline(self, tmp_path):
        """Bodies must split into sentences and tokenize back to pool
        words, otherwise the generator bypasses the code under test."""
        spec = SynthSpec(n_businesses=3, seed=0)
        _, review_path = generate(spec, tmp_path)
        pool = set(spec.positive_words + spec.negative_words + spec.neutral_words)
        for record in read_lines(review_path):
            sentences = split_sentences(record["text"])
            assert sentences
            for raw in sentences:
                for token in tokenize(raw).tokens:
                    assert token.norm in pool

    def test_bodies_carry_punctuation_and_case(self, tmp_path):
        _, review_path = generate(SynthSpec(n_businesses=3, seed=0), tmp_path)
        body = read_lines(review_path)[0]["text"]
        assert any(ch in body for ch in ".!?")
        assert body[0].isupper()


class TestNullCorpus:
    def test_every_model_is_near_zero_error(self, tmp_path):
        """All planted weights zero, no noise: stars are constant 3.0.

        The exact solvers should be exact; the SVR pair may sit anywhere
        inside its epsilon tube, so its bound is the tube width plus
        slack.
        """
        spec = SynthSpec(n_businesses=30, planted_weights={}, noise_sigma=0.0,
                         seed=2)
        business_path, review_path = generate(spec, tmp_path)
        corpus = build_corpus(business_path, review_path)
        counts, per_business = count_terms(corpus, FeatureMethod.BASELINE)
        vocabulary = build_vocabulary(counts, FeatureMethod.BASELINE, 10)
        matrix = assemble_matrix(corpus, per_business, vocabulary)
        assert set(matrix.y) == {3.0}

        plan = make_folds(len(corpus), 0)
        bounds = {ModelKind.LINEAR: 1e-4, ModelKind.TREE: 1e-12,
                  ModelKind.SVR: 0.15, ModelKind.SVR_NORMALIZED: 0.15}
        for kind, bound in bounds.items():
            result = cross_validate(matrix, kind, plan)
            assert result.mean_rmse <= bound, kind


class TestValidation:
    def test_zero_businesses(self, tmp_path):
        with pytest.raises(ValueError):
            generate(SynthSpec(n_businesses=0), tmp_path)

    def test_empty_pool(self, tmp_path):
        with pytest.raises(ValueError):
            generate(SynthSpec(positive_words=()), tmp_path)

    def test_negative_sigma(self, tmp_path):
        with pytest.raises(ValueError):
            generate(SynthSpec(noise_sigma=-0.1), tmp_path)


class TestFileSchema:
    def test_business_and_review_fields(self, tmp_path):
        business_path, review_path = generate(SynthSpec(n_businesses=2), tmp_path)
        business = read_lines(business_path)[0]
        assert {"business_id", "name", "stars", "categories",
                "review_count"} <= set(business)
        assert "Restaurants" in business["categories"]
        review = read_lines(review_path)[0]
        assert {"review_id", "business_id", "stars", "text"} <= set(review)
