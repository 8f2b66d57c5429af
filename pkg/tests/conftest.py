"""Shared fixtures: in-memory corpora built without touching disk."""

import pytest

from starforge.corpus import BusinessRecord, Corpus


def corpus_from(reviews_by_business, stars=None):
    """A Corpus straight from {business_id: [review texts]}.

    Stars default to 3.0; keys are inserted sorted, matching the
    ingestion contract.
    """
    stars = stars or {}
    businesses = {}
    reviews = {}
    for business_id in sorted(reviews_by_business):
        texts = list(reviews_by_business[business_id])
        businesses[business_id] = BusinessRecord(
            business_id=business_id,
            stars=float(stars.get(business_id, 3.0)),
            categories=("Restaurants",),
            review_count=len(texts),
        )
        reviews[business_id] = texts
    return Corpus(businesses=businesses, reviews_by_business=reviews)


@pytest.fixture
def make_corpus():
    return corpus_from
