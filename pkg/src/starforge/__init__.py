"""Predict a business's star rating from its review text alone.

The pipeline: ingest a Yelp-style dump, build bag-of-words frequency
features under three methods (all non-stopwords, open-class words after
POS tagging, or adjectives only), fit four regressors (least squares,
SVR with and without normalization, regression tree), and score each
combination by 10-fold cross-validated RMSE over a sweep of vocabulary
sizes.
"""

__version__ = "0.1.0"

from .corpus import (BusinessRecord, Corpus, ReviewRecord, build_corpus,
                     chunk_reviews, corpus_hash, load_corpus, save_corpus)
from .errors import StarforgeError
from .evaluation import (ExperimentResult, FoldPlan, ModelKind, cross_validate,
                         make_folds, rmse, run_grid, summarize, write_report)
from .features import (FeatureMatrix, FeatureMethod, Vocabulary, build_matrix,
                       build_vocabulary, count_terms, freq_vector,
                       vocabulary_report)
from .models import (LinearModel, Normalizer, SvrModel, TreeModel, fit_linear,
                     fit_svr, fit_tree, normalize_apply, normalize_fit, predict)
from .postag import PosTag, TagLexicon, default_lexicon, extract_adjectives, \
    open_class_filter, tag_sentence
from .synth import SynthSpec, generate
from .text import Sentence, StopwordPolicy, Token, is_stopword, \
    split_sentences, stopwords, tokenize

__all__ = [
    "BusinessRecord", "Corpus", "ReviewRecord", "build_corpus",
    "chunk_reviews", "corpus_hash", "load_corpus", "save_corpus",
    "StarforgeError",
    "ExperimentResult", "FoldPlan", "ModelKind", "cross_validate",
    "make_folds", "rmse", "run_grid", "summarize", "write_report",
    "FeatureMatrix", "FeatureMethod", "Vocabulary", "build_matrix",
    "build_vocabulary", "count_terms", "freq_vector", "vocabulary_report",
    "LinearModel", "Normalizer", "SvrModel", "TreeModel", "fit_linear",
    "fit_svr", "fit_tree", "normalize_apply", "normalize_fit", "predict",
    "PosTag", "TagLexicon", "default_lexicon", "extract_adjectives",
    "open_class_filter", "tag_sentence",
    "SynthSpec", "generate",
    "Sentence", "StopwordPolicy", "Token", "is_stopword", "split_sentences",
    "stopwords", "tokenize",
]
