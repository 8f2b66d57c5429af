"""Ten-fold cross-validation, the experiment grid, and its reports.

A single FoldPlan is shared by every cell of a grid run so that method,
model, and K comparisons see exactly the same split. Vocabularies are
built from the full corpus before the split, which leaks test-fold text
into vocabulary selection; that ordering is intentional here and is
flagged in report metadata as vocabulary_scope.
"""

import csv
import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from . import __version__, models, postag, text
from .corpus import Corpus, corpus_hash
from .errors import (EmptyInput, IoFailure, LengthMismatch, StarforgeError,
                     TooFewBusinesses)
from .features import (DEFAULT_CHUNK_THRESHOLD, FeatureMatrix, FeatureMethod,
                       assemble_matrix, build_vocabulary, count_terms)

log = logging.getLogger(__name__)

N_FOLDS = 10

DEFAULT_KS = (30, 50, 100, 200, 300, 500, 1000)


class ModelKind(Enum):
    LINEAR = "linear"
    SVR = "svr"
    SVR_NORMALIZED = "svr_normalized"
    TREE = "tree"


@dataclass(frozen=True)
class FoldPlan:
    seed: int
    n: int
    folds: tuple[tuple[int, ...], ...]


@dataclass
class ExperimentResult:
    method: FeatureMethod
    model: ModelKind
    k: int
    fold_rmse: tuple[float, ...]
    mean_rmse: float
    wall_time: float
    metadata: dict = field(default_factory=dict)


def rmse(y, y_hat) -> float:
    """Root mean squared error sqrt(mean((y - y_hat)^2))."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape:
        raise LengthMismatch(f"{y.shape} vs {y_hat.shape}")
    if y.size == 0:
        raise EmptyInput("rmse of zero elements")
    return float(np.sqrt(np.mean((y - y_hat) ** 2)))


def make_folds(n: int, seed: int = 0) -> FoldPlan:
    """Shuffle 0..n-1 with the seed and deal round-robin into 10 folds."""
    if n < N_FOLDS:
        raise TooFewBusinesses(f"need at least {N_FOLDS} businesses, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    folds = tuple(tuple(int(i) for i in order[f::N_FOLDS]) for f in range(N_FOLDS))
    return FoldPlan(seed=seed, n=n, folds=folds)


def _fold_seed(seed: int, fold_index: int) -> int:
    # Distinct, reproducible per-fold stream for the SVR shuffler.
    return (seed * 1_000_003 + fold_index) & (2**63 - 1)


def fit_model(kind: ModelKind, x, y, hyper: dict | None = None, seed: int = 0):
    """Dispatch one model fit; hyper overrides that model's defaults."""
    hyper = dict(hyper or {})
    if kind is ModelKind.LINEAR:
        return models.fit_linear(x, y)
    if kind is ModelKind.SVR:
        return models.fit_svr(x, y, normalized=False, seed=seed, **hyper)
    if kind is ModelKind.SVR_NORMALIZED:
        return models.fit_svr(x, y, normalized=True, seed=seed, **hyper)
    if kind is ModelKind.TREE:
        return models.fit_tree(x, y, **hyper)
    raise ValueError(f"unknown model kind {kind!r}")


def cross_validate(matrix: FeatureMatrix, model_kind: ModelKind, plan: FoldPlan,
                   hyper: dict | None = None, clamp: bool = True,
                   metadata: dict | None = None,
                   models_out: list | None = None) -> ExperimentResult:
    """Fit on nine folds, score the tenth, for each fold in the plan.

    Anything fitted to data, including the SVR normalizer, sees training
    rows only. Predictions are clamped to [1, 5] unless clamp is off.
    When models_out is a list, the fitted per-fold models are appended to
    it, which tests use to inspect fold-level state.
    """
    if plan.n != len(matrix.row_ids):
        raise LengthMismatch(
            f"fold plan covers {plan.n} rows, matrix has {len(matrix.row_ids)}")
    all_idx = np.arange(plan.n)
    fold_scores = []
    started = time.perf_counter()
    for f, fold in enumerate(plan.folds):
        test_idx = np.array(fold, dtype=np.intp)
        train_mask = np.ones(plan.n, dtype=bool)
        train_mask[test_idx] = False
        train_idx = all_idx[train_mask]
        try:
            model = fit_model(model_kind, matrix.x[train_idx],
                              matrix.y[train_idx], hyper,
                              seed=_fold_seed(plan.seed, f))
        except (StarforgeError, ValueError) as exc:
            raise type(exc)(f"fold {f}: {exc}") from exc
        if models_out is not None:
            models_out.append(model)
        y_hat = models.predict(model, matrix.x[test_idx], clamp=clamp)
        fold_scores.append(rmse(matrix.y[test_idx], y_hat))
    elapsed = time.perf_counter() - started
    return ExperimentResult(
        method=matrix.vocabulary.method,
        model=model_kind,
        k=matrix.vocabulary.k,
        fold_rmse=tuple(fold_scores),
        mean_rmse=float(np.mean(fold_scores)),
        wall_time=elapsed,
        metadata=dict(metadata or {}),
    )


def run_grid(corpus: Corpus, methods=None, model_kinds=None, ks=None,
             seed: int = 0, lexicon: postag.TagLexicon | None = None,
             stopword_policy: text.StopwordPolicy = text.StopwordPolicy.ENABLED,
             clamp: bool = True,
             chunk_threshold: int = DEFAULT_CHUNK_THRESHOLD,
             ) -> list[ExperimentResult]:
    """Every (method, model, k) cell under one shared fold plan.

    Counting happens once per method and is reused across the K sweep;
    results come back sorted by (method, model, k).
    """
    methods = list(methods) if methods else list(FeatureMethod)
    model_kinds = list(model_kinds) if model_kinds else list(ModelKind)
    ks = sorted(set(ks)) if ks else list(DEFAULT_KS)
    if not methods or not model_kinds or not ks:
        raise ValueError("methods, model_kinds, and ks must be nonempty")

    plan = make_folds(len(corpus), seed)
    base_metadata = {
        "artifact_version": __version__,
        "corpus_hash": corpus_hash(corpus),
        "seed": seed,
        "stopword_list_hash": text.stopword_list_hash(),
        "lexicon_hash": (lexicon or postag.default_lexicon()).content_hash,
        "stopword_policy": stopword_policy.value,
        "clamp": clamp,
        "vocabulary_scope": "full corpus, built before the fold split",
    }

    results = []
    for method in sorted(set(methods), key=lambda m: m.value):
        global_counts, per_business = count_terms(
            corpus, method, lexicon, stopword_policy, chunk_threshold)
        for k in ks:
            vocabulary = build_vocabulary(global_counts, method, k)
            matrix = assemble_matrix(corpus, per_business, vocabulary)
            for kind in sorted(set(model_kinds), key=lambda m: m.value):
                result = cross_validate(matrix, kind, plan, clamp=clamp,
                                        metadata=base_metadata)
                log.info("%s / %s / k=%d: mean rmse %.4f (%.2fs)",
                         method.value, kind.value, k, result.mean_rmse,
                         result.wall_time)
                results.append(result)
    results.sort(key=lambda r: (r.method.value, r.model.value, r.k))
    return results


def summarize(results: list[ExperimentResult]) -> dict:
    """Best-K table per (method, model) plus the RMSE-vs-K series."""
    if not results:
        raise EmptyInput("no results to summarize")

    methods = sorted({r.method.value for r in results})
    kinds = sorted({r.model.value for r in results})
    ks = sorted({r.k for r in results})

    best_rows = []
    for method in methods:
        per_model = {}
        for kind in kinds:
            cells = [r for r in results
                     if r.method.value == method and r.model.value == kind]
            if not cells:
                continue
            best = min(cells, key=lambda r: (r.mean_rmse, r.k))
            per_model[kind] = best
        floor = min(per_model.values(), key=lambda r: r.mean_rmse).mean_rmse
        for kind in kinds:
            if kind not in per_model:
                continue
            best = per_model[kind]
            best_rows.append({
                "method": method,
                "model": kind,
                "k": best.k,
                "rmse": best.mean_rmse,
                "best_for_method": best.mean_rmse == floor,
            })

    series = {}
    for method in methods:
        by_cell = {(r.model.value, r.k): r.mean_rmse for r in results
                   if r.method.value == method}
        series[method] = {
            "ks": ks,
            "models": {kind: [by_cell.get((kind, k)) for k in ks]
                       for kind in kinds
                       if any((kind, k) in by_cell for k in ks)},
        }

    return {"best_table": best_rows, "series": series}


def write_report(results: list[ExperimentResult], out_dir,
                 metadata: dict | None = None) -> dict:
    """Write results.csv, summary.json, and one series CSV per method.

    Per-fold wall times stay out of the files on purpose: artifacts must
    be byte-identical across reruns of the same configuration, so timing
    goes to the log instead.
    """
    out_dir = Path(out_dir)
    summary = summarize(results)
    if metadata is None and results:
        metadata = results[0].metadata
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "results.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "model", "k", "fold", "rmse"])
            for r in results:
                for f, value in enumerate(r.fold_rmse):
                    writer.writerow([r.method.value, r.model.value, r.k, f,
                                     repr(value)])
        doc = {
            "artifact_version": __version__,
            "metadata": dict(metadata or {}),
            "best_table": summary["best_table"],
            "series": summary["series"],
        }
        with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        for method, data in summary["series"].items():
            kinds = sorted(data["models"])
            path = out_dir / f"series_{method}.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["k"] + kinds)
                for i, k in enumerate(data["ks"]):
                    row = [k]
                    for kind in kinds:
                        value = data["models"][kind][i]
                        row.append("" if value is None else repr(value))
                    writer.writerow(row)
    except OSError as exc:
        raise IoFailure(f"cannot write report to {out_dir}: {exc}") from exc
    return summary
