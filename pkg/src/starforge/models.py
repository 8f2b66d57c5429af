"""The four regressors behind one fit/predict contract.

All four are implemented here directly: ordinary least squares via the
normal equations, linear epsilon-insensitive support vector regression by
subgradient descent (with or without z-score normalization), and greedy
variance-reduction tree regression. numpy supplies the array arithmetic
and the dense linear solve; everything above that level is local code.
"""

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, IoFailure, LengthMismatch

log = logging.getLogger(__name__)

RIDGE_JITTER = 1e-8
DEFAULT_SVR_C = 1.0
DEFAULT_SVR_EPSILON = 0.1
DEFAULT_SVR_EPOCHS = 200
DEFAULT_TREE_MAX_DEPTH = 8
DEFAULT_TREE_MIN_LEAF = 5

STAR_MIN = 1.0
STAR_MAX = 5.0

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Normalizer:
    """Per-column z-score parameters, fitted on training rows only."""

    means: np.ndarray
    stds: np.ndarray


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    intercept: float
    jittered: bool = False


@dataclass(frozen=True)
class SvrModel:
    weights: np.ndarray
    bias: float
    c: float
    epsilon: float
    normalized: bool
    normalizer: Normalizer | None
    objective_trace: tuple[float, ...]


@dataclass
class TreeNode:
    """One node; value is the mean target of the training rows routed here."""

    value: float
    n_samples: int
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass(frozen=True)
class TreeModel:
    root: TreeNode
    max_depth: int
    min_leaf: int
    n_features: int


def _check_xy(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2:
        raise DegenerateInput(f"x must be 2-D, got shape {x.shape}")
    if y.ndim != 1:
        raise DegenerateInput(f"y must be 1-D, got shape {y.shape}")
    if x.shape[0] != y.shape[0]:
        raise LengthMismatch(f"{x.shape[0]} rows vs {y.shape[0]} targets")
    if x.shape[0] == 0:
        raise DegenerateInput("cannot fit on zero rows")
    return x, y


def normalize_fit(x_train) -> Normalizer:
    """Column means and population stds; zero-variance columns get std 1."""
    x_train = np.asarray(x_train, dtype=np.float64)
    if x_train.ndim != 2 or x_train.shape[0] < 1:
        raise DegenerateInput("normalizer needs at least one training row")
    means = x_train.mean(axis=0)
    stds = x_train.std(axis=0)
    stds = np.where(stds == 0.0, 1.0, stds)
    return Normalizer(means=means, stds=stds)


def normalize_apply(normalizer: Normalizer, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return (x - normalizer.means) / normalizer.stds


def fit_linear(x, y) -> LinearModel:
    """Least squares through the normal equations of [X | 1].

    Solves (A'A) v = A'y. When the Gram matrix is singular, or the
    unjittered solution fails the optimality residual check
    max|A'(y - Av)| <= 1e-6 * N, the diagonal gets a ridge jitter of 1e-8
    and the solve is repeated. The jitter event is logged.
    """
    x, y = _check_xy(x, y)
    n = x.shape[0]
    a = np.column_stack([x, np.ones(n)])
    gram = a.T @ a
    rhs = a.T @ y

    solution = None
    try:
        candidate = np.linalg.solve(gram, rhs)
        residual = rhs - gram @ candidate
        kkt = a.T @ (y - a @ candidate)
        if np.all(np.isfinite(candidate)) and np.max(np.abs(kkt)) <= 1e-6 * n:
            solution = candidate
    except np.linalg.LinAlgError:
        pass

    jittered = solution is None
    if jittered:
        log.info("singular or ill-conditioned Gram matrix, applying ridge "
                 "jitter %.0e", RIDGE_JITTER)
        solution = np.linalg.solve(
            gram + RIDGE_JITTER * np.eye(gram.shape[0]), rhs)

    return LinearModel(weights=solution[:-1].copy(),
                       intercept=float(solution[-1]),
                       jittered=jittered)


def _svr_objective(x, y, w, b, c, epsilon) -> float:
    slack = np.abs(y - x @ w - b) - epsilon
    return float(0.5 * (w @ w) + c * np.maximum(slack, 0.0).sum())


def fit_svr(x, y, c: float = DEFAULT_SVR_C, epsilon: float = DEFAULT_SVR_EPSILON,
            normalized: bool = False, epochs: int = DEFAULT_SVR_EPOCHS,
            seed: int = 0) -> SvrModel:
    """Linear epsilon-insensitive SVR by seeded subgradient descent.

    Minimizes 0.5 ||w||^2 + C sum_i max(0, |y_i - w.x_i - b| - epsilon)
    with one subgradient step per sample, samples visited in a freshly
    shuffled order each epoch, and a step of 1 / (C * N * sqrt(e))
    throughout epoch e. The square-root decay matters: under a 1/e decay
    the intercept's total remaining travel is only logarithmic in the
    epoch count, and the solver stalls measurably short of the optimum
    whenever weights and intercept trade off along a shallow valley. The
    returned model is the best iterate seen, and the recorded objective
    trace is the running best after each epoch, so it never increases.
    """
    x, y = _check_xy(x, y)
    if c <= 0:
        raise ValueError("C must be positive")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")

    normalizer = None
    if normalized:
        normalizer = normalize_fit(x)
        x = normalize_apply(normalizer, x)
    x = np.ascontiguousarray(x)

    n, k = x.shape
    rng = np.random.default_rng(seed)
    w = np.zeros(k)
    b = 0.0
    best_w = w.copy()
    best_b = b
    best_obj = _svr_objective(x, y, w, b, c, epsilon)
    trace = []
    for epoch in range(1, epochs + 1):
        eta = 1.0 / (c * n * np.sqrt(epoch))
        shrink = 1.0 - eta / n
        step = eta * c
        for i in rng.permutation(n):
            row = x[i]
            r = y[i] - row @ w - b
            w *= shrink
            if r > epsilon:
                w += step * row
                b += step
            elif r < -epsilon:
                w -= step * row
                b -= step
        obj = _svr_objective(x, y, w, b, c, epsilon)
        if obj < best_obj:
            best_obj = obj
            best_w = w.copy()
            best_b = b
        trace.append(best_obj)

    return SvrModel(weights=best_w, bias=float(best_b), c=c, epsilon=epsilon,
                    normalized=normalized, normalizer=normalizer,
                    objective_trace=tuple(trace))


def _exact_sse(values, squares) -> float:
    """Sum of squared deviations from the mean, via exactly rounded sums.

    math.fsum makes the result a function of the value multiset alone, so
    two candidate splits inducing the same row partition score
    bit-identically no matter which feature produced them.
    """
    s = math.fsum(values)
    return math.fsum(squares) - s * s / len(values)


def _best_split(x, y, min_leaf, parent_sse):
    """Highest variance-reduction (feature, threshold) split, or None.

    Candidates are midpoints of adjacent distinct observed values per
    feature. Reduction is parent SSE minus child SSEs, which equals
    N Var(parent) - N_L Var(L) - N_R Var(R). A vectorized prefix-sum scan
    ranks every candidate first; anything within a whisker of the top is
    then re-scored with _exact_sse, because the tie rule (lowest feature
    index, then lowest threshold) is only meaningful if tied partitions
    compare equal rather than diverging in scan-order rounding noise.
    """
    n, k = x.shape
    left_sizes = np.arange(1, n)
    right_sizes = n - left_sizes
    scans = []
    rough_best = 0.0
    for j in range(k):
        order = np.argsort(x[:, j], kind="stable")
        xs = x[order, j]
        ys = y[order]
        midpoints = 0.5 * (xs[:-1] + xs[1:])
        valid = (xs[1:] > xs[:-1]) & (midpoints < xs[1:])
        valid &= (left_sizes >= min_leaf) & (right_sizes >= min_leaf)
        if not valid.any():
            scans.append(None)
            continue
        prefix = np.cumsum(ys)[:-1]
        prefix_sq = np.cumsum(ys * ys)[:-1]
        total = prefix[-1] + ys[-1]
        total_sq = prefix_sq[-1] + ys[-1] * ys[-1]
        sse_left = prefix_sq - prefix * prefix / left_sizes
        suffix = total - prefix
        sse_right = (total_sq - prefix_sq) - suffix * suffix / right_sizes
        reduction = np.where(valid, parent_sse - sse_left - sse_right, -np.inf)
        scans.append((reduction, midpoints))
        rough_best = max(rough_best, float(reduction.max()))
    if rough_best <= 0.0:
        return None

    y_sq = y * y
    parent_exact = _exact_sse(y, y_sq)
    cutoff = rough_best - 1e-6 * parent_sse
    best = None
    best_score = 0.0
    for j, scan in enumerate(scans):
        if scan is None:
            continue
        reduction, midpoints = scan
        for i in np.flatnonzero(reduction >= cutoff):
            threshold = float(midpoints[i])
            mask = x[:, j] <= threshold
            score = parent_exact - _exact_sse(y[mask], y_sq[mask]) \
                - _exact_sse(y[~mask], y_sq[~mask])
            if score > best_score:
                best_score = score
                best = (j, threshold)
    return best


def _grow_tree(x, y, depth, max_depth, min_leaf) -> TreeNode:
    node = TreeNode(value=float(y.mean()), n_samples=len(y))
    if depth >= max_depth or len(y) < 2 * min_leaf or np.all(y == y[0]):
        return node
    parent_sse = float(((y - y.mean()) ** 2).sum())
    split = _best_split(x, y, min_leaf, parent_sse)
    if split is None:
        return node
    feature, threshold = split
    mask = x[:, feature] <= threshold
    node.feature = feature
    node.threshold = threshold
    node.left = _grow_tree(x[mask], y[mask], depth + 1, max_depth, min_leaf)
    node.right = _grow_tree(x[~mask], y[~mask], depth + 1, max_depth, min_leaf)
    return node


def fit_tree(x, y, max_depth: int = DEFAULT_TREE_MAX_DEPTH,
             min_leaf: int = DEFAULT_TREE_MIN_LEAF) -> TreeModel:
    """Greedy CART regression tree maximizing variance reduction."""
    x, y = _check_xy(x, y)
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    root = _grow_tree(x, y, 0, max_depth, min_leaf)
    return TreeModel(root=root, max_depth=max_depth, min_leaf=min_leaf,
                     n_features=x.shape[1])


def _route(node: TreeNode, row: np.ndarray) -> float:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node.value


def predict(model, x, clamp: bool = True) -> np.ndarray:
    """Model predictions, clamped to the 1-to-5 star range by default.

    The clamp is what reports want; solver-level tests switch it off to
    see the raw regression output.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionMismatch(f"x must be 2-D, got shape {x.shape}")

    if isinstance(model, LinearModel):
        if x.shape[1] != model.weights.shape[0]:
            raise DimensionMismatch(
                f"{x.shape[1]} columns vs {model.weights.shape[0]} trained")
        out = x @ model.weights + model.intercept
    elif isinstance(model, SvrModel):
        if x.shape[1] != model.weights.shape[0]:
            raise DimensionMismatch(
                f"{x.shape[1]} columns vs {model.weights.shape[0]} trained")
        z = normalize_apply(model.normalizer, x) if model.normalizer else x
        out = z @ model.weights + model.bias
    elif isinstance(model, TreeModel):
        if x.shape[1] != model.n_features:
            raise DimensionMismatch(
                f"{x.shape[1]} columns vs {model.n_features} trained")
        out = np.array([_route(model.root, row) for row in x], dtype=np.float64)
    else:
        raise TypeError(f"not a trained model: {type(model).__name__}")

    if clamp:
        out = np.clip(out, STAR_MIN, STAR_MAX)
    return out


def _node_to_dict(node: TreeNode) -> dict:
    doc = {"value": node.value, "n_samples": node.n_samples}
    if not node.is_leaf:
        doc.update(feature=node.feature, threshold=node.threshold,
                   left=_node_to_dict(node.left), right=_node_to_dict(node.right))
    return doc


def _node_from_dict(doc: dict) -> TreeNode:
    node = TreeNode(value=float(doc["value"]), n_samples=int(doc["n_samples"]))
    if "feature" in doc:
        node.feature = int(doc["feature"])
        node.threshold = float(doc["threshold"])
        node.left = _node_from_dict(doc["left"])
        node.right = _node_from_dict(doc["right"])
    return node


def model_to_dict(model, metadata: dict | None = None) -> dict:
    doc = {"format_version": MODEL_FORMAT_VERSION}
    if metadata:
        doc["metadata"] = dict(metadata)
    if isinstance(model, LinearModel):
        doc.update(kind="linear", weights=model.weights.tolist(),
                   intercept=model.intercept, jittered=model.jittered)
    elif isinstance(model, SvrModel):
        doc.update(kind="svr", weights=model.weights.tolist(), bias=model.bias,
                   c=model.c, epsilon=model.epsilon, normalized=model.normalized,
                   objective_trace=list(model.objective_trace))
        if model.normalizer is not None:
            doc["normalizer"] = {"means": model.normalizer.means.tolist(),
                                 "stds": model.normalizer.stds.tolist()}
    elif isinstance(model, TreeModel):
        doc.update(kind="tree", max_depth=model.max_depth, min_leaf=model.min_leaf,
                   n_features=model.n_features, root=_node_to_dict(model.root))
    else:
        raise TypeError(f"not a trained model: {type(model).__name__}")
    return doc


def model_from_dict(doc: dict):
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise IoFailure(f"unsupported model format {doc.get('format_version')!r}")
    kind = doc.get("kind")
    if kind == "linear":
        return LinearModel(weights=np.array(doc["weights"], dtype=np.float64),
                           intercept=float(doc["intercept"]),
                           jittered=bool(doc.get("jittered", False)))
    if kind == "svr":
        normalizer = None
        if "normalizer" in doc:
            normalizer = Normalizer(
                means=np.array(doc["normalizer"]["means"], dtype=np.float64),
                stds=np.array(doc["normalizer"]["stds"], dtype=np.float64))
        return SvrModel(weights=np.array(doc["weights"], dtype=np.float64),
                        bias=float(doc["bias"]), c=float(doc["c"]),
                        epsilon=float(doc["epsilon"]),
                        normalized=bool(doc["normalized"]),
                        normalizer=normalizer,
                        objective_trace=tuple(doc.get("objective_trace", ())))
    if kind == "tree":
        return TreeModel(root=_node_from_dict(doc["root"]),
                         max_depth=int(doc["max_depth"]),
                         min_leaf=int(doc["min_leaf"]),
                         n_features=int(doc["n_features"]))
    raise IoFailure(f"unknown model kind {kind!r}")


def save_model(model, path, metadata: dict | None = None) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(model_to_dict(model, metadata), fh, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write model file {path}: {exc}") from exc


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return model_from_dict(json.load(fh))
    except FileNotFoundError:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        raise IoFailure(f"cannot read model file {path}: {exc}") from exc
