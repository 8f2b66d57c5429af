"""Slow, simple reference implementations the tests compare against.

Everything here is deliberately written the dumb way: pure-Python loops,
explicit Gaussian elimination, exhaustive enumeration, nested ternary
search. None of it shares solver code with the package, so agreement is
evidence rather than tautology.
"""

import random


def gauss_solve(a, b):
    """Solve a @ v = b by Gaussian elimination with partial pivoting.

    a is a list of lists, b a list; both are copied, not modified.
    """
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[pivot][col]) == 0.0:
            raise ZeroDivisionError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            for c in range(col, n + 1):
                m[r][c] -= factor * m[col][c]
    v = [0.0] * n
    for r in range(n - 1, -1, -1):
        acc = m[r][n]
        for c in range(r + 1, n):
            acc -= m[r][c] * v[c]
        v[r] = acc / m[r][r]
    return v


def ols_reference(x, y):
    """Least-squares (weights, intercept) via explicit normal equations.

    Builds A = [X | 1], forms A'A and A'y with plain loops, and solves
    with gauss_solve.
    """
    n = len(x)
    k = len(x[0]) if n else 0
    rows = [list(r) + [1.0] for r in x]
    d = k + 1
    ata = [[sum(rows[i][p] * rows[i][q] for i in range(n)) for q in range(d)]
           for p in range(d)]
    aty = [sum(rows[i][p] * y[i] for i in range(n)) for p in range(d)]
    v = gauss_solve(ata, aty)
    return v[:k], v[k]


def sse_of(values):
    if not values:
        return 0.0
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values)


def exhaustive_tree(x, y, max_depth, min_leaf, depth=0):
    """Greedy regression tree by brute-force split enumeration.

    At every node, tries each (feature, adjacent-midpoint) candidate,
    scores it by summed child SSE computed with plain loops, and keeps
    the first strictly-best one in (feature, threshold) order. Returns a
    nested dict: {"value", "n"} for leaves, plus {"feature", "threshold",
    "left", "right"} for splits.
    """
    n = len(y)
    node = {"value": sum(y) / n, "n": n}
    if depth >= max_depth or n < 2 * min_leaf or len(set(y)) == 1:
        return node
    parent = sse_of(y)
    best = None  # (reduction, feature, threshold)
    k = len(x[0])
    for j in range(k):
        values = sorted(set(r[j] for r in x))
        for lo, hi in zip(values, values[1:]):
            t = (lo + hi) / 2.0
            if not (t < hi):
                continue
            left = [y[i] for i in range(n) if x[i][j] <= t]
            right = [y[i] for i in range(n) if x[i][j] > t]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue
            reduction = parent - sse_of(left) - sse_of(right)
            if reduction > 0 and (best is None or reduction > best[0]):
                best = (reduction, j, t)
    if best is None:
        return node
    _, j, t = best
    left_idx = [i for i in range(n) if x[i][j] <= t]
    right_idx = [i for i in range(n) if x[i][j] > t]
    node["feature"] = j
    node["threshold"] = t
    node["left"] = exhaustive_tree([x[i] for i in left_idx],
                                   [y[i] for i in left_idx],
                                   max_depth, min_leaf, depth + 1)
    node["right"] = exhaustive_tree([x[i] for i in right_idx],
                                    [y[i] for i in right_idx],
                                    max_depth, min_leaf, depth + 1)
    return node


def svr_objective_1d(xs, ys, w, b, c, epsilon):
    """0.5 w^2 + C sum max(0, |y - w x - b| - eps) for scalar features."""
    loss = sum(max(0.0, abs(y - w * x - b) - epsilon) for x, y in zip(xs, ys))
    return 0.5 * w * w + c * loss


def svr_converged_objective_1d(xs, ys, c, epsilon, iters=120):
    """Global minimum of the 1-feature SVR objective by nested ternary
    search over (w, b).

    The objective is jointly convex, so the partial minimum over b is
    convex in w and both searches converge. 120 rounds shrink the
    bracket by (2/3)^120, far below float resolution.
    """
    b_lo = min(ys) - epsilon - 1.0
    b_hi = max(ys) + epsilon + 1.0

    def best_over_b(w):
        lo, hi = b_lo, b_hi
        for _ in range(iters):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if svr_objective_1d(xs, ys, w, m1, c, epsilon) <= \
                    svr_objective_1d(xs, ys, w, m2, c, epsilon):
                hi = m2
            else:
                lo = m1
        mid = (lo + hi) / 2.0
        return svr_objective_1d(xs, ys, w, mid, c, epsilon)

    # At w = 0 the objective is at most C sum |y - b|, so the optimal w
    # satisfies 0.5 w^2 <= that bound.
    ceiling = c * sum(abs(y) for y in ys) + 1.0
    w_hi = (2.0 * ceiling) ** 0.5
    lo, hi = -w_hi, w_hi
    for _ in range(iters):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if best_over_b(m1) <= best_over_b(m2):
            hi = m2
        else:
            lo = m1
    return best_over_b((lo + hi) / 2.0)


def topk_reference(counts, k):
    """Top-k terms by full sort: count descending, term ascending."""
    items = [(t, c) for t, c in counts.items() if c > 0]
    items.sort(key=lambda tc: (-tc[1], tc[0]))
    return items[:k]


def reservoir_reference(records, sample_n, seed):
    """Algorithm R over an in-memory list, mirroring the streaming pass."""
    rng = random.Random(seed)
    kept = []
    for seen, record in enumerate(records, start=1):
        if sample_n is None or len(kept) < sample_n:
            kept.append(record)
        else:
            j = rng.randrange(seen)
            if j < sample_n:
                kept[j] = record
    return kept


def rmse_reference(y, y_hat):
    return (sum((a - b) ** 2 for a, b in zip(y, y_hat)) / len(y)) ** 0.5
