"""CART decision trees with Gini impurity and an impurity-decrease early stop.

Induction is fully deterministic: candidate thresholds are the midpoints
between consecutive distinct sorted feature values, and equal-gain splits
break ties by lowest feature index, then lowest threshold.
"""

from dataclasses import dataclass

import numpy as np

LEAF = -1


@dataclass(frozen=True)
class TreeConfig:
    """Induction parameters. Defaults: Gini, no depth cap, 0.05 early stop."""

    min_impurity_decrease: float = 0.05
    max_depth: int | None = None

    def __post_init__(self):
        if self.min_impurity_decrease < 0:
            raise ValueError("min_impurity_decrease must be >= 0")


class DecisionTree:
    """Fitted tree stored as flat node arrays.

    `feature[i] == -1` marks a leaf; internal nodes route `x[feature] <=
    threshold` to `left`, otherwise to `right`. Every node keeps its training
    class counts; leaf counts drive prediction and class supports.
    """

    def __init__(self, feature, threshold, left, right, counts, n_classes, arity):
        self.feature = np.asarray(feature, dtype=int)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=int)
        self.right = np.asarray(right, dtype=int)
        self.counts = np.asarray(counts, dtype=float)
        self.n_classes = int(n_classes)
        self.arity = int(arity)

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    def apply(self, X) -> np.ndarray:
        """Leaf index reached by each row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        node = np.zeros(X.shape[0], dtype=int)
        while True:
            feats = self.feature[node]
            live = np.flatnonzero(feats != LEAF)
            if live.size == 0:
                return node
            cur = node[live]
            go_left = X[live, self.feature[cur]] <= self.threshold[cur]
            node[live] = np.where(go_left, self.left[cur], self.right[cur])

    def predict_support(self, x) -> np.ndarray:
        """Leaf class counts normalized to sum 1, per row of x."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        if X.shape[1] != self.arity:
            raise ValueError(
                f"arity mismatch: tree expects {self.arity} features, got {X.shape[1]}"
            )
        counts = self.counts[self.apply(X)]
        support = counts / counts.sum(axis=1, keepdims=True)
        return support[0] if single else support

    def predict(self, x):
        """Class id with the largest leaf count; ties go to the lowest id."""
        support = self.predict_support(x)
        if support.ndim == 1:
            return int(np.argmax(support))
        return np.argmax(support, axis=1)

    def to_dict(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "arity": self.arity,
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DecisionTree":
        return cls(
            feature=payload["feature"],
            threshold=payload["threshold"],
            left=payload["left"],
            right=payload["right"],
            counts=payload["counts"],
            n_classes=payload["n_classes"],
            arity=payload["arity"],
        )


def _gini_from_counts(counts, n):
    return 1.0 - np.sum((counts / n) ** 2)


def _best_split(X, y_onehot, counts, n_total):
    """Best (feature, threshold, weighted decrease) for one node.

    Returns (None, None, -inf) when no candidate threshold exists. The gain
    is already weighted by n_node / n_total.
    """
    n = X.shape[0]
    parent_gini = _gini_from_counts(counts, n)
    best_gain = -np.inf
    best_feature = None
    best_threshold = None
    for j in range(X.shape[1]):
        col = X[:, j]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        boundaries = np.flatnonzero(sv[:-1] != sv[1:])
        if boundaries.size == 0:
            continue
        cum = np.cumsum(y_onehot[order], axis=0)
        left_counts = cum[boundaries]
        right_counts = counts - left_counts
        n_left = (boundaries + 1).astype(float)[:, None]
        n_right = n - n_left
        gini_left = 1.0 - np.sum((left_counts / n_left) ** 2, axis=1)
        gini_right = 1.0 - np.sum((right_counts / n_right) ** 2, axis=1)
        child = (n_left.ravel() * gini_left + n_right.ravel() * gini_right) / n
        gains = (n / n_total) * (parent_gini - child)
        pos = int(np.argmax(gains))  # first max = lowest threshold
        if gains[pos] > best_gain:  # strict: earlier feature wins ties
            b = boundaries[pos]
            mid = sv[b] + (sv[b + 1] - sv[b]) / 2.0
            if mid >= sv[b + 1]:  # midpoint rounded onto the right value
                mid = sv[b]
            best_gain = gains[pos]
            best_feature = j
            best_threshold = float(mid)
    return best_feature, best_threshold, best_gain


def fit_tree(X, y, config: TreeConfig = TreeConfig(), n_classes=None, rng=None) -> DecisionTree:
    """Grow an unpruned CART tree by greedy Gini splits.

    A node becomes a leaf when it is pure, holds fewer than 2 samples, or no
    split reaches `min_impurity_decrease` (gain weighted by the node's share
    of the training samples). `rng` is accepted for signature parity with the
    other training stages; induction itself is deterministic.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("fit_tree needs a non-empty 2-D feature matrix")
    if y.shape[0] != X.shape[0]:
        raise ValueError("X and y row counts differ")
    L = int(n_classes) if n_classes is not None else int(y.max()) + 1
    n_total = X.shape[0]
    onehot = np.zeros((n_total, L))
    onehot[np.arange(n_total), y] = 1.0

    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node():
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(None)
        return len(feature) - 1

    # (node id, row indices, depth) — explicit stack keeps deep trees safe
    stack = [(new_node(), np.arange(n_total), 0)]
    while stack:
        node, idx, depth = stack.pop()
        node_counts = onehot[idx].sum(axis=0)
        counts[node] = node_counts
        if (
            idx.size < 2
            or np.count_nonzero(node_counts) == 1
            or (config.max_depth is not None and depth >= config.max_depth)
        ):
            continue
        feat, thr, gain = _best_split(X[idx], onehot[idx], node_counts, n_total)
        if feat is None or gain < config.min_impurity_decrease:
            continue
        go_left = X[idx, feat] <= thr
        feature[node] = feat
        threshold[node] = thr
        left[node] = new_node()
        right[node] = new_node()
        stack.append((right[node], idx[~go_left], depth + 1))
        stack.append((left[node], idx[go_left], depth + 1))

    return DecisionTree(
        feature, threshold, left, right, np.vstack(counts), L, arity=X.shape[1]
    )
