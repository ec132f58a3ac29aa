"""Multi-class performance metrics for imbalanced problems.

Plain accuracy rewards majority-class bias, so evaluation uses the pairwise
rank-based AUC (averaged over class pairs), the prevalence-weighted
F-measure, and the geometric mean of per-class sensitivities.
"""

import logging

import numpy as np
from scipy.stats import rankdata

logger = logging.getLogger(__name__)

METRIC_NAMES = ("auc", "fmeasure", "gmean")


def _pairwise_auc(scores_col, labels, positive, negative) -> float:
    """Rank-based AUC of `positive` vs `negative` using one score column."""
    mask = (labels == positive) | (labels == negative)
    ranks = rankdata(scores_col[mask])  # mean ranks on ties
    n_pos = int(np.sum(labels[mask] == positive))
    n_neg = mask.sum() - n_pos
    rank_sum = ranks[labels[mask] == positive].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def auc_multiclass(scores, labels) -> float:
    """Multi-class AUC: mean over class pairs of the two directed rank AUCs.

    `scores` holds one class-support row per sample (rows on the simplex).
    Pairs with an absent class are skipped with a warning; an instance where
    every pair is skipped is an error.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if scores.ndim != 2 or scores.shape[0] != labels.shape[0]:
        raise ValueError("scores must be (n_samples, n_classes) matching labels")
    if (scores < -1e-12).any():
        raise ValueError("scores must be non-negative")
    if not np.allclose(scores.sum(axis=1), 1.0, atol=1e-9):
        raise ValueError("score rows must sum to 1")
    L = scores.shape[1]
    present = np.bincount(labels, minlength=L) > 0
    if present.sum() < 2:
        raise ValueError("AUC needs at least 2 classes present")
    values = []
    for i in range(L):
        for j in range(i + 1, L):
            if not (present[i] and present[j]):
                logger.warning("class pair (%d, %d) skipped: one side absent", i, j)
                continue
            a_ij = _pairwise_auc(scores[:, i], labels, i, j)
            a_ji = _pairwise_auc(scores[:, j], labels, j, i)
            values.append((a_ij + a_ji) / 2)
    if not values:
        raise ValueError("all class pairs were skipped")
    return float(np.mean(values))


def _confusion(predictions, labels, n_classes):
    cm = np.zeros((n_classes, n_classes), dtype=int)
    np.add.at(cm, (labels, predictions), 1)
    return cm


def f_measure_weighted(predictions, labels) -> float:
    """Per-class one-vs-rest F1 combined by class prevalence."""
    predictions = np.asarray(predictions, dtype=int)
    labels = np.asarray(labels, dtype=int)
    if labels.size == 0:
        raise ValueError("empty input")
    L = int(max(predictions.max(), labels.max())) + 1
    cm = _confusion(predictions, labels, L)
    tp = np.diag(cm).astype(float)
    predicted = cm.sum(axis=0).astype(float)
    actual = cm.sum(axis=1).astype(float)
    precision = np.divide(tp, predicted, out=np.zeros(L), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros(L), where=actual > 0)
    pr = precision + recall
    f1 = np.divide(2 * precision * recall, pr, out=np.zeros(L), where=pr > 0)
    weights = actual / labels.size
    return float((f1 * weights).sum())


def g_mean(predictions, labels) -> float:
    """Geometric mean of per-class sensitivities; 0 if any class has recall 0."""
    predictions = np.asarray(predictions, dtype=int)
    labels = np.asarray(labels, dtype=int)
    if labels.size == 0:
        raise ValueError("empty input")
    classes = np.unique(labels)
    recalls = np.array(
        [np.mean(predictions[labels == c] == c) for c in classes]
    )
    if (recalls == 0).any():
        return 0.0
    return float(np.exp(np.log(recalls).mean()))
