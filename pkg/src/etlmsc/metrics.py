"""Clustering agreement metrics: NMI, best-mapping accuracy, and the
pair-counting family (adjusted Rand, F-score, precision, recall).

All metrics are invariant under relabeling of either argument.  Entropy and
mutual information use natural logarithms; NMI is normalized by the
geometric mean of the two entropies.  Pair counts are exact integers, so
results match brute-force pair-loop oracles bit for bit.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import LengthMismatch


def _label_pair(truth, pred):
    t = np.asarray(truth, dtype=np.int64).ravel()
    p = np.asarray(pred, dtype=np.int64).ravel()
    if t.shape[0] != p.shape[0]:
        raise LengthMismatch(f"label lengths differ: {t.shape[0]} vs {p.shape[0]}")
    if t.shape[0] == 0:
        raise LengthMismatch("empty label vectors")
    return t, p


def contingency(truth, pred) -> np.ndarray:
    """Cross-tabulation of cluster memberships, rows = truth clusters."""
    t, p = _label_pair(truth, pred)
    _, ti = np.unique(t, return_inverse=True)
    _, pi = np.unique(p, return_inverse=True)
    counts = np.zeros((ti.max() + 1, pi.max() + 1), dtype=np.int64)
    np.add.at(counts, (ti, pi), 1)
    return counts


def _entropy(counts_1d, n):
    h = 0.0
    for c in counts_1d:
        c = int(c)
        if c > 0:
            q = c / n
            h -= q * math.log(q)
    return h


def nmi(truth, pred) -> float:
    """Normalized mutual information, geometric-mean normalization.

    Returns 1.0 when both partitions have zero entropy (both are a single
    cluster, hence equal), and 0.0 when exactly one entropy is zero.
    """
    c = contingency(truth, pred)
    n = int(c.sum())
    rows = c.sum(axis=1)
    cols = c.sum(axis=0)
    ht = _entropy(rows, n)
    hp = _entropy(cols, n)
    if ht == 0.0 and hp == 0.0:
        return 1.0
    if ht == 0.0 or hp == 0.0:
        return 0.0
    mi = 0.0
    for i in range(c.shape[0]):
        for j in range(c.shape[1]):
            cij = int(c[i, j])
            if cij > 0:
                mi += (cij / n) * math.log(n * cij / (int(rows[i]) * int(cols[j])))
    value = mi / math.sqrt(ht * hp)
    return min(1.0, max(0.0, value))


def hungarian(cost: np.ndarray) -> np.ndarray:
    """Minimum-cost assignment for a square cost matrix.

    Returns the permutation ``perm`` with row ``i`` assigned to column
    ``perm[i]``.  Among all optimal assignments the lexicographically
    smallest permutation is returned, found by fixing rows in order and
    keeping the smallest column that still admits an optimal completion.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    n = cost.shape[0]
    rows, cols = linear_sum_assignment(cost)
    best = float(cost[rows, cols].sum())
    tol = 1e-9 * max(1.0, abs(best))
    perm = np.empty(n, dtype=np.int64)
    free = list(range(n))
    prefix = 0.0
    for i in range(n):
        for j in free:
            remaining = [c for c in free if c != j]
            rest = 0.0
            if remaining:
                sub = cost[np.ix_(range(i + 1, n), remaining)]
                r, c = linear_sum_assignment(sub)
                rest = float(sub[r, c].sum())
            if prefix + cost[i, j] + rest <= best + tol:
                perm[i] = j
                prefix += cost[i, j]
                free = remaining
                break
    return perm


def accuracy(truth, pred) -> float:
    """Best-mapping clustering accuracy.

    The contingency table is padded to square with zeros when the cluster
    counts differ, then the mapping maximizing the matched count is found by
    optimal assignment on the negated table.
    """
    t, p = _label_pair(truth, pred)
    c = contingency(t, p)
    size = max(c.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: c.shape[0], : c.shape[1]] = c
    perm = hungarian(-padded.astype(np.float64))
    matched = int(padded[np.arange(size), perm].sum())
    return matched / t.shape[0]


def _pair_counts(c: np.ndarray):
    # exact integer pair counts over all unordered sample pairs
    n = int(c.sum())
    tp = sum(int(v) * (int(v) - 1) // 2 for v in c.ravel())
    same_truth = sum(int(v) * (int(v) - 1) // 2 for v in c.sum(axis=1))
    same_pred = sum(int(v) * (int(v) - 1) // 2 for v in c.sum(axis=0))
    total = n * (n - 1) // 2
    fn = same_truth - tp
    fp = same_pred - tp
    tn = total - tp - fp - fn
    return tp, fp, fn, tn, same_truth, same_pred, total


def pair_metrics(truth, pred) -> dict:
    """Adjusted Rand index, F-score, precision, and recall over all
    unordered sample pairs."""
    t, p = _label_pair(truth, pred)
    if t.shape[0] < 2:
        raise LengthMismatch("pair metrics need at least 2 samples")
    tp, fp, fn, tn, same_truth, same_pred, total = _pair_counts(contingency(t, p))
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f_score = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    expected = same_truth * same_pred / total
    max_index = 0.5 * (same_truth + same_pred)
    if max_index == expected:
        ari = 1.0 if tp == expected else 0.0
    else:
        ari = (tp - expected) / (max_index - expected)
    return {"ari": ari, "f_score": f_score, "precision": precision, "recall": recall}


def all_metrics(truth, pred) -> dict:
    """The full six-metric record used by the evaluation harness."""
    out = {"nmi": nmi(truth, pred), "acc": accuracy(truth, pred)}
    out.update(pair_metrics(truth, pred))
    return out
