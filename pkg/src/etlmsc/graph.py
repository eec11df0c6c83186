"""Markov-chain spectral clustering: similarity graph, random walk,
normalized Laplacian, spectral embedding, and k-means.

The pipeline follows the classic recipe: Gaussian-kernel similarity with a
bandwidth tied to the average pairwise distance, row-normalization into a
transition matrix, stationary distribution of the (teleported) walk,
symmetric normalized Laplacian, top eigenvectors, k-means on their rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateData,
    EigenFailure,
    NoConvergence,
    ZeroDegree,
)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Gaussian-kernel similarity ``values`` with the bandwidth ``sigma``
    it was built with.  Symmetric, entries in (0, 1], unit diagonal."""

    values: np.ndarray
    sigma: float


@dataclass(frozen=True)
class Partition:
    """Cluster assignment: integer ``labels`` in ``0..n_clusters-1``."""

    labels: np.ndarray
    n_clusters: int


def gaussian_similarity(x: np.ndarray, sigma_ratio: float = 1.0) -> SimilarityMatrix:
    """Pairwise similarities ``exp(-||x_i - x_j||^2 / sigma^2)``.

    ``sigma`` is ``sigma_ratio`` times the average Euclidean distance over
    all unordered sample pairs.

    Raises
    ------
    DegenerateData
        If every pairwise distance is zero, leaving sigma undefined.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError(f"need a 2-d array with >= 2 samples, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")
    if sigma_ratio <= 0:
        raise ValueError(f"sigma_ratio must be > 0, got {sigma_ratio}")
    n = x.shape[0]
    sq = np.sum(x * x, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
    mean_dist = float(np.sum(np.sqrt(d2))) / (n * (n - 1))
    if mean_dist == 0.0:
        raise DegenerateData("all pairwise distances are zero; sigma undefined")
    sigma = sigma_ratio * mean_dist
    s = np.exp(-d2 / sigma**2)
    s = 0.5 * (s + s.T)
    np.fill_diagonal(s, 1.0)
    return SimilarityMatrix(s, sigma)


def transition_matrix(s) -> np.ndarray:
    """Row-normalize a similarity matrix into a row-stochastic walk matrix.

    Raises
    ------
    ZeroDegree
        If any row of the similarity sums to zero.
    """
    values = s.values if isinstance(s, SimilarityMatrix) else np.asarray(s, dtype=np.float64)
    degrees = values.sum(axis=1)
    if np.any(degrees <= 0):
        bad = int(np.argmin(degrees))
        raise ZeroDegree(f"similarity row {bad} sums to {degrees[bad]}")
    return values / degrees[:, None]


def stationary_distribution(
    p: np.ndarray,
    alpha: float = 0.99,
    tol: float = 1e-12,
    max_iters: int = 10_000,
) -> np.ndarray:
    """Stationary distribution of the teleported walk
    ``alpha*P + (1-alpha)/N * ones``.

    Power iteration on the transpose from the uniform vector; teleportation
    guarantees a unique, strictly positive limit for any row-stochastic
    input.  Stops when successive iterates differ by <= ``tol`` in l1 norm.

    Raises
    ------
    NoConvergence
        After ``max_iters`` iterations.
    """
    p = np.asarray(p, dtype=np.float64)
    n = p.shape[0]
    pt = np.ascontiguousarray(p.T)
    teleport = (1.0 - alpha) / n
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iters):
        nxt = alpha * (pt @ pi) + teleport
        nxt /= nxt.sum()
        if float(np.abs(nxt - pi).sum()) <= tol:
            return nxt
        pi = nxt
    raise NoConvergence(f"power iteration did not converge in {max_iters} iterations")


def normalized_laplacian(p: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Symmetric walk Laplacian
    ``(Pi^1/2 P Pi^-1/2 + Pi^-1/2 P' Pi^1/2) / 2`` for diagonal ``Pi``."""
    p = np.asarray(p, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    if np.any(pi <= 0):
        raise ValueError("stationary distribution must be strictly positive")
    root = np.sqrt(pi)
    b = (root[:, None] * p) / root[None, :]
    return 0.5 * (b + b.T)


def spectral_embed(lp: np.ndarray, n_clusters: int) -> np.ndarray:
    """Orthonormal eigenvectors of the ``n_clusters`` algebraically largest
    eigenvalues of a symmetric matrix, one per column.

    Sign convention: the largest-magnitude entry of each eigenvector is made
    positive, so the embedding is deterministic.
    """
    lp = np.asarray(lp, dtype=np.float64)
    n = lp.shape[0]
    if not 1 <= n_clusters <= n:
        raise ValueError(f"need 1 <= n_clusters <= {n}, got {n_clusters}")
    try:
        _, vectors = np.linalg.eigh(lp)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    u = vectors[:, ::-1][:, :n_clusters].copy()
    for j in range(n_clusters):
        peak = int(np.argmax(np.abs(u[:, j])))
        if u[peak, j] < 0:
            u[:, j] = -u[:, j]
    return u


def _kmeanspp_init(x, n_clusters, rng):
    n = x.shape[0]
    centers = np.empty((n_clusters, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for j in range(1, n_clusters):
        total = d2.sum()
        if total <= 0:
            centers[j:] = x[rng.integers(n, size=n_clusters - j)]
            break
        centers[j] = x[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((x - centers[j]) ** 2, axis=1))
    return centers


def _lloyd(x, n_clusters, rng, tol, max_iters):
    n = x.shape[0]
    centers = _kmeanspp_init(x, n_clusters, rng)
    prev_inertia = np.inf
    labels = np.zeros(n, dtype=np.int64)
    # rounding slack for the monotonicity assertion, on the data's own scale
    slack = 1e-12 * (float(np.sum(x * x)) + 1.0)
    for _ in range(max_iters):
        d2 = np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        labels = d2.argmin(axis=1)
        empty = [j for j in range(n_clusters) if not np.any(labels == j)]
        if empty:
            # reseed each empty cluster at the currently worst-fit point
            worst = np.argsort(-d2[np.arange(n), labels])
            for j, idx in zip(empty, worst):
                centers[j] = x[idx]
            d2 = np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)
            labels = d2.argmin(axis=1)
        inertia = float(d2[np.arange(n), labels].sum())
        assert inertia <= prev_inertia * (1 + 1e-12) + slack, "Lloyd inertia increased"
        for j in range(n_clusters):
            mask = labels == j
            if np.any(mask):
                centers[j] = x[mask].mean(axis=0)
        if prev_inertia - inertia <= tol * max(inertia, np.finfo(float).tiny):
            break
        prev_inertia = inertia
    return labels, inertia


def kmeans(
    u: np.ndarray,
    n_clusters: int,
    seed: int = 0,
    restarts: int = 20,
    tol: float = 1e-9,
    max_iters: int = 300,
) -> Partition:
    """k-means++ / Lloyd clustering of the rows of ``u``.

    Runs ``restarts`` independent seedings and keeps the lowest-inertia
    result.  Deterministic given ``seed``; empty clusters are repaired by
    reseeding at the worst-fit point.
    """
    x = np.asarray(u, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-d embedding, got shape {x.shape}")
    if n_clusters < 1 or n_clusters > x.shape[0]:
        raise ValueError(f"need 1 <= n_clusters <= {x.shape[0]}, got {n_clusters}")
    rng = np.random.default_rng(seed)
    best_labels, best_inertia = None, np.inf
    for _ in range(max(1, restarts)):
        labels, inertia = _lloyd(x, n_clusters, rng, tol, max_iters)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return Partition(best_labels, n_clusters)


def is_transition(a: np.ndarray, tol: float = 1e-12) -> bool:
    """True if ``a`` is square, nonnegative, and row-stochastic within tol."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.all(a >= 0) and np.max(np.abs(a.sum(axis=1) - 1.0)) <= tol)


def condition_transition(a: np.ndarray) -> np.ndarray:
    """Turn an arbitrary learned affinity into a valid transition matrix.

    Inputs that already satisfy the transition invariants pass through
    untouched.  Otherwise: clamp negatives to zero, symmetrize, add 1e-12 to
    the diagonal (so no row is all zero), and row-normalize.  Positive
    rescalings of the input produce the same output up to rounding, which is
    what makes the clustering pipeline scale-invariant.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if is_transition(a):
        return a.copy()
    b = np.maximum(a, 0.0)
    b = 0.5 * (b + b.T)
    b = b + 1e-12 * np.eye(a.shape[0])
    return b / b.sum(axis=1)[:, None]


def markov_spectral_cluster(
    p_like: np.ndarray,
    n_clusters: int,
    seed: int = 0,
    restarts: int = 20,
    normalize_rows: bool = False,
    return_embedding: bool = False,
):
    """Full walk-based spectral clustering of an (approximate) transition
    matrix: condition, stationary distribution, normalized Laplacian, top-C
    eigenvectors, k-means on their rows.

    ``normalize_rows`` optionally length-normalizes embedding rows before
    k-means (off by default: the rows go in as-is).
    """
    p = condition_transition(p_like)
    pi = stationary_distribution(p)
    lp = normalized_laplacian(p, pi)
    u = spectral_embed(lp, n_clusters)
    x = u
    if normalize_rows:
        lengths = np.linalg.norm(u, axis=1)
        x = u / np.where(lengths > 0, lengths, 1.0)[:, None]
    part = kmeans(x, n_clusters, seed=seed, restarts=restarts)
    if return_embedding:
        return part, u
    return part
