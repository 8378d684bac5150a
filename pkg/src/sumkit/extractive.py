"""Cluster-based extractive summarization.

Sentences are embedded, clustered with seeded k-means on unit-normalized
vectors, and the sentence closest to each centroid by cosine similarity
is kept, in original article order. The cluster count comes from the
article-to-target token ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embedding import Provider, embed_sentences
from .text import SubwordVocab, sentence_split, subword_tokenize

KMEANS_MAX_ITER = 100
KMEANS_SHIFT_TOL = 1e-4


@dataclass
class ClusterResult:
    assignments: list[int]
    centroids: np.ndarray
    iterations: int
    converged: bool
    ssq: float
    # within-cluster sum of squares after the initial assignment and after
    # every Lloyd iteration; non-increasing
    ssq_history: list[float] = field(default_factory=list)


@dataclass
class ExtractiveSummary:
    selected: list[int]  # sentence indices, strictly ascending
    text: str
    k_used: int


def num_clusters(article_tokens: int, target_summary_tokens: int, n_sentences: int) -> int:
    """Cluster count: sentences scaled by the target/article token ratio,
    rounded half-up and clamped to [1, n_sentences].
    """
    if article_tokens < 1 or target_summary_tokens < 1 or n_sentences < 1:
        raise ValueError("all arguments must be >= 1")
    k = math.floor(n_sentences * target_summary_tokens / article_tokens + 0.5)
    return max(1, min(n_sentences, k))


def _nearest(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # squared Euclidean distances; argmin breaks ties toward the lower id
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def _ssq(points: np.ndarray, centroids: np.ndarray, assign: np.ndarray) -> float:
    diff = points - centroids[assign]
    return float((diff * diff).sum())


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = float(d2.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # all remaining points coincide with a centroid
            candidates = [i for i in range(n) if i not in chosen]
            idx = candidates[int(rng.integers(len(candidates)))] if candidates else int(rng.integers(n))
        chosen.append(idx)
        d2 = np.minimum(d2, ((points - points[idx]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _cluster_means(points: np.ndarray, assign: np.ndarray, k: int, previous: np.ndarray) -> np.ndarray:
    """Means per cluster; an empty cluster steals the point farthest from
    its current centroid.
    """
    centroids = previous.copy()
    counts = np.bincount(assign, minlength=k)
    for j in range(k):
        if counts[j] > 0:
            centroids[j] = points[assign == j].mean(axis=0)
    empty = [j for j in range(k) if counts[j] == 0]
    if empty:
        dist = ((points - centroids[assign]) ** 2).sum(axis=1)
        taken: set[int] = set()
        for j in empty:
            order = np.argsort(-dist, kind="stable")
            pick = next(int(i) for i in order if int(i) not in taken)
            taken.add(pick)
            centroids[j] = points[pick]
            dist[pick] = -1.0
    return centroids


def kmeans(vectors, k: int, seed: int) -> ClusterResult:
    """Seeded k-means++ with Lloyd iterations on unit-normalized vectors.

    Stops at an assignment fixpoint, a centroid shift below 1e-4, or 100
    iterations. Final centroids are exact arithmetic means of their
    members, and the within-cluster sum of squares never increases across
    iterations.
    """
    points = np.asarray(vectors, dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("vectors must be a non-empty 2-D array")
    n = points.shape[0]
    if not (1 <= k <= n):
        raise ValueError(f"k={k} out of range [1, {n}]")
    if not np.all(np.isfinite(points)):
        raise ValueError("vectors must be finite")
    norms = np.linalg.norm(points, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("zero vector cannot be unit-normalized")
    points = points / norms[:, None]

    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_init(points, k, rng)
    assign = _nearest(points, centroids)
    history = [_ssq(points, centroids, assign)]

    converged = False
    iterations = 0
    for _ in range(KMEANS_MAX_ITER):
        new_centroids = _cluster_means(points, assign, k, centroids)
        shift = float(np.linalg.norm(new_centroids - centroids, axis=1).max())
        new_assign = _nearest(points, new_centroids)
        iterations += 1
        history.append(_ssq(points, new_centroids, new_assign))
        centroids = new_centroids
        if np.array_equal(new_assign, assign):
            converged = True
            break
        assign = new_assign
        if shift < KMEANS_SHIFT_TOL:
            converged = True
            break

    # make centroids exact means of the final assignment
    centroids = _cluster_means(points, assign, k, centroids)
    return ClusterResult(
        assignments=[int(a) for a in assign],
        centroids=centroids,
        iterations=iterations,
        converged=converged,
        ssq=_ssq(points, centroids, assign),
        ssq_history=history,
    )


def summarize_extractive(
    article: str,
    provider: Provider,
    vocab: SubwordVocab,
    target_tokens: int | None = None,
    target_ratio: float | None = None,
    seed: int = 0,
) -> ExtractiveSummary:
    """Select one sentence per cluster, nearest the centroid by cosine.

    Exactly one of ``target_tokens`` / ``target_ratio`` sets the summary
    length target (the ratio is applied to the article's subword count).
    Ties on cosine similarity keep the lower sentence index; the output
    preserves article order.
    """
    if (target_tokens is None) == (target_ratio is None):
        raise ValueError("provide exactly one of target_tokens or target_ratio")
    sentences = sentence_split(article)
    if not sentences:
        raise ValueError("article has no sentences")
    article_tokens = len(subword_tokenize(vocab, article))
    if article_tokens == 0:
        raise ValueError("article has no subword tokens")
    if target_tokens is None:
        if target_ratio <= 0:
            raise ValueError("target_ratio must be > 0")
        target_tokens = max(1, math.floor(target_ratio * article_tokens + 0.5))

    vectors = embed_sentences(provider, sentences)
    k = num_clusters(article_tokens, target_tokens, len(sentences))
    result = kmeans(vectors, k, seed)

    norms = np.linalg.norm(vectors, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("zero sentence vector: cosine selection undefined")
    unit = vectors / norms[:, None]
    selected: list[int] = []
    assignments = np.asarray(result.assignments)
    for cluster in range(k):
        members = np.flatnonzero(assignments == cluster)
        if members.size == 0:
            continue
        centroid = result.centroids[cluster]
        cnorm = float(np.linalg.norm(centroid))
        if cnorm == 0.0:
            raise ValueError(f"cluster {cluster} centroid is a zero vector")
        sims = unit[members] @ (centroid / cnorm)
        best = members[int(np.argmax(sims))]  # argmax ties keep the lower index
        selected.append(int(best))

    selected.sort()
    return ExtractiveSummary(
        selected=selected,
        text=" ".join(sentences[i] for i in selected),
        k_used=len(selected),
    )
