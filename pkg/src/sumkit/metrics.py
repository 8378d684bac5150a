"""Overlap and embedding-similarity metrics for summary evaluation.

All metrics return a precision/recall/F triple. ROUGE-N uses clipped
(multiset) n-gram counting so repeated tokens cannot inflate scores;
ROUGE-L uses longest-common-subsequence with a plain harmonic-mean F.
The embedding score greedily matches each token to its most similar
counterpart by cosine similarity, with no idf weighting.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedding import Provider
from .text import is_punct_token, word_tokenize


@dataclass(frozen=True)
class ScoreTriple:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def metric_tokens(text: str, include_punct: bool = False) -> list[str]:
    """Word tokens for scoring; punctuation tokens excluded by default.

    No casing or stemming is applied: the target script has neither.
    """
    tokens = word_tokenize(text)
    if include_punct:
        return tokens
    return [t for t in tokens if not is_punct_token(t)]


def ngram_counts(tokens: Sequence, n: int) -> Counter:
    if len(tokens) < n:
        return Counter()
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence, reference: Sequence, n: int = 1) -> ScoreTriple:
    """Clipped n-gram overlap. Either side empty (or shorter than n) scores
    zero on that side's denominator, giving a (0, 0, 0) triple when there is
    nothing to match.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cand_counts = ngram_counts(candidate, n)
    ref_counts = ngram_counts(reference, n)
    overlap = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
    cand_total = sum(cand_counts.values())
    ref_total = sum(ref_counts.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return ScoreTriple(precision, recall, f1_score(precision, recall))


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Longest common subsequence length, O(len(a) * len(b)) time,
    O(len(b)) space.
    """
    if not a or not b:
        return 0
    prev_row = [0] * (len(b) + 1)
    for x in a:
        row = [0]
        for j, y in enumerate(b, 1):
            if x == y:
                row.append(prev_row[j - 1] + 1)
            else:
                row.append(max(prev_row[j], row[j - 1]))
        prev_row = row
    return prev_row[len(b)]


def rouge_l(candidate: Sequence, reference: Sequence) -> ScoreTriple:
    """LCS-based triple with the harmonic-mean F convention."""
    if not candidate or not reference:
        return ScoreTriple(0.0, 0.0, 0.0)
    lcs = lcs_length(candidate, reference)
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    return ScoreTriple(precision, recall, f1_score(precision, recall))


def embed_score(candidate: Sequence[str], reference: Sequence[str], provider: Provider) -> ScoreTriple:
    """Greedy maximal cosine matching between token embeddings.

    Precision is the mean, over candidate tokens, of the best cosine
    similarity to any reference token; recall is symmetric. Similarities
    are floored at zero so the triple stays in [0, 1] for any provider.
    Empty sides are an error: they have no vectors, which is different
    from a legitimate zero score.
    """
    if not candidate or not reference:
        raise ValueError("embed_score requires non-empty candidate and reference token lists")
    if provider.mode not in ("token", "both"):
        raise ValueError(f"provider {provider.name!r} does not embed tokens")
    cand = np.asarray(provider.embed_tokens(list(candidate)), dtype=float)
    ref = np.asarray(provider.embed_tokens(list(reference)), dtype=float)
    cand_norms = np.linalg.norm(cand, axis=1)
    ref_norms = np.linalg.norm(ref, axis=1)
    if np.any(cand_norms == 0.0) or np.any(ref_norms == 0.0):
        raise ValueError("zero token vector: cosine similarity undefined")
    sims = (cand / cand_norms[:, None]) @ (ref / ref_norms[:, None]).T
    sims = np.maximum(sims, 0.0)
    precision = float(sims.max(axis=1).mean())
    recall = float(sims.max(axis=0).mean())
    return ScoreTriple(precision, recall, f1_score(precision, recall))
