"""Recall-guided article truncation to a fixed token budget.

Paragraphs are scored once by ROUGE-1 recall against the reference
summary; the lowest-scoring paragraph is deleted repeatedly until the
article fits the budget, then survivors are restored to original order.
This is a training-data preparation step: it needs the reference summary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .metrics import metric_tokens, rouge_n
from .text import SubwordVocab, paragraph_split, subword_prefix, subword_tokenize, word_tokenize


@dataclass
class ParagraphInfo:
    index: int  # original 0-based position
    text: str
    score: float
    token_len: int


@dataclass
class TruncatedArticle:
    paragraphs: list[ParagraphInfo]  # retained, in original order
    total_tokens: int
    removed: list[int]  # original positions, in removal order
    hard_cut: bool

    @property
    def text(self) -> str:
        return "\n\n".join(p.text for p in self.paragraphs)


def score_paragraphs(paragraphs: list[str], summary: str) -> list[float]:
    """ROUGE-1 recall of each paragraph against the summary."""
    if not paragraphs:
        raise ValueError("no paragraphs to score")
    ref = metric_tokens(summary)
    if not ref:
        raise ValueError("summary is empty: recall scores would be undefined")
    return [rouge_n(metric_tokens(p), ref, 1).recall for p in paragraphs]


def truncate_article(
    article: str,
    summary: str,
    budget: int = 512,
    vocab: SubwordVocab | None = None,
    unit: str = "subword",
) -> TruncatedArticle:
    """Fit an article into ``budget`` tokens by dropping low-recall paragraphs.

    Scores are computed once, before the loop. Ties on the minimum score
    remove the paragraph with the larger original index, preserving lead
    content. If a single surviving paragraph still exceeds the budget its
    token tail is cut to exactly ``budget`` and ``hard_cut`` is set.

    ``unit`` is "subword" (requires ``vocab``) or "word".
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if unit == "subword":
        if vocab is None:
            raise ValueError("subword budgeting requires a vocabulary")

        def token_len(text: str) -> int:
            return len(subword_tokenize(vocab, text))

        def prefix(text: str, n: int) -> str:
            return subword_prefix(vocab, text, n)

    elif unit == "word":

        def token_len(text: str) -> int:
            return len(word_tokenize(text))

        def prefix(text: str, n: int) -> str:
            return " ".join(word_tokenize(text)[:n])

    else:
        raise ValueError(f"unknown budget unit {unit!r}")

    texts = paragraph_split(article)
    if not texts:
        raise ValueError("article has no paragraphs")
    scores = score_paragraphs(texts, summary)
    paragraphs = [
        ParagraphInfo(index=i, text=t, score=s, token_len=token_len(t))
        for i, (t, s) in enumerate(zip(texts, scores))
    ]
    total = sum(p.token_len for p in paragraphs)
    if total <= budget:
        return TruncatedArticle(paragraphs=paragraphs, total_tokens=total, removed=[], hard_cut=False)

    remaining = list(paragraphs)
    removed: list[int] = []
    while total > budget and len(remaining) > 1:
        # min score; ties drop the later paragraph
        victim = min(range(len(remaining)), key=lambda i: (remaining[i].score, -remaining[i].index))
        total -= remaining[victim].token_len
        removed.append(remaining[victim].index)
        del remaining[victim]

    hard_cut = False
    if total > budget:
        survivor = remaining[0]
        remaining[0] = ParagraphInfo(
            index=survivor.index,
            text=prefix(survivor.text, budget),
            score=survivor.score,
            token_len=budget,
        )
        total = budget
        hard_cut = True

    remaining.sort(key=lambda p: p.index)
    return TruncatedArticle(paragraphs=remaining, total_tokens=total, removed=removed, hard_cut=hard_cut)
