"""Corpus-driven vocabulary trimming and embedding-row pruning.

A multilingual subword vocabulary is cut down to the pieces a monolingual
corpus actually uses: count piece frequencies, keep the specials plus the
top-K pieces, slice the embedding matrix to the kept rows bit-exactly, and
report the size reduction.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .corpus import Record
from .embedding import EmbeddingStore
from .text import SubwordVocab, subword_tokenize


@dataclass
class FreqTable:
    counts: dict[int, int]
    total: int


@dataclass
class VocabMap:
    kept: list[int]  # old piece ids, ascending
    old_to_new: dict[int, int]
    new_vocab: SubwordVocab
    source_size: int


@dataclass(frozen=True)
class MatrixMeta:
    rows: int
    dim: int
    bytes: int


@dataclass(frozen=True)
class SizeReport:
    rows_before: int
    rows_after: int
    bytes_before: int
    bytes_after: int
    retained_fraction: float
    reduction_pct: float

    def to_dict(self) -> dict:
        return {
            "rows_before": self.rows_before,
            "rows_after": self.rows_after,
            "bytes_before": self.bytes_before,
            "bytes_after": self.bytes_after,
            "retained_fraction": self.retained_fraction,
            "reduction_pct": self.reduction_pct,
        }


def count_frequencies(corpus: Iterable[Record], vocab: SubwordVocab) -> FreqTable:
    """Piece-id frequencies over every article and summary."""
    counts: Counter = Counter()
    for rec in corpus:
        counts.update(subword_tokenize(vocab, rec.article))
        counts.update(subword_tokenize(vocab, rec.summary))
    return FreqTable(counts=dict(counts), total=sum(counts.values()))


def select_vocabulary(freqs: FreqTable, source: SubwordVocab, target_size: int = 40000) -> VocabMap:
    """Keep all special pieces plus the most frequent others, up to
    ``target_size`` pieces in total.

    Frequency ties keep the lower old id. Kept ids stay ascending, so the
    new id is the position of the old id among the kept ones.
    """
    specials = set(source.special_ids)
    if target_size < len(specials):
        raise ValueError(f"target_size {target_size} below the {len(specials)} special pieces")
    n = len(source)
    if target_size >= n:
        if target_size > n:
            warnings.warn(f"target_size {target_size} exceeds vocabulary size {n}; keeping all pieces")
        kept = list(range(n))
    else:
        budget = target_size - len(specials)
        ranked = sorted(
            (i for i in range(n) if i not in specials),
            key=lambda i: (-freqs.counts.get(i, 0), i),
        )
        kept = sorted(specials | set(ranked[:budget]))
    old_to_new = {old: new for new, old in enumerate(kept)}
    new_vocab = SubwordVocab(
        pieces=tuple(source.pieces[i] for i in kept),
        special_ids=frozenset(old_to_new[i] for i in specials),
        unk_id=old_to_new[source.unk_id],
    )
    return VocabMap(kept=kept, old_to_new=old_to_new, new_vocab=new_vocab, source_size=n)


def prune_embeddings(matrix: np.ndarray, vmap: VocabMap) -> np.ndarray:
    """Slice the embedding matrix to the kept rows, bit-exactly.

    ``matrix`` must have one row per source vocabulary piece; output row j
    is input row ``vmap.kept[j]``.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValueError("embedding matrix must be 2-D")
    if matrix.shape[0] != vmap.source_size:
        raise ValueError(
            f"matrix has {matrix.shape[0]} rows but the source vocabulary has {vmap.source_size} pieces"
        )
    return matrix[vmap.kept].copy()


def prune_store(store: EmbeddingStore, vmap: VocabMap) -> EmbeddingStore:
    """Pruned copy of a piece-id-keyed store, re-keyed by new piece id."""
    if len(store) != vmap.source_size:
        raise ValueError(
            f"store has {len(store)} rows but the source vocabulary has {vmap.source_size} pieces"
        )
    matrix = store.matrix()
    pruned = EmbeddingStore(store.dimension)
    for new_id, old_id in enumerate(vmap.kept):
        pruned.put(str(new_id), matrix[old_id])
    return pruned


def size_report(before: MatrixMeta, after: MatrixMeta) -> SizeReport:
    """Row retention and byte reduction between two embedding matrices.

    ``retained_fraction`` is row-based; ``reduction_pct`` is byte-based.
    Both are emitted because either may be the figure of interest.
    """
    if before.rows <= 0 or before.bytes <= 0:
        raise ValueError("before metadata must have positive rows and bytes")
    return SizeReport(
        rows_before=before.rows,
        rows_after=after.rows,
        bytes_before=before.bytes,
        bytes_after=after.bytes,
        retained_fraction=after.rows / before.rows,
        reduction_pct=100.0 * (1.0 - after.bytes / before.bytes),
    )


def write_remap_tsv(path: str, vmap: VocabMap) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for old_id, new_id in sorted(vmap.old_to_new.items()):
            fh.write(f"{old_id}\t{new_id}\n")


def read_remap_tsv(path: str) -> dict[int, int]:
    mapping: dict[int, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected old_id<TAB>new_id")
            mapping[int(parts[0])] = int(parts[1])
    return mapping
