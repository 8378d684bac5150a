"""Experiment runner: batch summarization scoring and human-eval aggregation.

Every generated summary (extractive here, or externally produced text) is
scored against its reference with ROUGE-1/2/L and the embedding score,
then macro-averaged into one row per system/dataset. Per-record scores are
kept so automatic metrics can be compared against human ratings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .corpus import Record
from .embedding import Provider
from .extractive import summarize_extractive
from .metrics import ScoreTriple, embed_score, metric_tokens, rouge_l, rouge_n
from .text import SubwordVocab


@dataclass(frozen=True)
class RecordScores:
    id: str
    r1: ScoreTriple
    r2: ScoreTriple
    rl: ScoreTriple
    embed: ScoreTriple

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "r1": self.r1.to_dict(),
            "r2": self.r2.to_dict(),
            "rl": self.rl.to_dict(),
            "embed": self.embed.to_dict(),
        }


@dataclass(frozen=True)
class EvalRow:
    system: str
    dataset: str
    r1: ScoreTriple
    r2: ScoreTriple
    rl: ScoreTriple
    embed: ScoreTriple
    n: int

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "dataset": self.dataset,
            "r1": self.r1.to_dict(),
            "r2": self.r2.to_dict(),
            "rl": self.rl.to_dict(),
            "embed": self.embed.to_dict(),
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _score_one(rec_id: str, generated: str, reference: str, provider: Provider) -> RecordScores:
    cand = metric_tokens(generated)
    ref = metric_tokens(reference)
    return RecordScores(
        id=rec_id,
        r1=rouge_n(cand, ref, 1),
        r2=rouge_n(cand, ref, 2),
        rl=rouge_l(cand, ref),
        embed=embed_score(cand, ref, provider),
    )


def _mean_triple(triples: list[ScoreTriple]) -> ScoreTriple:
    n = len(triples)
    return ScoreTriple(
        precision=sum(t.precision for t in triples) / n,
        recall=sum(t.recall for t in triples) / n,
        f1=sum(t.f1 for t in triples) / n,
    )


def _aggregate(rows: list[RecordScores], system: str, dataset: str) -> EvalRow:
    return EvalRow(
        system=system,
        dataset=dataset,
        r1=_mean_triple([r.r1 for r in rows]),
        r2=_mean_triple([r.r2 for r in rows]),
        rl=_mean_triple([r.rl for r in rows]),
        embed=_mean_triple([r.embed for r in rows]),
        n=len(rows),
    )


def run_extractive_eval(
    records: list[Record],
    provider: Provider,
    vocab: SubwordVocab,
    seed: int,
    target_tokens: int | None = None,
    target_ratio: float | None = None,
    system: str | None = None,
    dataset: str = "dataset",
) -> tuple[EvalRow, list[RecordScores]]:
    """Summarize every record extractively and score against its reference.

    Returns the macro-averaged row and the per-record scores it averages.
    Deterministic for a fixed (records, provider, seed).
    """
    if not records:
        raise ValueError("empty dataset")
    if target_tokens is not None and target_ratio is not None:
        raise ValueError("provide at most one of target_tokens or target_ratio")
    if target_tokens is None and target_ratio is None:
        target_ratio = 0.2
    system = system or f"extractive-{provider.name}"
    rows: list[RecordScores] = []
    for rec in records:
        try:
            summary = summarize_extractive(
                rec.article,
                provider,
                vocab,
                target_tokens=target_tokens,
                target_ratio=target_ratio,
                seed=seed,
            )
            rows.append(_score_one(rec.id, summary.text, rec.summary, provider))
        except (ValueError, RuntimeError) as exc:
            raise RuntimeError(f"record {rec.id!r}: {exc}") from exc
    return _aggregate(rows, system, dataset), rows


def score_pairs(
    pairs: list[dict],
    provider: Provider,
    system: str = "external",
    dataset: str = "dataset",
) -> tuple[EvalRow, list[RecordScores]]:
    """Score supplied {reference, generated} texts with the same battery."""
    if not pairs:
        raise ValueError("no pairs to score")
    rows: list[RecordScores] = []
    for i, pair in enumerate(pairs):
        reference = pair.get("reference", "")
        generated = pair.get("generated", "")
        if not reference.strip() or not generated.strip():
            raise ValueError(f"pair {i}: empty reference or generated text")
        rec_id = str(pair.get("id", i))
        try:
            rows.append(_score_one(rec_id, generated, reference, provider))
        except (ValueError, RuntimeError) as exc:
            raise ValueError(f"pair {i}: {exc}") from exc
    return _aggregate(rows, system, dataset), rows


SCORE_MIN, SCORE_MAX = 0, 5


@dataclass(frozen=True)
class HumanScore:
    """One annotator's 0-5 accuracy/coherence rating of one summary."""

    annotator: str
    summary_id: str
    system: str
    accuracy: int
    coherence: int
    timestamp: str = ""

    def validate(self) -> None:
        if not self.annotator:
            raise ValueError("annotator must be non-empty")
        if not self.summary_id:
            raise ValueError("summary_id must be non-empty")
        if not self.system:
            raise ValueError("system must be non-empty")
        for label, value in (("accuracy", self.accuracy), ("coherence", self.coherence)):
            if not isinstance(value, int) or isinstance(value, bool) or not (SCORE_MIN <= value <= SCORE_MAX):
                raise ValueError(f"{label} must be an integer in [{SCORE_MIN}, {SCORE_MAX}], got {value!r}")

    def key(self) -> tuple[str, str, str]:
        return (self.annotator, self.summary_id, self.system)

    def to_dict(self) -> dict:
        return {
            "annotator": self.annotator,
            "summary_id": self.summary_id,
            "system": self.system,
            "accuracy": self.accuracy,
            "coherence": self.coherence,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "HumanScore":
        score = cls(
            annotator=str(obj.get("annotator", "")),
            summary_id=str(obj.get("summary_id", "")),
            system=str(obj.get("system", "")),
            accuracy=obj.get("accuracy"),
            coherence=obj.get("coherence"),
            timestamp=str(obj.get("timestamp", "")),
        )
        score.validate()
        return score


def load_human_scores(path: str) -> list[HumanScore]:
    scores: list[HumanScore] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                scores.append(HumanScore.from_dict(json.loads(line)))
            except (json.JSONDecodeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return scores


def aggregate_human_eval(
    scores: list[HumanScore],
    auto_rows: "dict[tuple[str, str], RecordScores] | None" = None,
) -> dict:
    """Mean accuracy/coherence per (summary, system) and per system.

    ``auto_rows`` maps (summary_id, system) to automatic scores; matching
    entries are joined into the comparison rows so metric families can be
    plotted side by side. Raises on out-of-range values and duplicate
    (annotator, summary_id, system) keys.
    """
    seen: dict[tuple[str, str, str], int] = {}
    for i, score in enumerate(scores):
        score.validate()
        if score.key() in seen:
            raise ValueError(
                f"duplicate human score for {score.key()!r} (entries {seen[score.key()]} and {i})"
            )
        seen[score.key()] = i

    by_summary: dict[tuple[str, str], list[HumanScore]] = {}
    for score in scores:
        by_summary.setdefault((score.summary_id, score.system), []).append(score)

    per_summary = []
    for (summary_id, system), group in sorted(by_summary.items()):
        row = {
            "summary_id": summary_id,
            "system": system,
            "mean_accuracy": sum(s.accuracy for s in group) / len(group),
            "mean_coherence": sum(s.coherence for s in group) / len(group),
            "annotators": len(group),
        }
        if auto_rows is not None:
            auto = auto_rows.get((summary_id, system))
            if auto is not None:
                row["r1_f1"] = auto.r1.f1
                row["rl_f1"] = auto.rl.f1
                row["embed_f1"] = auto.embed.f1
        per_summary.append(row)

    by_system: dict[str, list[HumanScore]] = {}
    for score in scores:
        by_system.setdefault(score.system, []).append(score)
    per_system = [
        {
            "system": system,
            "mean_accuracy": sum(s.accuracy for s in group) / len(group),
            "mean_coherence": sum(s.coherence for s in group) / len(group),
            "n": len(group),
        }
        for system, group in sorted(by_system.items())
    ]

    return {"per_summary": per_summary, "per_system": per_system, "n_scores": len(scores)}


def write_per_record(rows: Iterable[RecordScores], fh) -> None:
    for row in rows:
        fh.write(json.dumps(row.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def read_per_record(path: str) -> list[RecordScores]:
    rows: list[RecordScores] = []

    def triple(obj: dict) -> ScoreTriple:
        return ScoreTriple(obj["precision"], obj["recall"], obj["f1"])

    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            rows.append(
                RecordScores(
                    id=str(obj["id"]),
                    r1=triple(obj["r1"]),
                    r2=triple(obj["r2"]),
                    rl=triple(obj["rl"]),
                    embed=triple(obj["embed"]),
                )
            )
    return rows
