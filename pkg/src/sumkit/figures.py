"""Figure rendering for CLI reports.

Kept out of the core modules on purpose: everything here consumes plain
dicts/dataclasses the library already emits, so the library never imports
matplotlib.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .corpus import Record, compression_ratio
from .harness import RecordScores
from .text import word_tokenize


def render_corpus_figure(records: list[Record], path: str) -> str:
    """Histograms of article/summary lengths and compression ratios."""
    article_lens = [len(word_tokenize(r.article)) for r in records]
    summary_lens = [len(word_tokenize(r.summary)) for r in records]
    ratios = [compression_ratio(r) for r in records]

    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    axes[0].hist(article_lens, bins=min(30, max(5, len(records))), color="#4878d0")
    axes[0].set_title("Article length (words)")
    axes[1].hist(summary_lens, bins=min(30, max(5, len(records))), color="#ee854a")
    axes[1].set_title("Summary length (words)")
    axes[2].hist(ratios, bins=min(30, max(5, len(records))), color="#6acc64")
    axes[2].set_title("Compression ratio (%)")
    for ax in axes:
        ax.set_ylabel("records")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_eval_figure(rows: list[RecordScores], path: str) -> str:
    """Per-record F1 distributions for each metric family."""
    series = {
        "ROUGE-1": [r.r1.f1 for r in rows],
        "ROUGE-2": [r.r2.f1 for r in rows],
        "ROUGE-L": [r.rl.f1 for r in rows],
        "Embed": [r.embed.f1 for r in rows],
    }
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.boxplot(series.values(), tick_labels=list(series.keys()))
    ax.set_ylabel("F1")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"Per-record scores (n={len(rows)})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_human_figure(report: dict, path: str) -> str:
    """Per-system human means, plus human-vs-automatic scatter when joined."""
    per_system = report.get("per_system", [])
    per_summary = report.get("per_summary", [])
    joined = [row for row in per_summary if "r1_f1" in row]

    ncols = 2 if joined else 1
    fig, axes = plt.subplots(1, ncols, figsize=(6.5 * ncols, 4.5))
    if ncols == 1:
        axes = [axes]

    systems = [row["system"] for row in per_system]
    xs = range(len(systems))
    width = 0.38
    axes[0].bar(
        [x - width / 2 for x in xs],
        [row["mean_accuracy"] for row in per_system],
        width,
        label="Accuracy/Relevance",
        color="#4878d0",
    )
    axes[0].bar(
        [x + width / 2 for x in xs],
        [row["mean_coherence"] for row in per_system],
        width,
        label="Coherence",
        color="#ee854a",
    )
    axes[0].set_xticks(list(xs))
    axes[0].set_xticklabels(systems, rotation=20, ha="right")
    axes[0].set_ylim(0, 5)
    axes[0].set_ylabel("mean score (0-5)")
    axes[0].set_title("Human evaluation by system")
    axes[0].legend()

    if joined:
        axes[1].scatter(
            [row["r1_f1"] for row in joined],
            [row["mean_accuracy"] for row in joined],
            label="ROUGE-1 F1",
            color="#4878d0",
        )
        axes[1].scatter(
            [row["embed_f1"] for row in joined],
            [row["mean_accuracy"] for row in joined],
            label="Embed F1",
            marker="x",
            color="#6acc64",
        )
        axes[1].set_xlabel("automatic F1")
        axes[1].set_ylabel("mean human accuracy")
        axes[1].set_xlim(-0.02, 1.02)
        axes[1].set_ylim(0, 5)
        axes[1].set_title("Human vs automatic")
        axes[1].legend()

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
