"""Command-line interface.

Report-producing commands (stats, score, evaluate, human-report) render a
figure next to their delimited output by default; --no-figures opts out.
Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import functools
import json
import sys
import time
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import figures, harness, service, vocab_adapt
from .embedding import EmbeddingError, EmbeddingStore, make_provider
from .text import load_vocab, save_vocab
from .truncation import truncate_article


def _handled(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, EmbeddingError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _read_corpus(path: str) -> list[corpus_mod.Record]:
    with open(path, encoding="utf-8") as fh:
        return corpus_mod.parse_records(fh)


def _provider_from(spec: str, vocab_path: str | None, cache: str | None):
    vocab = load_vocab(vocab_path) if vocab_path else None
    return make_provider(spec, vocab=vocab, cache_path=cache), vocab


def _figure_path(output: str | None, default_stem: str) -> str:
    if output:
        return str(Path(output).with_suffix(".png"))
    return f"{default_stem}.png"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(package_name="sumkit")
def main() -> None:
    """Urdu news summarization toolkit: corpus prep, extractive
    summarization, evaluation, and human-annotation serving."""


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.argument("output_path", metavar="OUTPUT")
@click.option("--max-ratio", default=50.0, show_default=True, help="Drop records whose summary/article percent exceeds this.")
@click.option("--clean/--no-clean", default=True, show_default=True, help="Strip URLs, caption lines and stray whitespace first.")
@click.option("--filter/--no-filter", "do_filter", default=True, show_default=True, help="Apply the compression-ratio filter.")
@click.option("--removed", "removed_path", default=None, help="Also write the filtered-out records here.")
@_handled
def ingest(input_path: str, output_path: str, max_ratio: float, clean: bool, do_filter: bool, removed_path: str | None) -> None:
    """Parse, clean and ratio-filter a JSONL corpus."""
    records = _read_corpus(input_path)
    if clean:
        records = [
            corpus_mod.Record(
                id=r.id,
                article=corpus_mod.clean_text(r.article),
                summary=corpus_mod.clean_text(r.summary),
                source=r.source,
                url=r.url,
                title=r.title,
            )
            for r in records
        ]
    if do_filter:
        result = corpus_mod.filter_corpus(records, max_ratio_pct=max_ratio)
        kept, removed = result.kept, result.removed
    else:
        kept, removed = records, []
    with open(output_path, "w", encoding="utf-8") as fh:
        corpus_mod.write_records(kept, fh)
    if removed_path:
        with open(removed_path, "w", encoding="utf-8") as fh:
            corpus_mod.write_records(removed, fh)
    click.echo(f"kept {len(kept)}, removed {len(removed)} (threshold {max_ratio}%)")


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--output", default=None, help="Write the TSV here instead of stdout.")
@click.option("--json", "json_path", default=None, help="Also write the statistics as JSON.")
@click.option("--figures/--no-figures", "figures_on", default=True, show_default=True)
@_handled
def stats(input_path: str, output: str | None, json_path: str | None, figures_on: bool) -> None:
    """Token-count statistics of a corpus, as TSV plus histograms."""
    records = _read_corpus(input_path)
    st = corpus_mod.corpus_stats(records)
    lines = [f"count\t{st.count}", "metric\tmin\tmax\tmean\tmedian"]
    for name, summary in (
        ("article_tokens", st.article_tokens),
        ("summary_tokens", st.summary_tokens),
        ("compression_ratio_pct", st.compression_ratio_pct),
    ):
        lines.append(f"{name}\t{summary.min:g}\t{summary.max:g}\t{summary.mean:g}\t{summary.median:g}")
    _emit("\n".join(lines) + "\n", output)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(st.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")
    if figures_on:
        fig = figures.render_corpus_figure(records, _figure_path(output, "corpus_stats"))
        click.echo(f"figure: {fig}", err=True)


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.argument("output_path", metavar="OUTPUT")
@click.option("--vocab", "vocab_path", required=True, help="Subword vocabulary file.")
@click.option("--budget", default=512, show_default=True)
@click.option("--unit", type=click.Choice(["subword", "word"]), default="subword", show_default=True)
@click.option("--audit", "audit_path", default=None, help="Removal log path (default: OUTPUT.audit.jsonl).")
@_handled
def truncate(input_path: str, output_path: str, vocab_path: str, budget: int, unit: str, audit_path: str | None) -> None:
    """Fit each article into the token budget by dropping low-recall paragraphs."""
    vocab = load_vocab(vocab_path)
    records = _read_corpus(input_path)
    audit_path = audit_path or f"{output_path}.audit.jsonl"
    hard_cuts = 0
    with open(output_path, "w", encoding="utf-8") as out, open(audit_path, "w", encoding="utf-8") as audit:
        for rec in records:
            before = len(corpus_mod.word_tokenize(rec.article))
            result = truncate_article(rec.article, rec.summary, budget=budget, vocab=vocab, unit=unit)
            hard_cuts += result.hard_cut
            out.write(
                json.dumps(
                    corpus_mod.Record(
                        id=rec.id,
                        article=result.text,
                        summary=rec.summary,
                        source=rec.source,
                        url=rec.url,
                        title=rec.title,
                    ).to_dict(),
                    ensure_ascii=False,
                )
                + "\n"
            )
            audit.write(
                json.dumps(
                    {
                        "id": rec.id,
                        "removed": result.removed,
                        "hard_cut": result.hard_cut,
                        "before_words": before,
                        "after_tokens": result.total_tokens,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    click.echo(f"truncated {len(records)} records ({hard_cuts} hard cuts); audit: {audit_path}")


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.argument("output_path", metavar="OUTPUT")
@click.option("--provider", "provider_spec", default="onehot", show_default=True, help="onehot | store:PATH | remote:URL")
@click.option("--vocab", "vocab_path", required=True)
@click.option("--target-tokens", type=int, default=None)
@click.option("--target-ratio", type=float, default=None)
@click.option("--seed", default=0, show_default=True)
@click.option("--cache", default=None, help="Embedding cache file for remote providers.")
@_handled
def summarize(
    input_path: str,
    output_path: str,
    provider_spec: str,
    vocab_path: str,
    target_tokens: int | None,
    target_ratio: float | None,
    seed: int,
    cache: str | None,
) -> None:
    """Extractive summaries for every record, as {id, generated, reference} JSONL."""
    from .extractive import summarize_extractive

    if target_tokens is not None and target_ratio is not None:
        raise ValueError("provide at most one of --target-tokens / --target-ratio")
    if target_tokens is None and target_ratio is None:
        target_ratio = 0.2
    provider, vocab = _provider_from(provider_spec, vocab_path, cache)
    records = _read_corpus(input_path)
    with open(output_path, "w", encoding="utf-8") as fh:
        for rec in records:
            result = summarize_extractive(
                rec.article, provider, vocab, target_tokens=target_tokens, target_ratio=target_ratio, seed=seed
            )
            fh.write(
                json.dumps(
                    {"id": rec.id, "generated": result.text, "reference": rec.summary, "k": result.k_used},
                    ensure_ascii=False,
                )
                + "\n"
            )
    click.echo(f"summarized {len(records)} records -> {output_path}")


def _write_row_and_records(
    row: harness.EvalRow,
    rows: list[harness.RecordScores],
    output: str | None,
    per_record: str | None,
    figures_on: bool,
    default_stem: str,
) -> None:
    _emit(row.to_json(), output)
    if per_record is None and output:
        per_record = str(Path(output).with_suffix(".records.jsonl"))
    if per_record:
        with open(per_record, "w", encoding="utf-8") as fh:
            harness.write_per_record(rows, fh)
        click.echo(f"per-record scores: {per_record}", err=True)
    if figures_on:
        fig = figures.render_eval_figure(rows, _figure_path(output, default_stem))
        click.echo(f"figure: {fig}", err=True)


@main.command()
@click.argument("pairs_path", metavar="PAIRS")
@click.option("--provider", "provider_spec", default="onehot", show_default=True)
@click.option("--vocab", "vocab_path", default=None, help="Needed by the onehot provider.")
@click.option("--system", default="external", show_default=True)
@click.option("--dataset", default="dataset", show_default=True)
@click.option("-o", "--output", default=None, help="Write the aggregate row here instead of stdout.")
@click.option("--per-record", default=None, help="Per-pair score JSONL (default: OUTPUT.records.jsonl).")
@click.option("--cache", default=None)
@click.option("--figures/--no-figures", "figures_on", default=True, show_default=True)
@_handled
def score(
    pairs_path: str,
    provider_spec: str,
    vocab_path: str | None,
    system: str,
    dataset: str,
    output: str | None,
    per_record: str | None,
    cache: str | None,
    figures_on: bool,
) -> None:
    """Score externally generated summaries against their references."""
    provider, _ = _provider_from(provider_spec, vocab_path, cache)
    pairs: list[dict] = []
    with open(pairs_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                pairs.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{pairs_path}:{lineno}: invalid JSON: {exc}") from None
    row, rows = harness.score_pairs(pairs, provider, system=system, dataset=dataset)
    _write_row_and_records(row, rows, output, per_record, figures_on, "score")


@main.command()
@click.argument("input_path", metavar="INPUT")
@click.option("--provider", "provider_spec", default="onehot", show_default=True)
@click.option("--vocab", "vocab_path", required=True)
@click.option("--target-tokens", type=int, default=None)
@click.option("--target-ratio", type=float, default=None)
@click.option("--seed", default=0, show_default=True)
@click.option("--system", default=None, help="Row label (default: extractive-<provider>).")
@click.option("--dataset", default="dataset", show_default=True)
@click.option("-o", "--output", default=None)
@click.option("--per-record", default=None)
@click.option("--cache", default=None)
@click.option("--figures/--no-figures", "figures_on", default=True, show_default=True)
@_handled
def evaluate(
    input_path: str,
    provider_spec: str,
    vocab_path: str,
    target_tokens: int | None,
    target_ratio: float | None,
    seed: int,
    system: str | None,
    dataset: str,
    output: str | None,
    per_record: str | None,
    cache: str | None,
    figures_on: bool,
) -> None:
    """Run the extractive summarizer over a corpus and score it."""
    provider, vocab = _provider_from(provider_spec, vocab_path, cache)
    records = _read_corpus(input_path)
    started = time.perf_counter()
    row, rows = harness.run_extractive_eval(
        records,
        provider,
        vocab,
        seed=seed,
        target_tokens=target_tokens,
        target_ratio=target_ratio,
        system=system,
        dataset=dataset,
    )
    elapsed = time.perf_counter() - started
    _write_row_and_records(row, rows, output, per_record, figures_on, "evaluate")
    click.echo(f"scored {row.n} records in {elapsed:.2f}s", err=True)


@main.command("trim-vocab")
@click.argument("corpus_path", metavar="CORPUS")
@click.option("--vocab", "vocab_path", required=True, help="Source subword vocabulary.")
@click.option("--target", default=40000, show_default=True, help="Kept vocabulary size (specials included).")
@click.option("--out-vocab", required=True)
@click.option("--remap", "remap_path", default=None, help="old->new id TSV (default: OUT_VOCAB.remap.tsv).")
@click.option("--store", "store_path", default=None, help="Embedding store keyed by piece id to prune.")
@click.option("--out-store", default=None)
@click.option("--report", "report_path", default=None, help="Size report JSON (default: stdout).")
@_handled
def trim_vocab(
    corpus_path: str,
    vocab_path: str,
    target: int,
    out_vocab: str,
    remap_path: str | None,
    store_path: str | None,
    out_store: str | None,
    report_path: str | None,
) -> None:
    """Shrink a vocabulary to its most frequent pieces and prune embeddings."""
    source = load_vocab(vocab_path)
    records = _read_corpus(corpus_path)
    freqs = vocab_adapt.count_frequencies(records, source)
    vmap = vocab_adapt.select_vocabulary(freqs, source, target_size=target)
    save_vocab(out_vocab, vmap.new_vocab)
    remap_path = remap_path or f"{out_vocab}.remap.tsv"
    vocab_adapt.write_remap_tsv(remap_path, vmap)
    click.echo(f"vocabulary {vmap.source_size} -> {len(vmap.kept)} pieces; remap: {remap_path}")

    if store_path:
        if not out_store:
            raise ValueError("--out-store is required when --store is given")
        store = EmbeddingStore.load(store_path)
        pruned = vocab_adapt.prune_store(store, vmap)
        pruned.save(out_store)
        report = vocab_adapt.size_report(
            vocab_adapt.MatrixMeta(rows=len(store), dim=store.dimension, bytes=Path(store_path).stat().st_size),
            vocab_adapt.MatrixMeta(rows=len(pruned), dim=pruned.dimension, bytes=Path(out_store).stat().st_size),
        )
        text = json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n"
        if report_path:
            with open(report_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)


@main.command("annotate-serve")
@click.option("--sample", "sample_path", required=True, help="JSONL of {summary_id, reference, candidates} tasks.")
@click.option("--port", default=8765, show_default=True)
@click.option("--seed", default=0, show_default=True, help="Session seed for blinding tokens and per-annotator order.")
@click.option("--scores", "scores_path", default="human_scores.jsonl", show_default=True)
@click.option("--static-dir", default=None, help="Built UI assets to serve at /.")
@click.option("--host", default="127.0.0.1", show_default=True)
@_handled
def annotate_serve(sample_path: str, port: int, seed: int, scores_path: str, static_dir: str | None, host: str) -> None:
    """Serve the blind-annotation API (and UI, when built assets are given)."""
    sample = service.load_sample(sample_path)
    svc = service.serve_annotation(
        sample, scores_path=scores_path, port=port, seed=seed, static_dir=static_dir, host=host
    )
    click.echo(f"serving {len(sample)} summaries on {svc.url} (scores -> {scores_path}); Ctrl-C stops")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        svc.stop()
        click.echo("stopped")


@main.command("human-report")
@click.argument("scores_path", metavar="SCORES")
@click.option("--auto", "auto_specs", multiple=True, metavar="SYSTEM=PATH", help="Join per-record scores for SYSTEM from PATH.")
@click.option("-o", "--output", default=None)
@click.option("--figures/--no-figures", "figures_on", default=True, show_default=True)
@_handled
def human_report(scores_path: str, auto_specs: tuple[str, ...], output: str | None, figures_on: bool) -> None:
    """Aggregate annotator ratings, optionally joined with automatic scores."""
    scores = harness.load_human_scores(scores_path)
    auto_rows: dict[tuple[str, str], harness.RecordScores] | None = None
    if auto_specs:
        auto_rows = {}
        for spec in auto_specs:
            system, sep, path = spec.partition("=")
            if not sep or not system or not path:
                raise ValueError(f"--auto expects SYSTEM=PATH, got {spec!r}")
            for rec in harness.read_per_record(path):
                auto_rows[(rec.id, system)] = rec
    report = harness.aggregate_human_eval(scores, auto_rows)
    _emit(json.dumps(report, ensure_ascii=False, indent=2) + "\n", output)
    if figures_on and report["per_system"]:
        fig = figures.render_human_figure(report, _figure_path(output, "human_report"))
        click.echo(f"figure: {fig}", err=True)


if __name__ == "__main__":
    main()
