"""Low-resource Urdu news summarization toolkit.

Corpus preparation, recall-guided truncation, embedding-cluster extractive
summarization, ROUGE/embedding evaluation, vocabulary pruning, and a blind
human-annotation service.
"""

from .corpus import (
    CorpusStats,
    FilterResult,
    Record,
    RecordParseError,
    clean_text,
    compression_ratio,
    corpus_stats,
    filter_corpus,
    parse_records,
    write_records,
)
from .embedding import (
    EmbeddingError,
    EmbeddingStore,
    OneHotProvider,
    Provider,
    RemoteProvider,
    StoreProvider,
    cosine_similarity,
    embed_sentences,
    load_store,
    make_provider,
)
from .extractive import ExtractiveSummary, kmeans, num_clusters, summarize_extractive
from .harness import (
    EvalRow,
    HumanScore,
    RecordScores,
    aggregate_human_eval,
    load_human_scores,
    run_extractive_eval,
    score_pairs,
)
from .metrics import ScoreTriple, embed_score, lcs_length, metric_tokens, rouge_l, rouge_n
from .service import AnnotationService, load_sample, serve_annotation, system_token
from .text import (
    SubwordVocab,
    load_vocab,
    paragraph_split,
    save_vocab,
    sentence_split,
    subword_len,
    subword_tokenize,
    word_tokenize,
)
from .truncation import TruncatedArticle, score_paragraphs, truncate_article
from .vocab_adapt import (
    MatrixMeta,
    SizeReport,
    VocabMap,
    count_frequencies,
    prune_embeddings,
    prune_store,
    select_vocabulary,
    size_report,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationService",
    "CorpusStats",
    "EmbeddingError",
    "EmbeddingStore",
    "EvalRow",
    "ExtractiveSummary",
    "FilterResult",
    "HumanScore",
    "MatrixMeta",
    "OneHotProvider",
    "Provider",
    "Record",
    "RecordParseError",
    "RecordScores",
    "RemoteProvider",
    "ScoreTriple",
    "SizeReport",
    "StoreProvider",
    "SubwordVocab",
    "TruncatedArticle",
    "VocabMap",
    "aggregate_human_eval",
    "clean_text",
    "compression_ratio",
    "corpus_stats",
    "cosine_similarity",
    "count_frequencies",
    "embed_score",
    "embed_sentences",
    "filter_corpus",
    "kmeans",
    "lcs_length",
    "load_human_scores",
    "load_sample",
    "load_store",
    "load_vocab",
    "make_provider",
    "metric_tokens",
    "num_clusters",
    "paragraph_split",
    "parse_records",
    "prune_embeddings",
    "prune_store",
    "rouge_l",
    "rouge_n",
    "run_extractive_eval",
    "save_vocab",
    "score_pairs",
    "score_paragraphs",
    "select_vocabulary",
    "sentence_split",
    "serve_annotation",
    "size_report",
    "subword_len",
    "subword_tokenize",
    "summarize_extractive",
    "system_token",
    "truncate_article",
    "word_tokenize",
    "write_records",
]
