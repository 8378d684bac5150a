import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumkit.embedding import OneHotProvider
from sumkit.metrics import (
    ScoreTriple,
    embed_score,
    f1_score,
    lcs_length,
    metric_tokens,
    ngram_counts,
    rouge_l,
    rouge_n,
)
from sumkit.text import SubwordVocab

tokens_st = st.lists(st.sampled_from("abcd"), max_size=12)


def brute_force_lcs(a, b) -> int:
    """Longest common subsequence by enumerating every subsequence of a."""
    best = 0
    for r in range(len(a), 0, -1):
        if r <= best:
            break
        for combo in itertools.combinations(a, r):
            it = iter(b)
            if all(ch in it for ch in combo):
                best = r
                break
    return best


class TestMetricTokens:
    def test_drops_punctuation_by_default(self):
        assert metric_tokens("خبر آئی۔") == ["خبر", "آئی"]

    def test_punctuation_kept_on_request(self):
        assert metric_tokens("خبر آئی۔", include_punct=True) == ["خبر", "آئی", "۔"]


class TestRougeN:
    def test_two_of_three_unigrams(self):
        got = rouge_n("a b c".split(), "a b d".split(), 1)
        assert got == ScoreTriple(2 / 3, 2 / 3, 2 / 3)

    def test_clipping_blocks_repeat_inflation(self):
        # candidate repeats "a" but the reference has only one
        got = rouge_n("a a".split(), ["a"], 1)
        assert got.precision == 0.5
        assert got.recall == 1.0

    def test_disjoint_is_zero(self):
        assert rouge_n("a b".split(), "c d".split(), 2) == ScoreTriple(0.0, 0.0, 0.0)

    def test_too_short_for_n_is_zero(self):
        assert rouge_n(["a"], ["a"], 2) == ScoreTriple(0.0, 0.0, 0.0)

    def test_empty_side_is_zero(self):
        assert rouge_n([], "a b".split(), 1) == ScoreTriple(0.0, 0.0, 0.0)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            rouge_n(["a"], ["a"], 0)

    @given(tokens_st.filter(bool), st.integers(min_value=1, max_value=3))
    def test_self_score_is_one(self, toks, n):
        if len(toks) < n:
            return
        assert rouge_n(toks, toks, n) == ScoreTriple(1.0, 1.0, 1.0)

    @given(tokens_st, tokens_st, st.integers(min_value=1, max_value=3))
    def test_swap_duality(self, c, r, n):
        assert rouge_n(c, r, n).precision == rouge_n(r, c, n).recall

    @given(tokens_st.filter(bool), st.sampled_from("abcd"))
    def test_recall_monotone_in_candidate_growth(self, ref, extra):
        # giving the candidate one more reference token cannot lower recall
        cand = ref[: len(ref) // 2]
        assert rouge_n(cand + [extra], ref, 1).recall >= rouge_n(cand, ref, 1).recall


class TestRougeL:
    def test_interleaved(self):
        got = rouge_l("a b c d".split(), "a c b d".split())
        assert got == ScoreTriple(0.75, 0.75, 0.75)

    def test_empty_side_is_zero(self):
        assert rouge_l([], ["a"]) == ScoreTriple(0.0, 0.0, 0.0)

    def test_lcs_against_brute_force(self):
        rng = random.Random(99)
        for _ in range(150):
            a = [rng.choice("abcd") for _ in range(rng.randint(0, 10))]
            b = [rng.choice("abcd") for _ in range(rng.randint(0, 10))]
            assert lcs_length(a, b) == brute_force_lcs(a, b)

    @given(tokens_st, tokens_st)
    def test_lcs_bounded_and_symmetric(self, a, b):
        n = lcs_length(a, b)
        assert 0 <= n <= min(len(a), len(b))
        assert n == lcs_length(b, a)


class TestF1:
    def test_zero_when_both_zero(self):
        assert f1_score(0.0, 0.0) == 0.0

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_harmonic_mean_bounds(self, p, r):
        f = f1_score(p, r)
        assert 0.0 <= f <= max(p, r) + 1e-12


@pytest.fixture(scope="module")
def onehot():
    vocab = SubwordVocab.from_pieces(
        ["<unk>", "a", "b", "c", "d"], special_ids={0}, unk_id=0
    )
    return OneHotProvider(vocab)


class TestEmbedScore:
    def test_identical_tokens_score_one(self, onehot):
        got = embed_score(["a", "b"], ["a", "b"], onehot)
        assert got == ScoreTriple(1.0, 1.0, 1.0)

    def test_half_overlap(self, onehot):
        got = embed_score(["a", "b"], ["a", "c"], onehot)
        assert got == ScoreTriple(0.5, 0.5, 0.5)

    def test_disjoint_is_zero(self, onehot):
        assert embed_score(["a"], ["b"], onehot) == ScoreTriple(0.0, 0.0, 0.0)

    def test_empty_side_errors(self, onehot):
        with pytest.raises(ValueError):
            embed_score([], ["a"], onehot)

    @given(
        cand=st.lists(st.sampled_from("abcd"), min_size=1, max_size=10),
        ref=st.lists(st.sampled_from("abcd"), min_size=1, max_size=10),
    )
    @settings(max_examples=150)
    def test_onehot_equals_type_membership(self, onehot, cand, ref):
        """With orthogonal unit vectors the greedy match degenerates to
        exact type membership."""
        got = embed_score(cand, ref, onehot)
        ref_types, cand_types = set(ref), set(cand)
        assert got.precision == sum(t in ref_types for t in cand) / len(cand)
        assert got.recall == sum(t in cand_types for t in ref) / len(ref)

    def test_within_unit_interval(self, onehot):
        got = embed_score(["a", "b", "c"], ["b", "d"], onehot)
        for v in (got.precision, got.recall, got.f1):
            assert 0.0 <= v <= 1.0


def test_ngram_counts_multiset():
    counts = ngram_counts("a b a b".split(), 2)
    assert counts[("a", "b")] == 2
    assert counts[("b", "a")] == 1
