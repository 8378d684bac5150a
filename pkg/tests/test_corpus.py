import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sumkit.corpus import (
    Record,
    RecordParseError,
    clean_text,
    compression_ratio,
    corpus_stats,
    filter_corpus,
    parse_records,
    write_records,
)


def _rec(id, article, summary, **kw):
    return Record(id=id, article=article, summary=summary, **kw)


class TestParseRecords:
    def test_minimal_line(self):
        recs = parse_records(['{"article": "الف ب", "summary": "الف"}'])
        assert len(recs) == 1
        assert recs[0].id == "000000"  # positional default
        assert recs[0].source == "other"

    def test_full_line(self):
        line = json.dumps(
            {
                "id": "x1",
                "source": "bbc",
                "url": "https://www.bbc.com/urdu",
                "title": "عنوان",
                "article": "متن",
                "summary": "خلاصہ",
            },
            ensure_ascii=False,
        )
        rec = parse_records([line])[0]
        assert (rec.id, rec.source, rec.title) == ("x1", "bbc", "عنوان")

    def test_invalid_json_names_line(self):
        with pytest.raises(RecordParseError) as exc:
            parse_records(['{"article": "a", "summary": "b"}', "{bad"])
        assert exc.value.lineno == 2

    def test_missing_field_names_line(self):
        with pytest.raises(RecordParseError) as exc:
            parse_records(['{"article": "a"}'])
        assert exc.value.lineno == 1
        assert "summary" in str(exc.value)

    def test_duplicate_id_rejected(self):
        lines = [
            '{"id": "d", "article": "a", "summary": "s"}',
            '{"id": "d", "article": "a", "summary": "s"}',
        ]
        with pytest.raises(RecordParseError, match="duplicate"):
            parse_records(lines)

    def test_bad_source_rejected(self):
        with pytest.raises(RecordParseError, match="source"):
            parse_records(['{"source": "reuters", "article": "a", "summary": "s"}'])

    def test_blank_lines_skipped(self):
        recs = parse_records(["", '{"article": "a", "summary": "s"}', "   "])
        assert len(recs) == 1

    def test_write_parse_round_trip(self):
        recs = [
            _rec("a", "متن ایک", "خلاصہ", source="bbc", url="https://x.test", title="t"),
            _rec("b", "متن دو", "خلاصہ دو"),
        ]
        buf = io.StringIO()
        write_records(recs, buf)
        assert parse_records(buf.getvalue().splitlines()) == recs


class TestCleanText:
    def test_removes_scheme_urls(self):
        assert clean_text("خبر دیکھیں https://news.test/a یہاں") == "خبر دیکھیں یہاں"

    def test_removes_www_urls(self):
        assert clean_text("ذریعہ www.example.com/x ہے") == "ذریعہ ہے"

    def test_www_inside_word_untouched(self):
        # only standalone www. spans are link debris
        assert clean_text("awww.ok") == "awww.ok"

    def test_drops_caption_lines(self):
        text = "پہلی سطر\nتصویر: کچھ منظر\nآخری سطر"
        assert clean_text(text) == "پہلی سطر\nآخری سطر"

    def test_collapses_blank_runs(self):
        assert clean_text("الف\n\n\n\nب") == "الف\n\nب"

    def test_collapses_inline_whitespace(self):
        assert clean_text("الف\t\tب  ج") == "الف ب ج"

    def test_idempotent_on_fixture(self):
        raw = "خبر https://a.test یہاں\n\n\nImage: x\nباقی  متن"
        assert clean_text(clean_text(raw)) == clean_text(raw)

    @given(st.text(alphabet="ابج ت\n.:wexample/chtps، ", max_size=120))
    def test_idempotent_fuzz(self, raw):
        once = clean_text(raw)
        assert clean_text(once) == once


class TestCompressionRatio:
    def test_direct_formula(self):
        rec = _rec("x", " ".join(["ا"] * 100), " ".join(["ا"] * 20))
        assert compression_ratio(rec) == 20.0

    def test_zero_token_article_errors(self):
        with pytest.raises(ValueError, match="x"):
            compression_ratio(_rec("x", "   ", "خلاصہ"))

    @given(st.integers(min_value=1, max_value=6))
    def test_scale_free(self, times):
        # duplicating both sides leaves the ratio unchanged
        art, summ = "الف ب ج د", "الف ب"
        base = compression_ratio(_rec("x", art, summ))
        scaled = compression_ratio(_rec("x", " ".join([art] * times), " ".join([summ] * times)))
        assert scaled == pytest.approx(base)


class TestFilterCorpus:
    def test_strictly_greater_removed(self):
        at_threshold = _rec("eq", "ا ب ج د", "ا ب")  # exactly 50%
        above = _rec("gt", "ا ب ج د", "ا ب ج")  # 75%
        below = _rec("lt", "ا ب ج د", "ا")  # 25%
        result = filter_corpus([at_threshold, above, below], max_ratio_pct=50.0)
        assert [r.id for r in result.kept] == ["eq", "lt"]
        assert [r.id for r in result.removed] == ["gt"]

    def test_order_preserved(self):
        recs = [_rec(f"r{i}", "ا ب ج د", "ا") for i in range(5)]
        assert [r.id for r in filter_corpus(recs).kept] == [f"r{i}" for i in range(5)]

    def test_nonpositive_threshold_rejected(self):
        with pytest.raises(ValueError):
            filter_corpus([], max_ratio_pct=0.0)


class TestCorpusStats:
    def test_singleton(self):
        st_ = corpus_stats([_rec("a", " ".join(["ا"] * 10), "ا ب")])
        assert st_.count == 1
        assert st_.article_tokens.min == st_.article_tokens.max == 10
        assert st_.compression_ratio_pct.mean == 20.0

    def test_even_count_uses_lower_median(self):
        recs = [
            _rec("a", " ".join(["ا"] * 10), "ا"),
            _rec("b", " ".join(["ا"] * 20), "ا"),
        ]
        st_ = corpus_stats(recs)
        assert st_.article_tokens.mean == 15.0
        assert st_.article_tokens.median == 10.0

    def test_empty_corpus_errors(self):
        with pytest.raises(ValueError):
            corpus_stats([])

    def test_to_dict_schema(self):
        d = corpus_stats([_rec("a", "ا ب ج د", "ا")]).to_dict()
        assert set(d) == {"count", "article_tokens", "summary_tokens", "compression_ratio_pct"}
        assert set(d["article_tokens"]) == {"min", "max", "mean", "median"}
