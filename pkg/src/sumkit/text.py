"""Deterministic segmentation for Urdu-like right-to-left text.

Word, sentence, paragraph and subword segmentation used by every other
module. All functions are pure and rule-based so token counts are
reproducible anywhere, with no model downloads.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

_BLANK_LINE_SPLIT = re.compile(r"\n\s*\n")

# Terminal marks that end a sentence when followed by whitespace or end of text.
SENTENCE_TERMINALS = "۔؟!?."  # ۔ ؟ ! ? .


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def is_punct_token(token: str) -> bool:
    """True when a token consists solely of punctuation characters."""
    return bool(token) and all(_is_punct_char(c) for c in token)


def word_tokenize(text: str) -> list[str]:
    """Split on whitespace, detaching punctuation into single-char tokens.

    Urdu marks ('۔', '؟', '،') are punctuation like their Latin
    counterparts. Never emits an empty token, so the concatenation of the
    output covers every non-whitespace character of the input exactly once.
    """
    tokens: list[str] = []
    for chunk in text.split():
        buf: list[str] = []
        for ch in chunk:
            if _is_punct_char(ch):
                if buf:
                    tokens.append("".join(buf))
                    buf = []
                tokens.append(ch)
            else:
                buf.append(ch)
        if buf:
            tokens.append("".join(buf))
    return tokens


def sentence_split(text: str, terminals: str = SENTENCE_TERMINALS) -> list[str]:
    """Split after a terminal mark followed by whitespace or end of text.

    Trailing unterminated text becomes a final sentence. Urdu has no
    capitalization cues, so no casing heuristics are applied. Empty
    sentences are never produced.
    """
    sentences: list[str] = []
    start = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch in terminals and (i + 1 == n or text[i + 1].isspace()):
            seg = text[start : i + 1].strip()
            if seg:
                sentences.append(seg)
            start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def paragraph_split(text: str) -> list[str]:
    """Split on blank lines; paragraphs are trimmed and never empty."""
    paras = []
    for block in _BLANK_LINE_SPLIT.split(text):
        block = block.strip()
        if block:
            paras.append(block)
    return paras


@dataclass(frozen=True)
class SubwordVocab:
    """Ordered list of subword pieces; piece id is the list position.

    ``special_ids`` always contains ``unk_id``. Pieces must be unique and
    non-empty.
    """

    pieces: tuple[str, ...]
    special_ids: frozenset[int]
    unk_id: int
    _piece_ids: dict[str, int] = field(init=False, repr=False, compare=False)
    _max_piece_len: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("vocabulary has no pieces")
        piece_ids: dict[str, int] = {}
        for i, piece in enumerate(self.pieces):
            if not piece:
                raise ValueError(f"empty piece at id {i}")
            if piece in piece_ids:
                raise ValueError(f"duplicate piece {piece!r} (ids {piece_ids[piece]} and {i})")
            piece_ids[piece] = i
        n = len(self.pieces)
        if not (0 <= self.unk_id < n):
            raise ValueError(f"unk_id {self.unk_id} out of range for {n} pieces")
        bad = [i for i in self.special_ids if not (0 <= i < n)]
        if bad:
            raise ValueError(f"special ids out of range: {sorted(bad)}")
        if self.unk_id not in self.special_ids:
            raise ValueError("unk_id must be a special id")
        object.__setattr__(self, "_piece_ids", piece_ids)
        object.__setattr__(self, "_max_piece_len", max(len(p) for p in self.pieces))

    def __len__(self) -> int:
        return len(self.pieces)

    def piece_id(self, piece: str) -> int | None:
        return self._piece_ids.get(piece)

    @classmethod
    def from_pieces(
        cls,
        pieces: "list[str] | tuple[str, ...]",
        unk_id: int = 0,
        special_ids: "set[int] | frozenset[int] | None" = None,
    ) -> "SubwordVocab":
        specials = frozenset(special_ids or ()) | {unk_id}
        return cls(tuple(pieces), specials, unk_id)


def _encode_word(vocab: SubwordVocab, word: str) -> list[tuple[int, str]]:
    """Greedy longest-prefix match of one word; unmatchable chars map to unk.

    Returns (piece id, surface) pairs whose surfaces concatenate back to the
    word's characters.
    """
    out: list[tuple[int, str]] = []
    pos = 0
    table = vocab._piece_ids
    limit = vocab._max_piece_len
    while pos < len(word):
        end = min(len(word), pos + limit)
        matched = None
        for q in range(end, pos, -1):
            cand = word[pos:q]
            pid = table.get(cand)
            if pid is not None:
                matched = (pid, cand)
                break
        if matched is None:
            out.append((vocab.unk_id, word[pos]))
            pos += 1
        else:
            out.append(matched)
            pos += len(matched[1])
    return out


def subword_tokenize(vocab: SubwordVocab, text: str) -> list[int]:
    """Word-tokenize, then greedy longest-prefix match each word against the
    vocabulary. Deterministic: identical (vocab, text) gives identical ids.
    """
    ids: list[int] = []
    for word in word_tokenize(text):
        ids.extend(pid for pid, _ in _encode_word(vocab, word))
    return ids


def subword_len(vocab: SubwordVocab, text: str) -> int:
    return len(subword_tokenize(vocab, text))


def subword_prefix(vocab: SubwordVocab, text: str, max_tokens: int) -> str:
    """Text covering the first ``max_tokens`` subword tokens of ``text``.

    Words are rejoined with single spaces; a word split by the budget keeps
    only the surfaces of its leading pieces. Re-tokenizing the result yields
    exactly ``min(max_tokens, total)`` tokens.
    """
    if max_tokens < 0:
        raise ValueError("max_tokens must be >= 0")
    kept: list[str] = []
    used = 0
    for word in word_tokenize(text):
        enc = _encode_word(vocab, word)
        if used + len(enc) <= max_tokens:
            kept.append(word)
            used += len(enc)
            if used == max_tokens:
                break
        else:
            take = max_tokens - used
            if take > 0:
                kept.append("".join(surface for _, surface in enc[:take]))
            break
    return " ".join(kept)


_HEADER_UNK = "#unk="
_HEADER_SPECIAL = "#special="


def load_vocab(
    path: str,
    unk_id: int | None = None,
    special_ids: "set[int] | None" = None,
) -> SubwordVocab:
    """Read a vocabulary file: one piece per line, optional leading headers
    ``#unk=<id>`` and ``#special=<id,id,...>``.

    Explicit ``unk_id`` / ``special_ids`` arguments override the headers.
    Without either, piece 0 is the unknown piece.
    """
    pieces: list[str] = []
    header_unk: int | None = None
    header_special: set[int] | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not pieces and line.startswith(_HEADER_UNK):
                header_unk = int(line[len(_HEADER_UNK) :])
                continue
            if not pieces and line.startswith(_HEADER_SPECIAL):
                body = line[len(_HEADER_SPECIAL) :].strip()
                header_special = {int(x) for x in body.split(",")} if body else set()
                continue
            if line == "":
                raise ValueError(f"{path}:{lineno}: empty piece line")
            pieces.append(line)
    if not pieces:
        raise ValueError(f"{path}: vocabulary file has no pieces")
    unk = unk_id if unk_id is not None else (header_unk if header_unk is not None else 0)
    specials = set(special_ids) if special_ids is not None else set(header_special or ())
    specials.add(unk)
    try:
        return SubwordVocab(tuple(pieces), frozenset(specials), unk)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def save_vocab(path: str, vocab: SubwordVocab) -> None:
    """Write a vocabulary in the same format ``load_vocab`` reads."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_HEADER_UNK}{vocab.unk_id}\n")
        fh.write(_HEADER_SPECIAL + ",".join(str(i) for i in sorted(vocab.special_ids)) + "\n")
        for piece in vocab.pieces:
            fh.write(piece + "\n")
