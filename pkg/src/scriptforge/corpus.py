"""Corpus data model, tokenizers, and word-order transformations.

A corpus is a sequence of sentences; a sentence is a sequence of words; a
word is a tuple of graphemes. A grapheme is a short string: one EVA token
(possibly several characters, e.g. ``ch`` or ``iin``) or one natural-language
code point. Corpora are immutable after construction and safe to share
across workers.
"""

from __future__ import annotations

import logging
import random
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .errors import EmptyCorpus, IoFailure, TokenizationFailure, WrongStorageOrder

log = logging.getLogger(__name__)

Grapheme = str
Word = tuple[Grapheme, ...]
Sentence = tuple[Word, ...]

# Storage order of the text in memory, relative to reading order.
LOGICAL_LTR = "logical-ltr"
LOGICAL_RTL = "logical-rtl"

# Tokenization schemes.
SCHEME_EVA = "eva-longest-match"
SCHEME_CHARS = "character"

# Sentinel graphemes. Multi-character on purpose: they cannot collide with
# character-scheme graphemes and are excluded from inventory files.
WORD_SEP: Grapheme = "<w>"
PAD: Grapheme = "<pad>"


@dataclass(frozen=True)
class GraphemeInventory:
    """Set of legal graphemes for longest-match tokenization."""

    entries: frozenset[str]
    max_len: int

    @classmethod
    def from_entries(cls, entries: Iterable[str]) -> "GraphemeInventory":
        clean = frozenset(e for e in entries if e)
        if not clean:
            raise ValueError("inventory has no entries")
        for e in clean:
            if any(ch.isspace() for ch in e):
                raise ValueError(f"inventory entry contains whitespace: {e!r}")
        return cls(entries=clean, max_len=max(len(e) for e in clean))

    @classmethod
    def from_file(cls, path: str | Path) -> "GraphemeInventory":
        """Load an inventory file: one grapheme per line, '#' comments."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read inventory {path}: {exc}") from exc
        entries = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                entries.append(unicodedata.normalize("NFC", line))
        return cls.from_entries(entries)

    def __contains__(self, grapheme: str) -> bool:
        return grapheme in self.entries


@dataclass(frozen=True)
class Corpus:
    """Immutable tokenized corpus with provenance metadata."""

    name: str
    sentences: tuple[Sentence, ...]
    storage_order: str = LOGICAL_LTR
    tokenization: str = SCHEME_CHARS
    dropped_words: int = 0

    def __post_init__(self):
        if not self.sentences:
            raise EmptyCorpus(f"corpus {self.name!r} has no sentences")

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    @property
    def n_words(self) -> int:
        return sum(len(s) for s in self.sentences)

    def words(self) -> Iterator[Word]:
        for sentence in self.sentences:
            yield from sentence

    def vocabulary(self) -> set[Word]:
        return set(self.words())

    def graphemes(self) -> set[Grapheme]:
        return {g for w in self.words() for g in w}

    def sentence_lengths(self) -> list[int]:
        return [len(s) for s in self.sentences]

    def char_stream(self, sentence: Sentence, sep: Grapheme = WORD_SEP) -> list[Grapheme]:
        """Grapheme stream of one sentence with a separator between words."""
        out: list[Grapheme] = []
        for i, word in enumerate(sentence):
            if i:
                out.append(sep)
            out.extend(word)
        return out


def tokenize_eva(raw_word: str, inv: GraphemeInventory) -> Word:
    """Segment a word by greedy longest match against the inventory.

    At each position the longest inventory entry matching the remaining
    suffix is consumed. Raises TokenizationFailure if no entry matches.
    """
    if not raw_word:
        raise ValueError("empty word")
    out: list[Grapheme] = []
    i = 0
    n = len(raw_word)
    while i < n:
        for length in range(min(inv.max_len, n - i), 0, -1):
            piece = raw_word[i : i + length]
            if piece in inv.entries:
                out.append(piece)
                i += length
                break
        else:
            raise TokenizationFailure(raw_word, i)
    return tuple(out)


def tokenize_chars(raw_word: str) -> Word:
    """One grapheme per Unicode code point."""
    if not raw_word:
        raise ValueError("empty word")
    return tuple(raw_word)


def load_corpus(
    path: str | Path,
    scheme: str = SCHEME_CHARS,
    inv: GraphemeInventory | None = None,
    name: str | None = None,
    storage_order: str = LOGICAL_LTR,
) -> Corpus:
    """Load a UTF-8 text file: one sentence per line, words whitespace-split.

    Lines are NFC-normalized. Words that fail tokenization are dropped and
    counted; sentences left empty disappear. Raises EmptyCorpus if nothing
    survives.
    """
    if scheme == SCHEME_EVA and inv is None:
        raise ValueError("EVA scheme requires an inventory")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoFailure(f"cannot read corpus {path}: {exc}") from exc

    sentences: list[Sentence] = []
    dropped = 0
    for line in text.splitlines():
        line = unicodedata.normalize("NFC", line).strip()
        if not line:
            continue
        words: list[Word] = []
        for raw in line.split():
            try:
                if scheme == SCHEME_EVA:
                    words.append(tokenize_eva(raw, inv))  # type: ignore[arg-type]
                else:
                    words.append(tokenize_chars(raw))
            except TokenizationFailure:
                dropped += 1
        if words:
            sentences.append(tuple(words))
    if not sentences:
        raise EmptyCorpus(f"no sentences survived loading {path}")
    if dropped:
        log.warning("%s: dropped %d untokenizable word(s)", path, dropped)
    return Corpus(
        name=name or path.stem,
        sentences=tuple(sentences),
        storage_order=storage_order,
        tokenization=scheme,
        dropped_words=dropped,
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus in the loader's format (one sentence per line)."""
    lines = (" ".join("".join(w) for w in s) for s in corpus.sentences)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def corpus_from_sentences(
    sentences: Iterable[Iterable[Iterable[Grapheme]]],
    name: str = "corpus",
    **kwargs,
) -> Corpus:
    """Build a Corpus from nested iterables (mostly for tests and generators)."""
    packed = tuple(tuple(tuple(w) for w in s) for s in sentences)
    return Corpus(name=name, sentences=packed, **kwargs)


def visual_transform(c: Corpus) -> Corpus:
    """Reverse word order within sentences of a logical-RTL corpus.

    Maps logical storage order to visual reading order so that "forward"
    means actual reading order downstream. Word-internal grapheme order is
    untouched.
    """
    if c.storage_order != LOGICAL_RTL:
        raise WrongStorageOrder(f"{c.name!r} is already {c.storage_order}")
    flipped = tuple(tuple(reversed(s)) for s in c.sentences)
    return replace(c, sentences=flipped, storage_order=LOGICAL_LTR)


def reverse_words(c: Corpus) -> Corpus:
    """Reverse word order within every sentence (word-internal order kept)."""
    return replace(c, sentences=tuple(tuple(reversed(s)) for s in c.sentences))


def shuffle_words(c: Corpus, seed: int) -> Corpus:
    """Permute words uniformly at random within each sentence, per seed."""
    rng = random.Random(seed)
    shuffled: list[Sentence] = []
    for sentence in c.sentences:
        ws = list(sentence)
        rng.shuffle(ws)
        shuffled.append(tuple(ws))
    return replace(c, sentences=tuple(shuffled))
