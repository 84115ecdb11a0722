"""Shared generator plumbing: data pools, configs, sentence segmentation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..corpus import Corpus, Grapheme, GraphemeInventory, Word, corpus_from_sentences
from ..errors import ConfigError, IoFailure


def _data_text(name: str) -> str:
    return resources.files("scriptforge.data").joinpath(name).read_text(encoding="utf-8")


def _parse_list(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def load_pool(name_or_path: str | Path) -> list[Grapheme]:
    """Load a grapheme list: packaged pool name or a file path."""
    p = Path(name_or_path)
    if p.exists():
        try:
            return _parse_list(p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"cannot read pool {p}: {exc}") from exc
    return _parse_list(_data_text(f"{name_or_path}.txt"))


def default_inventory() -> GraphemeInventory:
    return GraphemeInventory.from_entries(_parse_list(_data_text("eva_inventory.txt")))


def default_length_dist() -> dict[int, int]:
    dist = {}
    for line in _parse_list(_data_text("sentence_lengths.txt")):
        length, count = line.split()
        dist[int(length)] = int(count)
    return dist


def load_preferred_pairs(path: str | Path | None = None) -> list[tuple[Grapheme, Grapheme]]:
    """(final, initial) pairs, most preferred first."""
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("preferred_pairs.txt")
    pairs = []
    for line in _parse_list(text):
        fin, init = line.split()
        pairs.append((fin, init))
    return pairs


class LengthSampler:
    """Draws sentence lengths from a weighted table."""

    def __init__(self, dist: dict[int, int] | None = None):
        dist = dist or default_length_dist()
        self.lengths = list(dist.keys())
        self.cum = []
        acc = 0
        for length in self.lengths:
            acc += dist[length]
            self.cum.append(acc)
        self.total = acc

    def draw(self, rng: random.Random) -> int:
        x = rng.random() * self.total
        lo, hi = 0, len(self.cum) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.cum[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        return self.lengths[lo]


def group_into_sentences(
    words: list[Word], rng: random.Random, length_dist: dict[int, int] | None = None
) -> list[tuple[Word, ...]]:
    """Cut a word stream into sentences with sampled lengths."""
    sampler = LengthSampler(length_dist)
    sentences = []
    i = 0
    while i < len(words):
        n = sampler.draw(rng)
        chunk = tuple(words[i : i + n])
        if chunk:
            sentences.append(chunk)
        i += n
    return sentences


@dataclass(frozen=True)
class GeneratedCorpus:
    """A generated corpus together with the config/seed that produced it."""

    corpus: Corpus
    provenance: dict


def finish_corpus(
    words: list[Word], rng: random.Random, name: str, provenance: dict
) -> GeneratedCorpus:
    sentences = group_into_sentences(words, rng)
    corpus = corpus_from_sentences(sentences, name=name, tokenization="eva-longest-match")
    return GeneratedCorpus(corpus=corpus, provenance=provenance)


# Flat "key = value" config files ------------------------------------------


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Parse one `key = value` per line; '#' comments; raises with line numbers."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read config {path}: {exc}") from exc
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw!r}", line=ln)
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError("empty key", line=ln)
        out[key] = value.strip()
    return out


def write_config_file(path: str | Path, values: dict) -> None:
    lines = [f"{k} = {v}" for k, v in values.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def coerce(raw: str, kind: type):
    if kind is bool:
        if raw.lower() in ("true", "yes", "1", "on"):
            return True
        if raw.lower() in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    return kind(raw)
