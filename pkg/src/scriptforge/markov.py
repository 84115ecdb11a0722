"""Word-level Markov chains and the directional-dissociation experiment.

A chain of order k (1 or 2) trained on a corpus's word sequences can
regenerate synthetic corpora that reuse real words with approximate
word-to-word transition statistics. The dissociation experiment checks, per
run, whether the character stream reads better backwards while word order
reads better forwards.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .boundary import delta_cb
from .corpus import Corpus, GraphemeInventory, Word, corpus_from_sentences, tokenize_eva
from .errors import EmptyCorpus, TokenizationFailure
from .ngram import delta_char

BOS: Word = ("<bos>",)
EOS: Word = ("<eos>",)

EOS_RETRY_LIMIT = 100


@dataclass(frozen=True)
class WordMarkovChain:
    """Order-k word transition counts with BOS/EOS sentence delimiters."""

    order: int
    transitions: dict[tuple[Word, ...], Counter]
    unigram: Counter  # word -> count, real words only (fallback sampling)
    length_dist: Counter  # sentence length in words -> count
    tokenization: str

    @property
    def vocabulary(self) -> set[Word]:
        return set(self.unigram)


def train_chain(c: Corpus, k: int) -> WordMarkovChain:
    """Count k-context word transitions, BOS-padded starts, EOS ends."""
    if k not in (1, 2):
        raise ValueError(f"unsupported Markov order {k}, must be 1 or 2")
    if c.n_words == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    transitions: dict[tuple[Word, ...], Counter] = {}
    unigram: Counter = Counter()
    length_dist: Counter = Counter()
    for sentence in c.sentences:
        length_dist[len(sentence)] += 1
        unigram.update(sentence)
        seq: list[Word] = [BOS] * k + list(sentence) + [EOS]
        for i in range(len(sentence) + 1):
            ctx = tuple(seq[i : i + k])
            transitions.setdefault(ctx, Counter())[seq[i + k]] += 1
    return WordMarkovChain(
        order=k,
        transitions=transitions,
        unigram=unigram,
        length_dist=length_dist,
        tokenization=c.tokenization,
    )


class _Sampler:
    """Cumulative-weight tables for fast categorical draws."""

    def __init__(self, counter: Counter):
        self.items = list(counter.keys())
        weights = np.fromiter(counter.values(), dtype=float, count=len(counter))
        self.cum = np.cumsum(weights)
        self.total = self.cum[-1]

    def draw(self, rng: random.Random):
        x = rng.random() * self.total
        return self.items[int(np.searchsorted(self.cum, x, side="right"))]


def generate(
    chain: WordMarkovChain,
    n_sentences: int,
    seed: int,
    inventory: GraphemeInventory | None = None,
    name: str = "markov-synthetic",
) -> Corpus:
    """Sample a synthetic corpus from the chain, deterministic per seed.

    Sentence lengths are drawn from the training length distribution. An
    EOS drawn before the target length is resampled a bounded number of
    times, then accepted as early termination. Unseen contexts back off to
    order 1 and then to the unigram distribution. If an inventory is given,
    words whose surface form fails tokenization are dropped.
    """
    if n_sentences < 1:
        raise ValueError("need at least one sentence")
    rng = random.Random(seed)
    k = chain.order
    samplers = {ctx: _Sampler(cnt) for ctx, cnt in chain.transitions.items()}
    unigram_sampler = _Sampler(chain.unigram)
    length_sampler = _Sampler(chain.length_dist)

    passes_inventory: dict[Word, bool] = {}

    def keep(word: Word) -> bool:
        if inventory is None:
            return True
        ok = passes_inventory.get(word)
        if ok is None:
            try:
                tokenize_eva("".join(word), inventory)
                ok = True
            except TokenizationFailure:
                ok = False
            passes_inventory[word] = ok
        return ok

    def draw_next(ctx: tuple[Word, ...]) -> Word:
        sampler = samplers.get(ctx)
        if sampler is None and k == 2:
            sampler = samplers.get(ctx[-1:])
        if sampler is None:
            return unigram_sampler.draw(rng)
        word = sampler.draw(rng)
        return word

    sentences: list[tuple[Word, ...]] = []
    while len(sentences) < n_sentences:
        target = length_sampler.draw(rng)
        ctx = (BOS,) * k
        words: list[Word] = []
        while len(words) < target:
            word = draw_next(ctx)
            if word == EOS:
                for _ in range(EOS_RETRY_LIMIT):
                    word = draw_next(ctx)
                    if word != EOS:
                        break
                if word == EOS:
                    break  # accept early termination
            if keep(word):
                words.append(word)
            ctx = (*ctx[1:], word) if k > 1 else (word,)
        if words:
            sentences.append(tuple(words))
    return corpus_from_sentences(sentences, name=name, tokenization=chain.tokenization)


@dataclass(frozen=True)
class DissociationReport:
    """Per-run directionality pairs and the opposite-direction tally."""

    order: int
    runs: int
    delta_char_values: tuple[float, ...]
    delta_cb_values: tuple[float, ...]
    dissociation_count: int

    @property
    def mean_delta_char(self) -> float:
        return float(np.mean(self.delta_char_values))

    @property
    def sd_delta_char(self) -> float:
        return float(np.std(self.delta_char_values, ddof=1)) if self.runs > 1 else 0.0

    @property
    def mean_delta_cb(self) -> float:
        return float(np.mean(self.delta_cb_values))

    @property
    def sd_delta_cb(self) -> float:
        return float(np.std(self.delta_cb_values, ddof=1)) if self.runs > 1 else 0.0

    def to_record(self) -> dict:
        return {
            "order": self.order,
            "runs": self.runs,
            "mean_delta_char": self.mean_delta_char,
            "sd_delta_char": self.sd_delta_char,
            "mean_delta_cb": self.mean_delta_cb,
            "sd_delta_cb": self.sd_delta_cb,
            "dissociation": self.dissociation_count,
            "delta_char_values": list(self.delta_char_values),
            "delta_cb_values": list(self.delta_cb_values),
        }


def dissociation_experiment(
    c: Corpus,
    k: int,
    runs: int = 10,
    seed: int = 0,
    inventory: GraphemeInventory | None = None,
) -> DissociationReport:
    """Generate synthetic corpora and tally opposite-direction runs.

    Each run generates a corpus matching the training sentence count, then
    measures the character-stream asymmetry (order 2) and the boundary
    asymmetry (gram size 1). A dissociated run has the first positive and
    the second negative.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    chain = train_chain(c, k)
    d_char: list[float] = []
    d_cb: list[float] = []
    for r in range(runs):
        synth = generate(
            chain,
            n_sentences=c.n_sentences,
            seed=seed * 100_003 + r,
            inventory=inventory,
            name=f"markov-k{k}-run{r}",
        )
        d_char.append(delta_char(synth, 2).delta)
        d_cb.append(delta_cb(synth, 1).delta_cb)
    count = sum(1 for dc, db in zip(d_char, d_cb) if dc > 0 and db < 0)
    return DissociationReport(
        order=k,
        runs=runs,
        delta_char_values=tuple(d_char),
        delta_cb_values=tuple(d_cb),
        dissociation_count=count,
    )
