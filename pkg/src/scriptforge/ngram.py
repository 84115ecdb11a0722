"""Character-stream n-gram models and the LTR/RTL asymmetry measure.

The asymmetry is the difference in per-token self cross-entropy between the
forward character stream and the same stream reversed: positive values mean
the reversed (right-to-left) reading is more predictable. Streams are built
per sentence, words joined by a separator sentinel, and n-grams never cross
sentence boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import WORD_SEP, Corpus, Grapheme
from .errors import StreamTooShort

MAX_ORDER = 5


@dataclass(frozen=True)
class NGramModel:
    """Additively smoothed n-gram counts over a grapheme stream.

    ``context_counts`` holds every occurrence of each (n-1)-gram in the
    training stream(s), including stream-final positions with no successor.
    """

    order: int
    context_counts: dict[tuple[Grapheme, ...], int]
    full_counts: dict[tuple[Grapheme, ...], int]
    vocab_size: int
    smoothing: float = 1.0


def _count_ngrams(stream: Sequence[Grapheme], n: int) -> tuple[dict, dict]:
    full: dict[tuple, int] = {}
    ctx: dict[tuple, int] = {}
    t = len(stream)
    for i in range(t - n + 1):
        key = tuple(stream[i : i + n])
        full[key] = full.get(key, 0) + 1
    for i in range(t - n + 2):
        key = tuple(stream[i : i + n - 1])
        ctx[key] = ctx.get(key, 0) + 1
    return full, ctx


def train_ngram(stream: Sequence[Grapheme], n: int, smoothing: float = 1.0) -> NGramModel:
    """Count every n-gram window of the stream into a model."""
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    if len(stream) < n:
        raise StreamTooShort(f"stream of {len(stream)} tokens cannot fit order {n}")
    full, ctx = _count_ngrams(stream, n)
    return NGramModel(
        order=n,
        context_counts=ctx,
        full_counts=full,
        vocab_size=len(set(stream)),
        smoothing=smoothing,
    )


def cross_entropy(model: NGramModel, stream: Sequence[Grapheme]) -> float:
    """Average bits per predicted token under the smoothed model.

    P(g | ctx) = (count(ctx,g) + a) / (count(ctx) + a*V). An unseen context
    with a > 0 degrades to the uniform 1/V.
    """
    n = model.order
    if len(stream) < n:
        raise StreamTooShort(f"stream of {len(stream)} tokens cannot fit order {n}")
    a = model.smoothing
    v = model.vocab_size
    total = 0.0
    t = len(stream) - n + 1
    for i in range(t):
        key = tuple(stream[i : i + n])
        ctx_count = model.context_counts.get(key[:-1], 0)
        num = model.full_counts.get(key, 0) + a
        den = ctx_count + a * v
        if den == 0 or num == 0:
            # alpha = 0 with unseen context: Laplace limit is uniform
            p = 1.0 / v if ctx_count == 0 else 0.0
            if p == 0.0:
                return math.inf
            total += math.log2(p)
        else:
            total += math.log2(num / den)
    return -total / t


@dataclass(frozen=True)
class DeltaResult:
    """Directional asymmetry of a corpus character stream, in bits/token."""

    delta: float
    x_ltr: float
    x_rtl: float
    n: int
    ci_low: float | None = None
    ci_high: float | None = None

    @property
    def direction_verdict(self) -> str:
        if self.ci_low is not None and self.ci_high is not None:
            if self.ci_low <= 0.0 <= self.ci_high:
                return "inconclusive"
        if self.delta > 0:
            return "RTL"
        if self.delta < 0:
            return "LTR"
        return "inconclusive"

    def to_record(self, corpus: str) -> dict:
        ci = None
        if self.ci_low is not None:
            ci = [self.ci_low, self.ci_high]
        return {
            "corpus": corpus,
            "n": self.n,
            "delta": self.delta,
            "x_ltr": self.x_ltr,
            "x_rtl": self.x_rtl,
            "ci": ci,
            "verdict": self.direction_verdict,
        }


def _sentence_streams(c: Corpus) -> list[list[Grapheme]]:
    return [c.char_stream(s) for s in c.sentences]


def _corpus_entropy(streams: list[Sequence[Grapheme]], n: int, smoothing: float) -> float:
    """Self cross-entropy over per-sentence streams with pooled counts."""
    full: dict[tuple, int] = {}
    ctx: dict[tuple, int] = {}
    vocab: set[Grapheme] = set()
    t = 0
    for stream in streams:
        vocab.update(stream)
        if len(stream) < n - 1:
            continue
        f, cx = _count_ngrams(stream, n)
        for k, cnt in f.items():
            full[k] = full.get(k, 0) + cnt
        for k, cnt in cx.items():
            ctx[k] = ctx.get(k, 0) + cnt
        t += max(len(stream) - n + 1, 0)
    if t == 0:
        raise StreamTooShort(f"no sentence fits order {n}")
    a = smoothing
    v = len(vocab)
    total = 0.0
    for key, cnt in full.items():
        p = (cnt + a) / (ctx[key[:-1]] + a * v)
        total += cnt * math.log2(p)
    return -total / t


def delta_char(c: Corpus, n: int, smoothing: float = 1.0) -> DeltaResult:
    """X_LTR - X_RTL for the corpus character stream at order n.

    Positive values indicate the reversed reading is more predictable.
    """
    if not 2 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in [2, {MAX_ORDER}], got {n}")
    fwd = _sentence_streams(c)
    rev = [list(reversed(s)) for s in fwd]
    x_ltr = _corpus_entropy(fwd, n, smoothing)
    x_rtl = _corpus_entropy(rev, n, smoothing)
    return DeltaResult(delta=x_ltr - x_rtl, x_ltr=x_ltr, x_rtl=x_rtl, n=n)


class _StreamStats:
    """Per-sentence n-gram sufficient statistics for fast resampling.

    Precomputes integer ids for tokens, contexts, and n-grams so that a
    bootstrap replicate reduces to a handful of weighted bincounts.
    """

    def __init__(self, streams: list[list[Grapheme]], n: int):
        vocab: dict[Grapheme, int] = {}
        tok_codes: list[int] = []
        tok_sent: list[int] = []
        ngram_index: dict[tuple, int] = {}
        ctx_index: dict[tuple, int] = {}
        ngram_ids: list[int] = []
        ngram_sent: list[int] = []
        ctx_ids: list[int] = []
        ctx_sent: list[int] = []
        ngram_ctx: list[int] = []  # ngram id -> ctx id
        windows = np.zeros(len(streams), dtype=np.int64)
        for si, stream in enumerate(streams):
            for g in stream:
                code = vocab.setdefault(g, len(vocab))
                tok_codes.append(code)
                tok_sent.append(si)
            t = len(stream)
            if t >= n - 1:
                for i in range(t - n + 2):
                    key = tuple(stream[i : i + n - 1])
                    cid = ctx_index.setdefault(key, len(ctx_index))
                    ctx_ids.append(cid)
                    ctx_sent.append(si)
            if t >= n:
                windows[si] = t - n + 1
                for i in range(t - n + 1):
                    key = tuple(stream[i : i + n])
                    gid = ngram_index.get(key)
                    if gid is None:
                        gid = len(ngram_index)
                        ngram_index[key] = gid
                        ngram_ctx.append(ctx_index[key[:-1]])
                    ngram_ids.append(gid)
                    ngram_sent.append(si)
        self.n_vocab = len(vocab)
        self.n_ngrams = len(ngram_index)
        self.n_ctx = len(ctx_index)
        self.tok_codes = np.asarray(tok_codes, dtype=np.int64)
        self.tok_sent = np.asarray(tok_sent, dtype=np.int64)
        self.ngram_ids = np.asarray(ngram_ids, dtype=np.int64)
        self.ngram_sent = np.asarray(ngram_sent, dtype=np.int64)
        self.ctx_ids = np.asarray(ctx_ids, dtype=np.int64)
        self.ctx_sent = np.asarray(ctx_sent, dtype=np.int64)
        self.ngram_ctx = np.asarray(ngram_ctx, dtype=np.int64)
        self.windows = windows

    def entropy(self, k: np.ndarray, smoothing: float, vocab_size: int) -> float:
        t = float(k @ self.windows)
        if t == 0:
            raise StreamTooShort("replicate has no n-gram windows")
        counts = np.bincount(self.ngram_ids, weights=k[self.ngram_sent], minlength=self.n_ngrams)
        ctx_counts = np.bincount(self.ctx_ids, weights=k[self.ctx_sent], minlength=self.n_ctx)
        live = counts > 0
        num = counts[live] + smoothing
        den = ctx_counts[self.ngram_ctx[live]] + smoothing * vocab_size
        return float(-(counts[live] @ np.log2(num / den)) / t)

    def replicate_vocab(self, k: np.ndarray) -> int:
        seen = np.bincount(self.tok_codes, weights=k[self.tok_sent], minlength=self.n_vocab)
        return int(np.count_nonzero(seen))


def bootstrap_delta(
    c: Corpus,
    n: int,
    B: int = 500,
    alpha: float = 0.05,
    seed: int = 0,
    smoothing: float = 1.0,
) -> tuple[float, float]:
    """Percentile CI for delta over sentence-level bootstrap resamples."""
    if B < 100:
        raise ValueError(f"need B >= 100 replicates, got {B}")
    if not 2 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in [2, {MAX_ORDER}], got {n}")
    fwd_streams = _sentence_streams(c)
    rev_streams = [list(reversed(s)) for s in fwd_streams]
    fwd = _StreamStats(fwd_streams, n)
    rev = _StreamStats(rev_streams, n)
    s = len(fwd_streams)
    rng = np.random.default_rng(seed)
    deltas = np.empty(B)
    for b in range(B):
        k = np.bincount(rng.integers(0, s, size=s), minlength=s).astype(np.float64)
        v = fwd.replicate_vocab(k)
        deltas[b] = fwd.entropy(k, smoothing, v) - rev.entropy(k, smoothing, v)
    lo, hi = np.percentile(deltas, [100 * alpha / 2, 100 * (1 - alpha / 2)])
    return float(lo), float(hi)


def delta_char_with_ci(
    c: Corpus,
    n: int,
    smoothing: float = 1.0,
    B: int = 500,
    alpha: float = 0.05,
    seed: int = 0,
) -> DeltaResult:
    """Point estimate plus bootstrap CI in one result."""
    point = delta_char(c, n, smoothing)
    lo, hi = bootstrap_delta(c, n, B=B, alpha=alpha, seed=seed, smoothing=smoothing)
    return DeltaResult(
        delta=point.delta, x_ltr=point.x_ltr, x_rtl=point.x_rtl, n=n, ci_low=lo, ci_high=hi
    )


def aggregate_delta_vectorized(c: Corpus, n: int, smoothing: float = 1.0) -> float:
    """Delta from the resampling statistics with unit weights (cross-check)."""
    fwd_streams = _sentence_streams(c)
    rev_streams = [list(reversed(s)) for s in fwd_streams]
    fwd = _StreamStats(fwd_streams, n)
    rev = _StreamStats(rev_streams, n)
    k = np.ones(len(fwd_streams))
    v = fwd.replicate_vocab(k)
    return fwd.entropy(k, smoothing, v) - rev.entropy(k, smoothing, v)
