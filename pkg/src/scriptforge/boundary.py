"""Word-boundary transition tables and cross-boundary directionality stats.

A boundary transition is the pair (last n graphemes of a word, first n
graphemes of the next word) within a sentence. Conditional entropy of the
target given the condition, compared between original and reversed word
order, measures which reading direction makes the next word's opening more
predictable. Negative asymmetry means forward (left-to-right) word order is
the more predictable one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .corpus import PAD, Corpus, Grapheme, Word, reverse_words, shuffle_words
from .errors import EmptyTable, InsufficientData

log = logging.getLogger(__name__)

MAX_BOUNDARY_N = 2

Gram = tuple[Grapheme, ...]


@dataclass(frozen=True)
class BoundaryTransitionTable:
    """Joint counts of (condition, target) n-gram pairs across boundaries."""

    n: int
    joint: dict[tuple[Gram, Gram], int]
    total: int


def _tail(word: Word, n: int) -> Gram:
    """Last n graphemes, padded on the word-internal (left) side."""
    if len(word) >= n:
        return word[-n:]
    return (PAD,) * (n - len(word)) + word


def _head(word: Word, n: int) -> Gram:
    """First n graphemes, padded on the word-internal (right) side."""
    if len(word) >= n:
        return word[:n]
    return word + (PAD,) * (n - len(word))


def extract_transitions(c: Corpus, n: int) -> BoundaryTransitionTable:
    """One (condition, target) entry per consecutive word pair, per sentence."""
    if not 1 <= n <= MAX_BOUNDARY_N:
        raise ValueError(f"boundary gram size must be in [1, {MAX_BOUNDARY_N}], got {n}")
    joint: dict[tuple[Gram, Gram], int] = {}
    total = 0
    for sentence in c.sentences:
        for i in range(len(sentence) - 1):
            key = (_tail(sentence[i], n), _head(sentence[i + 1], n))
            joint[key] = joint.get(key, 0) + 1
            total += 1
    return BoundaryTransitionTable(n=n, joint=joint, total=total)


def conditional_entropy(t: BoundaryTransitionTable) -> float:
    """H(target | condition) in bits, plug-in probabilities."""
    if t.total < 1:
        raise EmptyTable("no transitions")
    cond_totals: dict[Gram, int] = {}
    for (cond, _), cnt in t.joint.items():
        cond_totals[cond] = cond_totals.get(cond, 0) + cnt
    n = t.total
    h = 0.0
    for (cond, _), cnt in t.joint.items():
        h -= (cnt / n) * math.log2(cnt / cond_totals[cond])
    return h


def target_entropy(t: BoundaryTransitionTable) -> float:
    """H(target) in bits from the table's target marginal."""
    if t.total < 1:
        raise EmptyTable("no transitions")
    marg: dict[Gram, int] = {}
    for (_, tgt), cnt in t.joint.items():
        marg[tgt] = marg.get(tgt, 0) + cnt
    n = t.total
    return -sum((cnt / n) * math.log2(cnt / n) for cnt in marg.values())


def mutual_information(t: BoundaryTransitionTable) -> float:
    """MI(condition; target) = H(target) - H(target | condition), in bits."""
    return target_entropy(t) - conditional_entropy(t)


@dataclass(frozen=True)
class CrossBoundaryResult:
    """Forward/backward entropies and the directional asymmetry, in bits."""

    n: int
    h_fwd: float
    h_bwd: float
    mi_fwd: float
    mi_bwd: float
    delta_cb: float
    ci_low: float | None = None
    ci_high: float | None = None

    @property
    def verdict(self) -> str:
        if self.ci_low is not None and self.ci_high is not None:
            agg = _sign(self.delta_cb)
            if agg != _sign(self.ci_low) or agg != _sign(self.ci_high):
                return "inconclusive"
        if self.delta_cb < 0:
            return "LTR"
        if self.delta_cb > 0:
            return "RTL"
        return "inconclusive"

    def to_record(self, corpus: str) -> dict:
        ci = None if self.ci_low is None else [self.ci_low, self.ci_high]
        return {
            "corpus": corpus,
            "n": self.n,
            "h_fwd": self.h_fwd,
            "h_bwd": self.h_bwd,
            "delta_cb": self.delta_cb,
            "mi_fwd": self.mi_fwd,
            "mi_bwd": self.mi_bwd,
            "ci": ci,
            "verdict": self.verdict,
        }


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def delta_cb(c: Corpus, n: int) -> CrossBoundaryResult:
    """H_fwd - H_bwd between original and reversed word order."""
    fwd = extract_transitions(c, n)
    bwd = extract_transitions(reverse_words(c), n)
    if fwd.total < 1:
        raise EmptyTable("corpus yields no boundary transitions")
    h_fwd = conditional_entropy(fwd)
    h_bwd = conditional_entropy(bwd)
    return CrossBoundaryResult(
        n=n,
        h_fwd=h_fwd,
        h_bwd=h_bwd,
        mi_fwd=target_entropy(fwd) - h_fwd,
        mi_bwd=target_entropy(bwd) - h_bwd,
        delta_cb=h_fwd - h_bwd,
    )


class _TransitionStats:
    """Per-sentence transition ids for fast paired sentence resampling."""

    def __init__(self, c: Corpus, n: int):
        pair_index: dict[tuple[Gram, Gram], int] = {}
        cond_index: dict[Gram, int] = {}
        tgt_index: dict[Gram, int] = {}
        pair_ids: list[int] = []
        pair_sent: list[int] = []
        pair_cond: list[int] = []  # pair id -> cond id
        pair_tgt: list[int] = []  # pair id -> tgt id
        for si, sentence in enumerate(c.sentences):
            for i in range(len(sentence) - 1):
                key = (_tail(sentence[i], n), _head(sentence[i + 1], n))
                pid = pair_index.get(key)
                if pid is None:
                    pid = len(pair_index)
                    pair_index[key] = pid
                    pair_cond.append(cond_index.setdefault(key[0], len(cond_index)))
                    pair_tgt.append(tgt_index.setdefault(key[1], len(tgt_index)))
                pair_ids.append(pid)
                pair_sent.append(si)
        self.n_pairs = len(pair_index)
        self.n_conds = len(cond_index)
        self.n_tgts = len(tgt_index)
        self.pair_ids = np.asarray(pair_ids, dtype=np.int64)
        self.pair_sent = np.asarray(pair_sent, dtype=np.int64)
        self.pair_cond = np.asarray(pair_cond, dtype=np.int64)
        self.pair_tgt = np.asarray(pair_tgt, dtype=np.int64)

    def entropies(self, k: np.ndarray) -> tuple[float, float]:
        """(H(target|cond), MI) for a replicate with sentence weights k."""
        counts = np.bincount(self.pair_ids, weights=k[self.pair_sent], minlength=self.n_pairs)
        total = counts.sum()
        if total <= 0:
            raise EmptyTable("replicate has no transitions")
        live = counts > 0
        cnt = counts[live]
        cond_tot = np.bincount(self.pair_cond, weights=counts, minlength=self.n_conds)
        tgt_tot = np.bincount(self.pair_tgt, weights=counts, minlength=self.n_tgts)
        h_cond = float(-(cnt @ np.log2(cnt / cond_tot[self.pair_cond[live]])) / total)
        tt = tgt_tot[tgt_tot > 0]
        h_tgt = float(-(tt @ np.log2(tt / total)) / total)
        return h_cond, h_tgt - h_cond


def paired_bootstrap_cb(
    c: Corpus,
    n: int,
    B: int = 500,
    alpha: float = 0.05,
    seed: int = 0,
) -> tuple[float, float, str]:
    """Percentile CI for the asymmetry over paired sentence resamples.

    Each replicate draws sentences with replacement and recomputes the
    asymmetry with the same sentences in both directions. The verdict is
    inconclusive when the aggregate sign disagrees with either CI endpoint.
    """
    fwd = _TransitionStats(c, n)
    bwd = _TransitionStats(reverse_words(c), n)
    with_transitions = len(set(fwd.pair_sent.tolist()))
    if with_transitions < 2:
        raise InsufficientData("need >= 2 sentences with transitions")
    s = c.n_sentences
    rng = np.random.default_rng(seed)
    deltas = np.empty(B)
    b = 0
    while b < B:
        k = np.bincount(rng.integers(0, s, size=s), minlength=s).astype(np.float64)
        try:
            h_f, _ = fwd.entropies(k)
            h_b, _ = bwd.entropies(k)
        except EmptyTable:
            continue  # replicate drew only transition-free sentences
        deltas[b] = h_f - h_b
        b += 1
    lo, hi = np.percentile(deltas, [100 * alpha / 2, 100 * (1 - alpha / 2)])
    aggregate = delta_cb(c, n).delta_cb
    agg_sign = _sign(aggregate)
    if agg_sign != 0 and agg_sign == _sign(lo) == _sign(hi):
        verdict = "LTR" if agg_sign < 0 else "RTL"
    else:
        verdict = "inconclusive"
    return float(lo), float(hi), verdict


def delta_cb_with_ci(
    c: Corpus, n: int, B: int = 500, alpha: float = 0.05, seed: int = 0
) -> CrossBoundaryResult:
    """Aggregate asymmetry plus paired bootstrap CI in one result."""
    point = delta_cb(c, n)
    lo, hi, _ = paired_bootstrap_cb(c, n, B=B, alpha=alpha, seed=seed)
    return CrossBoundaryResult(
        n=n,
        h_fwd=point.h_fwd,
        h_bwd=point.h_bwd,
        mi_fwd=point.mi_fwd,
        mi_bwd=point.mi_bwd,
        delta_cb=point.delta_cb,
        ci_low=lo,
        ci_high=hi,
    )


@dataclass(frozen=True)
class ShuffleControl:
    """Asymmetry remaining after within-sentence word-order shuffles."""

    mean_delta: float
    sd_delta: float
    reps: int

    @property
    def mean_abs(self) -> float:
        return abs(self.mean_delta)


def shuffle_control(c: Corpus, n: int, seed: int = 0, reps: int = 10) -> ShuffleControl:
    """Mean asymmetry over shuffled copies; near zero for genuine order."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    values = []
    for r in range(reps):
        shuffled = shuffle_words(c, seed=seed * 100_003 + r)
        try:
            values.append(delta_cb(shuffled, n).delta_cb)
        except EmptyTable:
            log.warning("shuffle control: no transitions, defining delta as 0")
            values.append(0.0)
    arr = np.asarray(values)
    sd = float(arr.std(ddof=1)) if reps > 1 else 0.0
    return ShuffleControl(mean_delta=float(arr.mean()), sd_delta=sd, reps=reps)
