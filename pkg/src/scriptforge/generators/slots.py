"""Parametric slot-based word generator.

Words are concatenations of one grapheme per ordered slot: prefix slots
drawn from a start-side pool, suffix slots from an end-side pool. A bridge
zone shares graphemes between the two terminal slots; bridge usage is
stratified across frequency ranks so that both boundary sides see the
shared graphemes at comparable, seed-stable rates. Word frequencies follow
a Zipf law over ranks, and sequences come from a sparse Markov chain whose
successor probabilities can be boosted on preferred boundary pairs.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field, asdict

import numpy as np

from ..corpus import Grapheme, Word
from ..errors import PoolExhausted
from .common import GeneratedCorpus, finish_corpus, load_pool, load_preferred_pairs

ABLATIONS = (
    "baseline",
    "near_miss",
    "single_pool",
    "random_order",
    "overlapping_pool",
    "agglutinative_mimic",
    "templatic_mimic",
)

# Frequency-rank strata that route bridge graphemes to word boundaries.
# Rank 2 is a dedicated dual-bridge word (same shared grapheme at both
# ends), anchoring a stable ambiguous mass even under extreme Zipf
# concentration; sparser strata spread the remainder across the tail.
DUAL_BRIDGE_RANK = 2
FINAL_BRIDGE_STRIDE = 9
INITIAL_BRIDGE_STRIDE = 9
FINAL_BRIDGE_PHASE = 0
INITIAL_BRIDGE_PHASE = 4

WORD_ATTEMPTS = 300


@dataclass(frozen=True)
class SlotConfig:
    """Knobs of the slot generator; defaults give the baseline condition."""

    n_prefix_slots: int = 2
    n_suffix_slots: int = 2
    bridge_zone: int = 1
    zipf_alpha: float = 1.2
    vocab_size: int = 1000
    markov_top_k: int = 5
    boundary_pair_strength: float = 6.0
    pool_overlap: float = 0.0
    ablation: str = "baseline"
    n_preferred: int = 20
    pool_per_slot: tuple[tuple[Grapheme, ...], ...] | None = None
    preferred_pairs_path: str | None = None

    def __post_init__(self):
        if self.vocab_size < 1:
            raise ValueError("vocab_size must be >= 1")
        if self.zipf_alpha < 0:
            raise ValueError("zipf_alpha must be >= 0")
        if self.markov_top_k < 1:
            raise ValueError("markov_top_k must be >= 1")
        if self.ablation not in ABLATIONS:
            raise ValueError(f"unknown ablation {self.ablation!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("pool_per_slot")
        return d


def _default_slot_pools(cfg: SlotConfig) -> tuple[list[list[Grapheme]], list[Grapheme]]:
    """Per-slot pools plus the ordered bridge list, per ablation."""
    start = load_pool("start_class")
    end = load_pool("end_class")
    mid = load_pool("mid_class")
    bridge = load_pool("bridge")[: cfg.bridge_zone]
    if cfg.pool_overlap > 0:
        n_cross = max(1, round(cfg.pool_overlap * min(len(start), len(end))))
        start, end = start + end[:n_cross], end + start[:n_cross]
    n_slots = cfg.n_prefix_slots + cfg.n_suffix_slots
    if cfg.ablation == "single_pool":
        union = sorted(set(start) | set(end) | set(mid))
        return [list(union) for _ in range(n_slots)], []
    if cfg.ablation == "agglutinative_mimic":
        # one root slot, then a chain of suffix slots mixing interior and
        # final material on both sides
        pools = [start + mid[:4]]
        for _ in range(n_slots - 1):
            pools.append(mid + end[: len(end) // 2])
        return pools, bridge
    if cfg.ablation == "templatic_mimic":
        # alternating two-class template; both templates surface at both
        # boundaries
        a, b = start + end[: len(end) // 2], mid + end[len(end) // 2 :]
        return [a if i % 2 == 0 else b for i in range(n_slots)], []
    pools = []
    for i in range(cfg.n_prefix_slots):
        pools.append(list(start) if i == 0 else list(mid))
    for i in range(cfg.n_suffix_slots):
        pools.append(list(mid) if i < cfg.n_suffix_slots - 1 else list(end))
    return pools, bridge


@dataclass(frozen=True)
class SlotLexicon:
    words: tuple[Word, ...]  # rank order: words[0] has the highest weight
    weights: np.ndarray  # normalized, descending

    def as_dict(self) -> dict[Word, float]:
        return {w: float(x) for w, x in zip(self.words, self.weights)}


def _build_lexicon(cfg: SlotConfig, rng: random.Random) -> SlotLexicon:
    if cfg.pool_per_slot is not None:
        pools: list[list[Grapheme]] = [list(p) for p in cfg.pool_per_slot]
        bridge: list[Grapheme] = []
    else:
        pools, bridge = _default_slot_pools(cfg)
    if any(not p for p in pools):
        raise ValueError("every slot pool must be non-empty")
    capacity = 1
    for i, p in enumerate(pools):
        opts = set(p)
        if bridge and i in (0, len(pools) - 1):
            opts |= set(bridge)
        capacity *= len(opts)
    if capacity < cfg.vocab_size:
        raise PoolExhausted(
            f"slot pools admit {capacity} distinct words, need {cfg.vocab_size}"
        )

    # bridge members join both terminal pools; the base draw excludes them
    # so their boundary usage is governed by the rank strata alone
    base_pools = [[g for g in p if g not in bridge] for p in pools]
    if any(not p for p in base_pools):
        base_pools = pools

    def make_word(rank: int) -> Word:
        gs = [rng.choice(base_pools[i]) for i in range(len(pools))]
        if bridge:
            if rank == DUAL_BRIDGE_RANK:
                gs[0] = bridge[0]
                gs[-1] = bridge[0]
            else:
                if rank % FINAL_BRIDGE_STRIDE == FINAL_BRIDGE_PHASE:
                    gs[-1] = bridge[(rank // FINAL_BRIDGE_STRIDE) % len(bridge)]
                if rank % INITIAL_BRIDGE_STRIDE == INITIAL_BRIDGE_PHASE:
                    gs[0] = bridge[(rank // INITIAL_BRIDGE_STRIDE) % len(bridge)]
        return tuple(gs)

    words: list[Word] = []
    seen: set[Word] = set()
    for rank in range(1, cfg.vocab_size + 1):
        for _ in range(WORD_ATTEMPTS):
            w = make_word(rank)
            if w not in seen:
                break
        else:
            raise PoolExhausted(
                f"could not draw a fresh word for rank {rank} "
                f"({len(seen)} of {cfg.vocab_size} built)"
            )
        seen.add(w)
        words.append(w)

    ranks = np.arange(1, cfg.vocab_size + 1, dtype=float)
    weights = ranks ** (-cfg.zipf_alpha)
    weights /= weights.sum()
    return SlotLexicon(words=tuple(words), weights=weights)


def build_slot_lexicon(cfg: SlotConfig, seed: int) -> dict[Word, float]:
    """Vocabulary of distinct slot words mapped to Zipf weights.

    Iteration order of the returned mapping is rank order (heaviest first).
    """
    return _build_lexicon(cfg, random.Random(seed)).as_dict()


class _SlotChain:
    """Sparse word-successor chain with boundary-pair boosts."""

    def __init__(self, cfg: SlotConfig, lex: SlotLexicon, np_rng: np.random.Generator):
        v = len(lex.words)
        k = min(cfg.markov_top_k, v)
        preferred = set(
            load_preferred_pairs(cfg.preferred_pairs_path)[: cfg.n_preferred]
        )
        finals = [w[-1] for w in lex.words]
        initials = [w[0] for w in lex.words]
        self.start_cum = np.cumsum(lex.weights)
        self.succ: list[np.ndarray] = []
        self.cum: list[np.ndarray] = []
        strength = cfg.boundary_pair_strength
        for i in range(v):
            if k == v:
                idx = np.arange(v)
            else:
                idx = np_rng.choice(v, size=k, replace=False, p=lex.weights)
            w = lex.weights[idx].copy()
            if strength != 1.0:
                fin = finals[i]
                boost = np.fromiter(
                    ((fin, initials[j]) in preferred for j in idx), dtype=bool, count=len(idx)
                )
                w[boost] *= strength
            self.succ.append(idx)
            self.cum.append(np.cumsum(w))

    def walk(self, n_words: int, rng: random.Random, lex: SlotLexicon) -> list[Word]:
        out: list[Word] = []
        cur = int(
            np.searchsorted(self.start_cum, rng.random() * self.start_cum[-1], side="right")
        )
        out.append(lex.words[cur])
        for _ in range(n_words - 1):
            cum = self.cum[cur]
            j = bisect_right(cum, rng.random() * cum[-1])
            cur = int(self.succ[cur][j])
            out.append(lex.words[cur])
        return out


def generate_slot_corpus(cfg: SlotConfig, n_words: int, seed: int) -> GeneratedCorpus:
    """Sample a corpus of n_words from the configured slot generator."""
    if n_words < 1:
        raise ValueError("n_words must be >= 1")
    rng = random.Random(seed)
    lex = _build_lexicon(cfg, rng)
    if cfg.ablation == "random_order":
        # word order carries no structure: i.i.d. Zipf draws
        cum = np.cumsum(lex.weights)
        words = [
            lex.words[int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))]
            for _ in range(n_words)
        ]
    else:
        chain = _SlotChain(cfg, lex, np.random.default_rng(seed))
        words = chain.walk(n_words, rng, lex)
    return finish_corpus(
        words, rng, name=f"slot-{cfg.ablation}", provenance={"config": cfg.to_dict(), "seed": seed}
    )
