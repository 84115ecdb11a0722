"""Cardan grille generator: masked extraction of words from a filled table.

A table of graphemes (with blanks) is built column by column from pools; a
grille exposes a fixed set of hole columns. Words are the non-blank
graphemes at hole positions of a selected row. Four traversal modes vary
how rows/mask positions advance between words; four specializations vary
how columns are filled, from imposed prefix/suffix pools (circular with
respect to boundary-class structure) to column distributions learned from
a source corpus (honest).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, asdict

import numpy as np

from ..corpus import Corpus, Grapheme, Word
from ..errors import MissingSource, ScriptforgeError
from .common import GeneratedCorpus, finish_corpus, load_pool

MODES = ("random", "shift", "rotate", "sequential")
SPECIALIZATIONS = ("split", "uniform", "blank_gradient", "learned")

EXTRACTION_ATTEMPT_FACTOR = 200


@dataclass(frozen=True)
class GrilleConfig:
    rows: int = 48
    cols: int = 12
    n_holes: int = 6
    blank_prob: float = 0.30
    column_skew_alpha: float = 0.0
    mode: str = "random"
    specialization: str = "split"
    jump_prob: float = 0.0
    bridge_zone: int = 2
    blank_low: float = 0.1
    blank_high: float = 0.6
    source: Corpus | None = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("table dimensions must be positive")
        if self.n_holes < 1 or self.n_holes > self.cols:
            raise ValueError("n_holes must be in [1, cols]")
        if not 0.0 <= self.blank_prob <= 1.0:
            raise ValueError("blank_prob must be in [0, 1]")
        if not 0.0 <= self.jump_prob <= 1.0:
            raise ValueError("jump_prob must be in [0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.specialization not in SPECIALIZATIONS:
            raise ValueError(f"unknown specialization {self.specialization!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["source"] = self.source.name if self.source else None
        return d


@dataclass(frozen=True)
class GrilleTable:
    """rows x cols of graphemes or None (blank)."""

    grid: tuple[tuple[Grapheme | None, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0])

    def cell(self, r: int, c: int) -> Grapheme | None:
        return self.grid[r][c]


def _skewed_column(
    pool: list[Grapheme],
    skew: float,
    blank_prob: float,
    rows: int,
    np_rng: np.random.Generator,
) -> list[Grapheme | None]:
    """One column: blank with blank_prob, else Zipf(skew)-weighted pool draw."""
    weights = np.arange(1, len(pool) + 1, dtype=float) ** (-skew)
    weights /= weights.sum()
    idx = np_rng.choice(len(pool), size=rows, p=weights)
    blanks = np_rng.random(rows) < blank_prob
    return [None if b else pool[i] for i, b in zip(idx, blanks)]


def _learned_column(
    source: Corpus, col: int, rows: int, np_rng: np.random.Generator
) -> list[Grapheme | None]:
    """Column from the source's grapheme-at-position-col distribution.

    Words shorter than the position contribute blank mass, so sampled rows
    reproduce the source's length profile when read up to the first blank.
    """
    counts: dict[Grapheme, int] = {}
    blanks = 0
    for word in source.words():
        if len(word) > col:
            counts[word[col]] = counts.get(word[col], 0) + 1
        else:
            blanks += 1
    items = sorted(counts.items())
    entries: list[Grapheme | None] = [g for g, _ in items] + [None]
    weights = np.asarray([c for _, c in items] + [blanks], dtype=float)
    weights /= weights.sum()
    idx = np_rng.choice(len(entries), size=rows, p=weights)
    return [entries[i] for i in idx]


def build_grille_table(cfg: GrilleConfig, seed: int) -> GrilleTable:
    """Fill the table column by column per the configured specialization."""
    np_rng = np.random.default_rng(seed)
    rng = random.Random(seed)
    columns: list[list[Grapheme | None]] = []

    if cfg.specialization == "learned":
        if cfg.source is None:
            raise MissingSource("learned specialization needs a source corpus")
        for c in range(cfg.cols):
            columns.append(_learned_column(cfg.source, c, cfg.rows, np_rng))
    else:
        bridge = load_pool("bridge")[: cfg.bridge_zone]
        start = [g for g in load_pool("start_class") if g not in bridge]
        end = [g for g in load_pool("end_class") if g not in bridge]
        mid = [g for g in load_pool("mid_class") if g not in bridge]
        rng.shuffle(start)
        rng.shuffle(end)
        if cfg.specialization == "split":
            # shared graphemes sit at the top of both skew orders, so skew
            # concentrates both halves onto the same dominant graphemes
            prefix_pool = bridge + start
            suffix_pool = bridge + end
        else:
            shared = sorted(set(start) | set(end) | set(mid) | set(bridge))
            rng.shuffle(shared)
            prefix_pool = suffix_pool = shared
        half = (cfg.cols + 1) // 2
        for c in range(cfg.cols):
            pool = prefix_pool if c < half else suffix_pool
            if cfg.specialization == "blank_gradient":
                frac = c / max(cfg.cols - 1, 1)
                p_blank = cfg.blank_low + frac * (cfg.blank_high - cfg.blank_low)
            else:
                p_blank = cfg.blank_prob
            columns.append(
                _skewed_column(pool, cfg.column_skew_alpha, p_blank, cfg.rows, np_rng)
            )

    grid = tuple(
        tuple(columns[c][r] for c in range(cfg.cols)) for r in range(cfg.rows)
    )
    return GrilleTable(grid=grid)


def _choose_holes(cfg: GrilleConfig, rng: random.Random) -> tuple[int, ...]:
    """One hole per column stratum, spreading holes across the table width."""
    bounds = np.linspace(0, cfg.cols, cfg.n_holes + 1).astype(int)
    holes = []
    for i in range(cfg.n_holes):
        lo, hi = bounds[i], max(bounds[i + 1], bounds[i] + 1)
        holes.append(rng.randrange(lo, min(hi, cfg.cols)))
    return tuple(sorted(set(holes)))


def _unique_rotations(mask: tuple[int, ...], cols: int) -> int:
    pattern = [False] * cols
    for h in mask:
        pattern[h] = True
    for period in range(1, cols + 1):
        if cols % period == 0 and pattern == pattern[period:] + pattern[:period]:
            return period
    return cols


def generate_grille_corpus(cfg: GrilleConfig, n_words: int, seed: int) -> GeneratedCorpus:
    """Extract n_words through the grille under the configured mode.

    Empty extractions (all holes blank) are discarded and regenerated so
    the word count is exact.
    """
    if n_words < 1:
        raise ValueError("n_words must be >= 1")
    rng = random.Random(seed)
    table = build_grille_table(cfg, seed)
    holes = _choose_holes(cfg, rng)
    words: list[Word] = []
    attempts = 0
    max_attempts = EXTRACTION_ATTEMPT_FACTOR * n_words

    if cfg.mode == "sequential":
        row = 0
        while len(words) < n_words:
            attempts += 1
            if attempts > max_attempts:
                raise ScriptforgeError("grille keeps extracting empty words")
            cells = table.grid[row % cfg.rows]
            picked: list[Grapheme] = []
            for g in cells:
                if g is None:
                    break
                picked.append(g)
            if picked:
                words.append(tuple(picked))
            if cfg.jump_prob > 0 and rng.random() < cfg.jump_prob:
                row = rng.randrange(cfg.rows)
            else:
                row += 1
    else:
        rotations = _unique_rotations(holes, cfg.cols)
        t = 0
        while len(words) < n_words:
            attempts += 1
            if attempts > max_attempts:
                raise ScriptforgeError("grille keeps extracting empty words")
            if cfg.mode == "random":
                row, offset = rng.randrange(cfg.rows), 0
            elif cfg.mode == "shift":
                row, offset = rng.randrange(cfg.rows), t % cfg.cols
            else:  # rotate
                row, offset = t % cfg.rows, t % rotations
            cells = table.grid[row]
            picked = [
                cells[(h + offset) % cfg.cols]
                for h in holes
                if cells[(h + offset) % cfg.cols] is not None
            ]
            t += 1
            if picked:
                words.append(tuple(picked))

    return finish_corpus(
        words,
        rng,
        name=f"grille-{cfg.specialization}-{cfg.mode}",
        provenance={"config": cfg.to_dict(), "seed": seed},
    )
