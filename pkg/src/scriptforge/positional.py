"""Positional grapheme structure: classes, extremity, MI decomposition, shape.

Every grapheme that occurs word-initially or word-finally gets a positional
class under a count-ratio rule. On top of the classes sit four diagnostics:
the polarization index, the end-class-to-start-class boundary transition
rate, extreme one-sided ratios, and a decomposition of cross-boundary MI
into the part carried by class labels and the residual carried by grapheme
identity within class. Boundary rank-frequency shape is classified as
Zipfian, Intermediate, or Plateau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import BoundaryTransitionTable, conditional_entropy, mutual_information, target_entropy
from .corpus import Corpus, Grapheme, shuffle_words
from .errors import NoGraphemes, NoTransitions, NoWords

START = "start"
END = "end"
AMBIGUOUS = "ambiguous"

# Sig4 shape thresholds: Zipfian needs a good power-law fit AND high
# dispersion; a near-flat distribution is a plateau.
ZIPF_MIN_R2 = 0.85
ZIPF_MIN_CV = 0.8
PLATEAU_MAX_CV = 0.35

SHAPE_ZIPFIAN = "Zipfian"
SHAPE_INTERMEDIATE = "Intermediate"
SHAPE_PLATEAU = "Plateau"


@dataclass(frozen=True)
class PositionalClassification:
    """Word-initial/word-final occurrence counts and class labels."""

    initial_counts: dict[Grapheme, int]
    final_counts: dict[Grapheme, int]
    labels: dict[Grapheme, str]
    threshold: float = 2.0

    def label(self, g: Grapheme) -> str:
        return self.labels.get(g, AMBIGUOUS)

    def count(self, label: str) -> int:
        return sum(1 for v in self.labels.values() if v == label)

    @property
    def start_count(self) -> int:
        return self.count(START)

    @property
    def end_count(self) -> int:
        return self.count(END)

    @property
    def ambiguous_count(self) -> int:
        return self.count(AMBIGUOUS)

    def to_record(self) -> dict:
        return {
            "start_preferring": self.start_count,
            "end_preferring": self.end_count,
            "ambiguous": self.ambiguous_count,
            "threshold": self.threshold,
        }


def classify(c: Corpus, threshold: float = 2.0) -> PositionalClassification:
    """Label every boundary-occurring grapheme start/end/ambiguous."""
    initial: dict[Grapheme, int] = {}
    final: dict[Grapheme, int] = {}
    for word in c.words():
        initial[word[0]] = initial.get(word[0], 0) + 1
        final[word[-1]] = final.get(word[-1], 0) + 1
    labels: dict[Grapheme, str] = {}
    for g in set(initial) | set(final):
        i = initial.get(g, 0)
        f = final.get(g, 0)
        if i >= threshold * f:
            labels[g] = START
        elif f >= threshold * i:
            labels[g] = END
        else:
            labels[g] = AMBIGUOUS
    return PositionalClassification(
        initial_counts=initial, final_counts=final, labels=labels, threshold=threshold
    )


def polarization_index(pc: PositionalClassification) -> float:
    """Fraction of classified graphemes that are clearly start or end."""
    total = len(pc.labels)
    if total == 0:
        raise NoGraphemes("classification is empty")
    return (pc.start_count + pc.end_count) / total


def end_to_start_rate(c: Corpus, pc: PositionalClassification) -> float:
    """Percent of boundary transitions going end-class -> start-class."""
    hits = 0
    total = 0
    for sentence in c.sentences:
        for i in range(len(sentence) - 1):
            total += 1
            if (
                pc.label(sentence[i][-1]) == END
                and pc.label(sentence[i + 1][0]) == START
            ):
                hits += 1
    if total == 0:
        raise NoTransitions("corpus has no boundary transitions")
    return 100.0 * hits / total


@dataclass(frozen=True)
class ExtremeRatio:
    grapheme: Grapheme
    ratio: float
    dominant_side: str  # "initial" or "final"
    initial: int
    final: int


def extreme_ratios(
    pc: PositionalClassification,
    ratio_threshold: float = 100.0,
    support_floor: int = 20,
) -> list[ExtremeRatio]:
    """Graphemes whose positional ratio clears the threshold.

    Ratio is max(initial, final) / max(min(initial, final), 1); the zero
    guard keeps one-sided graphemes finite. The support floor excludes
    rare-grapheme noise.
    """
    out = []
    for g in set(pc.initial_counts) | set(pc.final_counts):
        i = pc.initial_counts.get(g, 0)
        f = pc.final_counts.get(g, 0)
        hi, lo = max(i, f), min(i, f)
        ratio = hi / max(lo, 1)
        if ratio >= ratio_threshold and hi >= support_floor:
            out.append(
                ExtremeRatio(
                    grapheme=g,
                    ratio=ratio,
                    dominant_side="initial" if i > f else "final",
                    initial=i,
                    final=f,
                )
            )
    out.sort(key=lambda e: (-e.ratio, e.grapheme))
    return out


def bilateral_extremity(
    pc: PositionalClassification,
    ratio_threshold: float = 100.0,
    support_floor: int = 20,
) -> bool:
    """True iff extreme ratios occur on both the initial and final side."""
    sides = {e.dominant_side for e in extreme_ratios(pc, ratio_threshold, support_floor)}
    return "initial" in sides and "final" in sides


def _grapheme_pair_table(c: Corpus) -> BoundaryTransitionTable:
    from .boundary import extract_transitions

    return extract_transitions(c, 1)


def _class_table(
    t: BoundaryTransitionTable, pc: PositionalClassification
) -> BoundaryTransitionTable:
    """Coarsen a grapheme-level table to class-label pairs."""
    joint: dict = {}
    for (cond, tgt), cnt in t.joint.items():
        key = ((pc.label(cond[0]),), (pc.label(tgt[0]),))
        joint[key] = joint.get(key, 0) + cnt
    return BoundaryTransitionTable(n=1, joint=joint, total=t.total)


@dataclass(frozen=True)
class MIDecomposition:
    """Split of cross-boundary MI into class-label and within-class parts."""

    mi_total: float
    mi_class: float
    mi_within: float
    class_pct: float
    mi_total_shuf: float
    mi_class_shuf: float
    mi_within_shuf: float

    @property
    def shuffle_retention_pct(self) -> float:
        return 100.0 * self.mi_total_shuf / self.mi_total if self.mi_total > 0 else 0.0

    def to_record(self) -> dict:
        return {
            "mi_total": self.mi_total,
            "mi_class": self.mi_class,
            "mi_within": self.mi_within,
            "class_pct": self.class_pct,
            "mi_total_shuf": self.mi_total_shuf,
            "mi_class_shuf": self.mi_class_shuf,
            "mi_within_shuf": self.mi_within_shuf,
            "shuffle_retention_pct": self.shuffle_retention_pct,
        }


def mi_decomposition(
    c: Corpus,
    pc: PositionalClassification | None = None,
    reps: int = 10,
    seed: int = 0,
) -> MIDecomposition:
    """Total, class-level, and within-class MI, plus shuffled baselines.

    The class table coarsens the same joint table, so the identity
    mi_class + mi_within = mi_total holds by construction. Shuffled values
    are means over word-order-shuffled copies; shuffling preserves the
    per-sentence word multiset, so the classification carries over.
    """
    if pc is None:
        pc = classify(c)
    t = _grapheme_pair_table(c)
    if t.total < 1:
        raise NoTransitions("corpus has no boundary transitions")
    mi_total = mutual_information(t)
    mi_class = mutual_information(_class_table(t, pc))
    shuf_tot, shuf_cls = [], []
    for r in range(reps):
        ts = _grapheme_pair_table(shuffle_words(c, seed=seed * 100_003 + r))
        shuf_tot.append(mutual_information(ts))
        shuf_cls.append(mutual_information(_class_table(ts, pc)))
    mts = float(np.mean(shuf_tot))
    mcs = float(np.mean(shuf_cls))
    return MIDecomposition(
        mi_total=mi_total,
        mi_class=mi_class,
        mi_within=mi_total - mi_class,
        class_pct=100.0 * mi_class / mi_total if mi_total > 0 else 0.0,
        mi_total_shuf=mts,
        mi_class_shuf=mcs,
        mi_within_shuf=mts - mcs,
    )


@dataclass(frozen=True)
class BoundaryDistribution:
    """Rank-frequency profile of boundary graphemes with a shape verdict."""

    position: str  # "initial", "final", or "combined"
    graphemes: tuple[Grapheme, ...]  # sorted by frequency, descending
    frequencies: tuple[int, ...]
    r_squared: float
    slope: float
    cv: float
    shape: str

    def rank_freq_rows(self) -> list[tuple[int, Grapheme, int]]:
        return [(r + 1, g, f) for r, (g, f) in enumerate(zip(self.graphemes, self.frequencies))]

    def to_record(self) -> dict:
        return {
            "position": self.position,
            "r_squared": self.r_squared,
            "slope": self.slope,
            "cv": self.cv,
            "shape": self.shape,
            "n_graphemes": len(self.graphemes),
        }


def _powerlaw_fit(freqs: np.ndarray) -> tuple[float, float]:
    """(r_squared, slope) of the log-log rank-frequency regression."""
    if len(freqs) < 2:
        return 0.0, 0.0
    x = np.log(np.arange(1, len(freqs) + 1, dtype=float))
    y = np.log(freqs.astype(float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) @ (y - y.mean())))
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - ss_res / ss_tot
    return r2, float(slope)


def classify_shape(r_squared: float, cv: float) -> str:
    if r_squared > ZIPF_MIN_R2 and cv > ZIPF_MIN_CV:
        return SHAPE_ZIPFIAN
    if cv < PLATEAU_MAX_CV:
        return SHAPE_PLATEAU
    return SHAPE_INTERMEDIATE


def boundary_distribution(c: Corpus, position: str = "combined") -> BoundaryDistribution:
    """Rank-frequency distribution of graphemes at word boundaries.

    ``combined`` pools initial and final occurrences (the default used by
    the shape signature); per-position variants serve diagnostics. CV is
    computed over observed boundary graphemes only.
    """
    if position not in ("initial", "final", "combined"):
        raise ValueError(f"unknown position {position!r}")
    counts: dict[Grapheme, int] = {}
    n_words = 0
    for word in c.words():
        n_words += 1
        if position in ("initial", "combined"):
            counts[word[0]] = counts.get(word[0], 0) + 1
        if position in ("final", "combined"):
            counts[word[-1]] = counts.get(word[-1], 0) + 1
    if n_words == 0:
        raise NoWords("corpus has no words")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    freqs = np.asarray([f for _, f in ranked], dtype=float)
    r2, slope = _powerlaw_fit(freqs)
    cv = float(freqs.std() / freqs.mean()) if freqs.mean() > 0 else 0.0
    return BoundaryDistribution(
        position=position,
        graphemes=tuple(g for g, _ in ranked),
        frequencies=tuple(int(f) for f in freqs),
        r_squared=r2,
        slope=slope,
        cv=cv,
        shape=classify_shape(r2, cv),
    )
