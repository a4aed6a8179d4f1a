"""Letter-to-glyph assignments and whole-alphabet scoring.

The total score combines four normalized terms: mean glyph fitness, mean
pairwise dissimilarity, frequency-weighted fitness and the connection score.
All scoring funnels through :class:`AlphabetEvaluator` so that greedy search,
exhaustive search and the genetic algorithm see bit-identical numbers for the
same assignment.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .corpus import CorpusStats
from .glyph import Glyph, glyph_from_dict, glyph_to_dict, validate_glyph
from .metrics import DEGENERATE_LENGTH, DegenerateGlyphError, GlyphWeights, MetricParams, _compare_form

EXHAUSTIVE_MAX_LETTERS = 8
EXHAUSTIVE_MAX_POOL = 10


class LetterCoverageError(ValueError):
    """Raised when the corpus references a letter the alphabet does not map."""


@dataclass(frozen=True)
class FitnessWeights:
    """Term weights for the alphabet total plus the per-glyph penalty weights."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    delta: float = 1.0
    w_complexity: float = 1.0
    w_sharp: float = 1.0
    w_points: float = 0.1

    def glyph_weights(self) -> GlyphWeights:
        return GlyphWeights(self.w_complexity, self.w_sharp, self.w_points)

    def validate(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        self.glyph_weights().validate()

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "delta": self.delta,
            "w_complexity": self.w_complexity,
            "w_sharp": self.w_sharp,
            "w_points": self.w_points,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FitnessWeights":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


@dataclass(frozen=True)
class AlphabetScore:
    sum_fitness: float
    sum_dissimilarity: float
    freq_weighted_fitness: float
    connection_score: float
    total: float

    def to_dict(self) -> dict:
        return {
            "sum_fitness": self.sum_fitness,
            "sum_dissimilarity": self.sum_dissimilarity,
            "freq_weighted_fitness": self.freq_weighted_fitness,
            "connection_score": self.connection_score,
            "total": self.total,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlphabetScore":
        return cls(**{k: float(data[k]) for k in ("sum_fitness", "sum_dissimilarity", "freq_weighted_fitness", "connection_score", "total")})


@dataclass(frozen=True)
class Alphabet:
    """A bijective letter -> glyph mapping with an optional cached score."""

    mapping: dict[str, Glyph]
    score: AlphabetScore | None = None

    def letters(self) -> list[str]:
        return sorted(self.mapping)

    def with_score(self, score: AlphabetScore | None) -> "Alphabet":
        return replace(self, score=score)


def validate_alphabet(a: Alphabet) -> list[str]:
    """One finding per violated invariant; empty means valid."""
    findings: list[str] = []
    if not a.mapping:
        findings.append("mapping: alphabet has no letters")
    seen: dict[str, str] = {}
    for letter in a.letters():
        gid = a.mapping[letter].id
        if gid in seen:
            findings.append(f"mapping: glyph {gid} assigned to both {seen[gid]!r} and {letter!r}")
        seen[gid] = letter
    for letter in a.letters():
        for finding in validate_glyph(a.mapping[letter]):
            findings.append(f"glyph {letter!r}: {finding}")
    return findings


def connection_score(a: Alphabet, stats: CorpusStats) -> float:
    """Bigram-probability mass on adjacent pairs whose anchors meet.

    Sums P(x, y) over bigrams where the x glyph's end anchor equals the
    y glyph's start anchor; iterates bigrams in sorted order so the result
    does not depend on corpus insertion order.
    """
    total = 0.0
    mapping = a.mapping
    for (x, y), p in sorted(stats.bigram_prob.items()):
        gx = mapping.get(x)
        gy = mapping.get(y)
        if gx is None or gy is None:
            missing = x if gx is None else y
            raise LetterCoverageError(f"bigram ({x!r}, {y!r}) needs letter {missing!r}, which has no glyph")
        if gx.end_anchor == gy.start_anchor:
            total += p
    return total


def _combine(
    fs: list[float], ds: list[float], ps: list[float], conn: float, weights: FitnessWeights
) -> AlphabetScore:
    # Shared final arithmetic; every scoring path must go through here so the
    # same assignment always produces the same floats.
    sum_f = 0.0
    for f in fs:
        sum_f += f
    sum_d = 0.0
    for d in ds:
        sum_d += d
    fw = 0.0
    for f, p in zip(fs, ps):
        fw += f * p
    n = len(fs)
    n_pairs = n * (n - 1) // 2
    total = (
        weights.alpha * (sum_f / n)
        + (weights.beta * (sum_d / n_pairs) if n_pairs else 0.0)
        + weights.gamma * fw
        + weights.delta * conn
    )
    return AlphabetScore(sum_f, sum_d, fw, conn, total)


class AlphabetEvaluator:
    """Scores alphabets against one corpus, caching per-glyph work.

    Glyph descriptors (fitness, projected angle histogram) and pairwise
    dissimilarities are keyed by glyph content, so populations that share
    glyphs across individuals and generations pay for each shape once.
    """

    def __init__(
        self,
        stats: CorpusStats,
        weights: FitnessWeights = FitnessWeights(),
        params: MetricParams = MetricParams(),
    ):
        weights.validate()
        params.validate()
        self.stats = stats
        self.weights = weights
        self.params = params
        self._glyph_weights = weights.glyph_weights()
        self._entries: dict[Glyph, tuple[float, np.ndarray]] = {}
        self._pairs: dict[tuple[Glyph, Glyph], float] = {}

    def _entry(self, g: Glyph) -> tuple[float, np.ndarray]:
        entry = self._entries.get(g)
        if entry is None:
            p = self.params
            length, turning, sharp, hist = _kernels.path_descriptor(
                g.path.as_array(), p.segments_per_curve, p.bin_count, p.sharp_threshold
            )
            if length < DEGENERATE_LENGTH:
                raise DegenerateGlyphError(f"glyph {g.id}: arc length {length} is below {DEGENERATE_LENGTH}")
            w = self._glyph_weights
            fitness = math.exp(
                -(w.w_complexity * (turning / length) + w.w_sharp * sharp + w.w_points * g.interior_points)
            )
            entry = (fitness, _compare_form(hist))
            self._entries[g] = entry
        return entry

    def glyph_fitness(self, g: Glyph) -> float:
        return self._entry(g)[0]

    def dissimilarity(self, a: Glyph, b: Glyph) -> float:
        ga, gb = sorted((a, b), key=lambda g: (g.id, hash(g)))
        key = (ga, gb)
        d = self._pairs.get(key)
        if d is None:
            ha = self._entry(ga)[1]
            hb = self._entry(gb)[1]
            d = 0.5 * float(np.abs(ha - hb).sum())
            bonus = self.params.anchor_bonus
            if bonus:
                mismatch = (ga.start_anchor != gb.start_anchor) + (ga.end_anchor != gb.end_anchor)
                d += bonus * mismatch / 2.0
            self._pairs[key] = d
        return d

    def score(self, a: Alphabet) -> AlphabetScore:
        if not a.mapping:
            raise ValueError("cannot score an empty alphabet")
        missing = [
            l for l in self.stats.letters if self.stats.letter_freq[l] > 0.0 and l not in a.mapping
        ]
        if missing:
            raise LetterCoverageError(f"corpus letters with no glyph: {missing}")
        letters = a.letters()
        glyphs = [a.mapping[l] for l in letters]
        fs = [self._entry(g)[0] for g in glyphs]
        ds = [
            self.dissimilarity(glyphs[i], glyphs[j])
            for i in range(len(glyphs))
            for j in range(i + 1, len(glyphs))
        ]
        ps = [self.stats.letter_freq.get(l, 0.0) for l in letters]
        conn = connection_score(a, self.stats)
        return _combine(fs, ds, ps, conn, self.weights)

    def scored(self, a: Alphabet) -> Alphabet:
        return a.with_score(self.score(a))


def alphabet_fitness(
    a: Alphabet,
    stats: CorpusStats,
    weights: FitnessWeights = FitnessWeights(),
    params: MetricParams = MetricParams(),
) -> AlphabetScore:
    """Score one alphabet; see AlphabetEvaluator for the cached variant."""
    return AlphabetEvaluator(stats, weights, params).score(a)


def assign_greedy(
    pool: list[Glyph],
    stats: CorpusStats,
    weights: FitnessWeights = FitnessWeights(),
    params: MetricParams = MetricParams(),
) -> Alphabet:
    """Pair frequent letters with fit glyphs.

    Letters are taken by descending probability (ties: letter order), glyphs
    by descending fitness (ties: glyph id).
    """
    if len(pool) < len(stats.letters):
        raise ValueError(f"pool has {len(pool)} glyphs for {len(stats.letters)} letters")
    evaluator = AlphabetEvaluator(stats, weights, params)
    letters = sorted(stats.letters, key=lambda l: (-stats.letter_freq[l], l))
    ranked = sorted(pool, key=lambda g: (-evaluator.glyph_fitness(g), g.id))
    mapping = {letter: g for letter, g in zip(letters, ranked)}
    return evaluator.scored(Alphabet(mapping))


def assign_exhaustive(
    pool: list[Glyph],
    stats: CorpusStats,
    weights: FitnessWeights = FitnessWeights(),
    params: MetricParams = MetricParams(),
) -> Alphabet:
    """Try every injective assignment and keep the best total.

    Guarded to at most 8 letters and 10 pool glyphs; beyond that, use the
    evolutionary search instead.  Exact ties keep the assignment whose glyph
    id tuple (in letter order) sorts first.
    """
    letters = sorted(stats.letters)
    if len(letters) > EXHAUSTIVE_MAX_LETTERS:
        raise ValueError(
            f"{len(letters)} letters exceed the exhaustive limit of {EXHAUSTIVE_MAX_LETTERS}; use evolve instead"
        )
    if len(pool) > EXHAUSTIVE_MAX_POOL:
        raise ValueError(
            f"pool of {len(pool)} exceeds the exhaustive limit of {EXHAUSTIVE_MAX_POOL}; use evolve instead"
        )
    if len(pool) < len(letters):
        raise ValueError(f"pool has {len(pool)} glyphs for {len(letters)} letters")

    evaluator = AlphabetEvaluator(stats, weights, params)
    ordered = sorted(pool, key=lambda g: g.id)
    n = len(letters)
    fs_pool = [evaluator.glyph_fitness(g) for g in ordered]
    d_pool = [[0.0] * len(ordered) for _ in ordered]
    for i in range(len(ordered)):
        for j in range(i + 1, len(ordered)):
            d = evaluator.dissimilarity(ordered[i], ordered[j])
            d_pool[i][j] = d
            d_pool[j][i] = d
    ps = [stats.letter_freq.get(l, 0.0) for l in letters]
    letter_idx = {l: i for i, l in enumerate(letters)}
    bigram_terms = [
        (letter_idx[x], letter_idx[y], p) for (x, y), p in sorted(stats.bigram_prob.items())
    ]
    starts = [int(g.start_anchor) for g in ordered]
    ends = [int(g.end_anchor) for g in ordered]

    best_total = -math.inf
    best_perm: tuple[int, ...] | None = None
    for perm in itertools.permutations(range(len(ordered)), n):
        conn = 0.0
        for xi, yi, p in bigram_terms:
            if ends[perm[xi]] == starts[perm[yi]]:
                conn += p
        fs = [fs_pool[i] for i in perm]
        ds = [d_pool[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n)]
        total = _combine(fs, ds, ps, conn, weights).total
        if total > best_total:
            best_total = total
            best_perm = perm
    assert best_perm is not None
    mapping = {letter: ordered[best_perm[i]] for i, letter in enumerate(letters)}
    return evaluator.scored(Alphabet(mapping))


def alphabet_to_dict(
    a: Alphabet,
    weights: FitnessWeights | None = None,
    corpus_digest: str | None = None,
) -> dict:
    return {
        "letters": {letter: glyph_to_dict(a.mapping[letter]) for letter in a.letters()},
        "score": a.score.to_dict() if a.score else None,
        "weights": weights.to_dict() if weights else None,
        "corpus_digest": corpus_digest,
    }


def alphabet_from_dict(data: dict) -> Alphabet:
    mapping = {letter: glyph_from_dict(g) for letter, g in data["letters"].items()}
    score = AlphabetScore.from_dict(data["score"]) if data.get("score") else None
    return Alphabet(mapping, score)


def save_alphabet(a: Alphabet, path, weights: FitnessWeights | None = None, corpus_digest: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(alphabet_to_dict(a, weights, corpus_digest), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_alphabet(path) -> Alphabet:
    with open(path, "r", encoding="utf-8") as fh:
        return alphabet_from_dict(json.load(fh))
