"""Genetic optimization of whole alphabets.

Determinism contract: one root seed drives everything.  Per-generation and
per-individual RNGs are derived with a fixed 64-bit splitmix chain
(:func:`derive_seed`), selection and mutation draw from the generation RNG in
a fixed documented order, and fitness evaluation is pure, so running with a
thread pool cannot perturb the results.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .alphabet import (
    Alphabet,
    AlphabetEvaluator,
    FitnessWeights,
    alphabet_to_dict,
    assign_greedy,
)
from .corpus import CorpusStats
from .glyph import (
    GLYPH_MUTATION_KINDS,
    GenerationConfig,
    generate_glyph,
    mutate_glyph,
)
from .metrics import MetricParams

MUTATION_KINDS = (*GLYPH_MUTATION_KINDS, "swap_assignment", "replace_glyph")

DEFAULT_MUTATION_RATES = {
    "add_point": 0.15,
    "remove_point": 0.15,
    "move_point": 0.45,
    "mirror_x": 0.08,
    "mirror_y": 0.08,
    "swap_assignment": 0.25,
    "replace_glyph": 0.08,
}

_MASK64 = (1 << 64) - 1
_SALT_SEED_POOL = 0x5EED
_SALT_POOL_ASSIGN = 0xA551
_SALT_GENERATION = 0x6E57EF


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(root: int, *salts: int) -> int:
    """Mix a root seed with integer salts via a splitmix64 chain."""
    h = root & _MASK64
    for s in salts:
        h = _splitmix64(h ^ (s & _MASK64))
    return h


@dataclass(frozen=True)
class EvolutionConfig:
    population_size: int = 64
    generations: int = 200
    elitism_count: int = 2
    tournament_size: int = 3
    seed: int = 0
    mutation_rates: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_MUTATION_RATES))
    weights: FitnessWeights = FitnessWeights()
    params: MetricParams = MetricParams()
    generation: GenerationConfig = GenerationConfig()
    crossover_rate: float = 0.0
    stagnation_stop: int | None = None
    checkpoint_every: int = 0

    def validate(self) -> None:
        problems: list[str] = []
        if self.population_size < 2:
            problems.append("population_size: must be at least 2")
        if self.generations < 0:
            problems.append("generations: must be nonnegative")
        if not 0 <= self.elitism_count <= self.population_size:
            problems.append("elitism_count: must be between 0 and population_size")
        if not 2 <= self.tournament_size <= self.population_size:
            problems.append("tournament_size: must be between 2 and population_size")
        if not 0 <= self.seed < (1 << 64):
            problems.append("seed: must fit in 64 unsigned bits")
        for kind, rate in self.mutation_rates.items():
            if kind not in MUTATION_KINDS:
                problems.append(f"mutation_rates: unknown kind {kind!r}")
            elif not 0.0 <= rate <= 1.0:
                problems.append(f"mutation_rates[{kind}]: {rate} is outside [0, 1]")
        if not 0.0 <= self.crossover_rate <= 1.0:
            problems.append("crossover_rate: must be in [0, 1]")
        if self.stagnation_stop is not None and self.stagnation_stop < 1:
            problems.append("stagnation_stop: must be at least 1 when set")
        if self.checkpoint_every < 0:
            problems.append("checkpoint_every: must be nonnegative")
        for name in ("weights", "params", "generation"):
            try:
                getattr(self, name).validate()
            except ValueError as exc:
                problems.append(f"{name}: {exc}")
        if problems:
            raise ValueError("; ".join(problems))

    def to_dict(self) -> dict:
        return {
            "population_size": self.population_size,
            "generations": self.generations,
            "elitism_count": self.elitism_count,
            "tournament_size": self.tournament_size,
            "seed": self.seed,
            "mutation_rates": dict(self.mutation_rates),
            "weights": self.weights.to_dict(),
            "params": self.params.to_dict(),
            "generation": self.generation.to_dict(),
            "crossover_rate": self.crossover_rate,
            "stagnation_stop": self.stagnation_stop,
            "checkpoint_every": self.checkpoint_every,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvolutionConfig":
        kwargs: dict = {}
        for key in (
            "population_size",
            "generations",
            "elitism_count",
            "tournament_size",
            "seed",
            "crossover_rate",
            "stagnation_stop",
            "checkpoint_every",
        ):
            if key in data:
                kwargs[key] = data[key]
        if "mutation_rates" in data:
            kwargs["mutation_rates"] = dict(data["mutation_rates"])
        if "weights" in data:
            kwargs["weights"] = FitnessWeights.from_dict(data["weights"])
        if "params" in data:
            kwargs["params"] = MetricParams.from_dict(data["params"])
        if "generation" in data:
            kwargs["generation"] = GenerationConfig.from_dict(data["generation"])
        return cls(**kwargs)


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_total: float
    mean_total: float
    applied: dict[str, int]
    skipped: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "best": self.best_total,
            "mean": self.mean_total,
            "mutations": {"applied": dict(self.applied), "skipped": dict(self.skipped)},
        }


@dataclass(frozen=True)
class EvolutionReport:
    best: Alphabet
    history: list[GenerationRecord]
    seed: int
    config: EvolutionConfig
    corpus_digest: str

    def to_dict(self) -> dict:
        assert self.best.score is not None
        return {
            "seed": self.seed,
            "config": self.config.to_dict(),
            "corpus_digest": self.corpus_digest,
            "generations_run": len(self.history),
            "best_score": self.best.score.to_dict(),
            "history": [r.to_dict() for r in self.history],
            "best": alphabet_to_dict(self.best, self.config.weights, self.corpus_digest),
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    def save_history_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("generation,best,mean\n")
            for r in self.history:
                fh.write(f"{r.generation},{r.best_total!r},{r.mean_total!r}\n")


def _zero_counts() -> dict[str, int]:
    return {kind: 0 for kind in MUTATION_KINDS}


def seed_population(config: EvolutionConfig, stats: CorpusStats) -> list[Alphabet]:
    """population_size greedy alphabets over independently generated pools."""
    out = []
    for i in range(config.population_size):
        pool = [
            generate_glyph(derive_seed(config.seed, _SALT_SEED_POOL, i, j), config.generation)
            for j in range(len(stats.letters))
        ]
        out.append(assign_greedy(pool, stats, config.weights, config.params))
    return out


def population_from_pool(pool: list, stats: CorpusStats, config: EvolutionConfig) -> list[Alphabet]:
    """population_size random injective assignments drawn from a fixed pool."""
    letters = sorted(stats.letters)
    if len(pool) < len(letters):
        raise ValueError(f"pool has {len(pool)} glyphs for {len(letters)} letters")
    ordered = sorted(pool, key=lambda g: g.id)
    out = []
    for i in range(config.population_size):
        rng = random.Random(derive_seed(config.seed, _SALT_POOL_ASSIGN, i))
        chosen = rng.sample(ordered, len(letters))
        out.append(Alphabet(dict(zip(letters, chosen))))
    return out


def _crossover_mappings(ma: dict, mb: dict, rng: random.Random) -> dict:
    # Uniform assignment crossover with swap repair, so the child stays a
    # bijection even when the parents assign the same glyph to different
    # letters.
    child = dict(ma)
    by_id = {g.id: letter for letter, g in child.items()}
    for letter in sorted(child):
        gb = mb.get(letter)
        if gb is None or gb.id == child[letter].id or rng.random() >= 0.5:
            continue
        holder = by_id.get(gb.id)
        if holder is None:
            del by_id[child[letter].id]
            child[letter] = gb
            by_id[gb.id] = letter
        else:
            child[letter], child[holder] = child[holder], child[letter]
            by_id[child[letter].id] = letter
            by_id[child[holder].id] = holder
    return child


def mutate_alphabet(
    a: Alphabet,
    config: EvolutionConfig,
    rng: random.Random,
    applied: dict[str, int] | None = None,
    skipped: dict[str, int] | None = None,
) -> Alphabet:
    """Roll each mutation kind once, in a fixed order.

    Glyph-level kinds hit one uniformly chosen letter; swap_assignment
    exchanges the glyphs of two distinct letters; replace_glyph regenerates
    one letter's glyph from scratch.  Ops that cannot apply are counted in
    ``skipped`` rather than failing.
    """
    applied = applied if applied is not None else _zero_counts()
    skipped = skipped if skipped is not None else _zero_counts()
    mapping = dict(a.mapping)
    letters = sorted(mapping)
    for kind in MUTATION_KINDS:
        rate = config.mutation_rates.get(kind, 0.0)
        if rng.random() >= rate:
            continue
        if kind == "swap_assignment":
            if len(letters) < 2:
                skipped[kind] += 1
                continue
            i, j = rng.sample(range(len(letters)), 2)
            la, lb = letters[i], letters[j]
            mapping[la], mapping[lb] = mapping[lb], mapping[la]
            applied[kind] += 1
        elif kind == "replace_glyph":
            letter = letters[rng.randrange(len(letters))]
            mapping[letter] = generate_glyph(rng.getrandbits(63), config.generation)
            applied[kind] += 1
        else:
            letter = letters[rng.randrange(len(letters))]
            outcome = mutate_glyph(mapping[letter], kind, rng)
            if outcome.applied:
                mapping[letter] = outcome.glyph
                applied[kind] += 1
            else:
                skipped[kind] += 1
    return Alphabet(mapping)


def _tournament(scored: list[Alphabet], config: EvolutionConfig, rng: random.Random) -> Alphabet:
    contestants = rng.sample(range(len(scored)), config.tournament_size)
    best = min(contestants, key=lambda i: (-scored[i].score.total, i))  # type: ignore[union-attr]
    return scored[best]


def _score_all(population: list[Alphabet], evaluator: AlphabetEvaluator, threads: int) -> list[Alphabet]:
    pending = [a for a in population if a.score is None]
    if pending and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scored = dict(zip(map(id, pending), pool.map(evaluator.scored, pending)))
    else:
        scored = {id(a): evaluator.scored(a) for a in pending}
    return [scored.get(id(a), a) for a in population]


def step_generation(
    population: list[Alphabet],
    config: EvolutionConfig,
    stats: CorpusStats,
    rng: random.Random,
    *,
    evaluator: AlphabetEvaluator | None = None,
    applied: dict[str, int] | None = None,
    skipped: dict[str, int] | None = None,
    threads: int = 1,
) -> list[Alphabet]:
    """One generation: carry elites, then tournament-select and mutate.

    Elites are the top ``elitism_count`` individuals (ties broken by index)
    and are carried over as the same immutable objects.  Returns a fully
    scored population of the same size.
    """
    evaluator = evaluator or AlphabetEvaluator(stats, config.weights, config.params)
    scored = _score_all(population, evaluator, threads)
    # A step that cannot change any individual is the identity: either every
    # slot is carried by elitism, or there is no crossover and every mutation
    # rate is zero.  Return the scored input as-is (same objects, same order).
    if config.elitism_count >= len(scored):
        return scored
    if config.crossover_rate <= 0.0 and not any(
        rate > 0.0 for rate in config.mutation_rates.values()
    ):
        return scored
    order = sorted(range(len(scored)), key=lambda i: (-scored[i].score.total, i))  # type: ignore[union-attr]
    elites = [scored[i] for i in order[: config.elitism_count]]
    children: list[Alphabet] = []
    while len(elites) + len(children) < len(scored):
        parent = _tournament(scored, config, rng)
        base = parent
        if config.crossover_rate > 0.0 and rng.random() < config.crossover_rate:
            other = _tournament(scored, config, rng)
            base = Alphabet(_crossover_mappings(parent.mapping, other.mapping, rng))
        children.append(mutate_alphabet(base, config, rng, applied, skipped))
    return elites + _score_all(children, evaluator, threads)


def evolve(
    config: EvolutionConfig,
    stats: CorpusStats,
    initial: list[Alphabet] | None = None,
    *,
    threads: int = 1,
    checkpoint_dir=None,
) -> EvolutionReport:
    """Run the configured number of generations and report the best alphabet.

    With any elitism the per-generation best never decreases.  An optional
    stagnation stop ends the run after N generations without improvement;
    the history then covers only the generations actually run.
    """
    config.validate()
    if config.generations > 0 and not any(r > 0.0 for r in config.mutation_rates.values()):
        raise ValueError("mutation_rates: at least one rate must be positive to evolve")
    evaluator = AlphabetEvaluator(stats, config.weights, config.params)
    population = initial if initial is not None else seed_population(config, stats)
    if len(population) != config.population_size:
        raise ValueError(
            f"initial population has {len(population)} individuals, config wants {config.population_size}"
        )
    population = _score_all(population, evaluator, threads)
    best = max(population, key=lambda a: a.score.total)  # type: ignore[union-attr]
    history: list[GenerationRecord] = []
    stale = 0
    for gen in range(1, config.generations + 1):
        rng = random.Random(derive_seed(config.seed, _SALT_GENERATION, gen))
        applied = _zero_counts()
        skipped = _zero_counts()
        population = step_generation(
            population, config, stats, rng,
            evaluator=evaluator, applied=applied, skipped=skipped, threads=threads,
        )
        totals = [a.score.total for a in population]  # type: ignore[union-attr]
        gen_best = max(totals)
        history.append(GenerationRecord(gen, gen_best, sum(totals) / len(totals), applied, skipped))
        if gen_best > best.score.total:  # type: ignore[union-attr]
            best = population[totals.index(gen_best)]
            stale = 0
        else:
            stale += 1
        if config.checkpoint_every and checkpoint_dir is not None and gen % config.checkpoint_every == 0:
            _write_checkpoint(checkpoint_dir, gen, config, population)
        if config.stagnation_stop is not None and stale >= config.stagnation_stop:
            break
    return EvolutionReport(best, history, config.seed, config, stats.digest())


def _write_checkpoint(checkpoint_dir, gen: int, config: EvolutionConfig, population: list[Alphabet]) -> None:
    import os

    path = os.path.join(str(checkpoint_dir), f"checkpoint_{gen:05d}.json")
    payload = {
        "generation": gen,
        "seed": config.seed,
        "population": [alphabet_to_dict(a) for a in population],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
