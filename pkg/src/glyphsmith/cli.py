"""Command-line front end.

Subcommands cover the full pipeline: ``analyze`` a corpus, ``generate`` a
glyph pool, ``evolve`` an alphabet against corpus statistics, ``eval`` a
saved alphabet, and ``render`` SVG output.  Every run is reproducible: all
randomness flows from an explicit ``--seed``, and option precedence is
command-line flag, then ``--config`` file value, then built-in default.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Sequence

from .alphabet import FitnessWeights, alphabet_fitness, load_alphabet, save_alphabet
from .corpus import DEFAULT_LETTERS, analyze_corpus, load_stats, save_stats, top_bigrams
from .evolve import EvolutionConfig, derive_seed, evolve, population_from_pool
from .glyph import GenerationConfig, Glyph, generate_glyph, glyph_from_dict, glyph_to_dict, validate_glyph
from .metrics import MetricParams
from .render import RenderOptions, render_alphabet, render_glyph, render_word

_MISSING = object()


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"config file {path}: expected a JSON object")
    return data


def _pick(flag_value, cfg: dict, key: str, default=_MISSING):
    """flag > config file > default; _MISSING default means required."""
    if flag_value is not None:
        return flag_value
    if key in cfg and cfg[key] is not None:
        return cfg[key]
    return default


def _write_text(path: str, text: str) -> None:
    p = Path(path)
    if p.parent != Path("."):
        p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def read_pool(path: str) -> list[Glyph]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise ValueError(f"pool file {path}: expected a JSON array of glyphs")
    return [glyph_from_dict(d) for d in data]


def write_pool(path: str, glyphs: Sequence[Glyph]) -> None:
    _write_text(path, json.dumps([glyph_to_dict(g) for g in glyphs], sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------- commands


def _cmd_analyze(args) -> int:
    cfg = _load_config(args.config)
    letters = _pick(args.letters, cfg, "letters", DEFAULT_LETTERS)
    top = _pick(args.top, cfg, "top", 5)
    if args.output is None:
        print("error: analyze needs --output for the statistics file", file=sys.stderr)
        return 2
    with open(args.input, encoding="utf-8") as fh:
        stats = analyze_corpus(fh, letters)
    save_stats(stats, args.output)
    if not args.quiet:
        print(
            f"letters {len(stats.letters)}  total_letters {stats.total_letters}  "
            f"total_bigrams {stats.total_bigrams}"
        )
        for letter in stats.letters:
            print(f"  {letter} {stats.letter_freq[letter]:.4f}")
        print(f"top {top} bigrams:")
        for (a, b), p in top_bigrams(stats, top):
            print(f"  {a}{b} {p:.4f}")
        print(f"wrote {args.output}")
    return 0


def _cmd_generate(args) -> int:
    cfg = _load_config(args.config)
    seed = _pick(args.seed, cfg, "seed")
    if seed is _MISSING:
        print("error: generate needs --seed (or a config file with one)", file=sys.stderr)
        return 2
    count = _pick(args.count, cfg, "count", 20)
    if count < 1:
        raise ValueError("count must be at least 1")
    if args.output is None:
        print("error: generate needs --output for the pool file", file=sys.stderr)
        return 2
    gen_cfg = GenerationConfig.from_dict(
        {
            "min_interior": _pick(args.min_interior, cfg, "min_interior", 1),
            "max_interior": _pick(args.max_interior, cfg, "max_interior", 6),
            "count_decay": _pick(args.count_decay, cfg, "count_decay", 0.7),
            "start_anchor": _pick(args.start_anchor, cfg, "start_anchor", None),
            "end_anchor": _pick(args.end_anchor, cfg, "end_anchor", None),
        }
    )
    gen_cfg.validate()
    glyphs = [generate_glyph(derive_seed(seed, i), gen_cfg) for i in range(count)]
    bad = [(g.id, problems) for g in glyphs if (problems := validate_glyph(g))]
    if bad:  # generation guarantees validity; a failure here is a real bug
        raise ValueError(f"generated invalid glyphs: {bad[:3]}")
    write_pool(args.output, glyphs)
    if not args.quiet:
        effective = {"seed": seed, "count": count, **gen_cfg.to_dict()}
        print(json.dumps(effective, sort_keys=True))
        print(f"wrote {count} glyphs to {args.output}")
    return 0


def _cmd_evolve(args) -> int:
    cfg = _load_config(args.config)
    config = EvolutionConfig.from_dict(cfg)
    overrides = {}
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
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    config = dataclasses.replace(config, **overrides)
    if args.seed is None and "seed" not in cfg:
        print("error: evolve needs --seed (or a config file with one)", file=sys.stderr)
        return 2
    if args.output is None:
        print("error: evolve needs --output (a directory)", file=sys.stderr)
        return 2
    if args.threads < 1:
        raise ValueError("threads must be at least 1")

    stats = load_stats(args.stats)
    initial = None
    if args.init is not None:
        initial = population_from_pool(read_pool(args.init), stats, config)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    checkpoint_dir = out if config.checkpoint_every > 0 else None
    report = evolve(config, stats, initial, threads=args.threads, checkpoint_dir=checkpoint_dir)
    save_alphabet(report.best, out / "alphabet.json", weights=config.weights, corpus_digest=stats.digest())
    report.save(out / "report.json")
    report.save_history_csv(out / "history.csv")
    if not args.quiet:
        best = report.best.score
        ran = len(report.history)
        print(f"ran {ran} generations; best total {best.total:.6f}")
        print(f"wrote {out / 'alphabet.json'}, {out / 'report.json'}, {out / 'history.csv'}")
    return 0


def _cmd_eval(args) -> int:
    cfg = _load_config(args.config)
    weights = FitnessWeights.from_dict(cfg["weights"]) if "weights" in cfg else FitnessWeights()
    params = MetricParams.from_dict(cfg["params"]) if "params" in cfg else MetricParams()
    alphabet = load_alphabet(args.alphabet)
    stats = load_stats(args.stats)
    score = alphabet_fitness(alphabet, stats, weights, params)
    for name, value in score.to_dict().items():
        print(f"{name:<22} {value:.4f}")
    return 0


def _cmd_render(args) -> int:
    cfg = _load_config(args.config)
    alphabet = load_alphabet(args.alphabet)
    options = RenderOptions(
        cell_size=_pick(args.cell, cfg, "cell", 256.0),
        stroke_width=_pick(args.stroke, cfg, "stroke", None) if (args.stroke is not None or "stroke" in cfg) else None,
        padding=_pick(args.padding, cfg, "padding", 0.1),
        show_box=args.show_box,
        show_points=args.show_points,
        columns=_pick(args.columns, cfg, "columns", 6),
        order=_pick(args.order, cfg, "order", "lex"),
        annotate=args.annotate,
    )
    stats = load_stats(args.stats) if args.stats is not None else None
    if args.glyph is not None:
        g = alphabet.mapping.get(args.glyph)
        if g is None:
            raise ValueError(f"letter {args.glyph!r} is not mapped in the alphabet")
        svg = render_glyph(g, options)
    elif args.word is not None:
        svg = render_word(alphabet, args.word, options)
    else:
        svg = render_alphabet(alphabet, options, stats=stats)
    if args.output is None:
        sys.stdout.write(svg)
    else:
        _write_text(args.output, svg)
        if not args.quiet:
            print(f"wrote {args.output}")
    return 0


# ------------------------------------------------------------------ parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file supplying option defaults")
    common.add_argument("--output", help="output file (or directory for evolve)")
    common.add_argument("--quiet", action="store_true", help="suppress progress chatter")

    parser = argparse.ArgumentParser(
        prog="glyphsmith",
        description="Synthesize, score, evolve and render connected writing systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="count letter and bigram statistics")
    p.add_argument("input", help="plain-text corpus file")
    p.add_argument("--letters", help="letter set to count (default a-z)")
    p.add_argument("--top", type=int, help="how many bigrams to list (default 5)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("generate", parents=[common], help="generate a random glyph pool")
    p.add_argument("--seed", type=int, help="root seed (required, no wall-clock fallback)")
    p.add_argument("--count", type=int, help="pool size (default 20)")
    p.add_argument("--min-interior", type=int, dest="min_interior")
    p.add_argument("--max-interior", type=int, dest="max_interior")
    p.add_argument("--count-decay", type=float, dest="count_decay")
    p.add_argument("--start-anchor", type=int, choices=(0, 1, 2), dest="start_anchor")
    p.add_argument("--end-anchor", type=int, choices=(0, 1, 2), dest="end_anchor")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("evolve", parents=[common], help="evolve an alphabet for a corpus")
    p.add_argument("stats", help="corpus statistics JSON from 'analyze'")
    p.add_argument("--seed", type=int, help="root seed (required, no wall-clock fallback)")
    p.add_argument("--generations", type=int)
    p.add_argument("--population-size", type=int, dest="population_size")
    p.add_argument("--elitism-count", type=int, dest="elitism_count")
    p.add_argument("--tournament-size", type=int, dest="tournament_size")
    p.add_argument("--crossover-rate", type=float, dest="crossover_rate")
    p.add_argument("--stagnation-stop", type=int, dest="stagnation_stop")
    p.add_argument("--checkpoint-every", type=int, dest="checkpoint_every")
    p.add_argument("--init", help="seed the population from a glyph pool file")
    p.add_argument("--threads", type=int, default=1, help="evaluation threads (default 1)")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("eval", parents=[common], help="print the score terms of a saved alphabet")
    p.add_argument("alphabet", help="alphabet JSON")
    p.add_argument("stats", help="corpus statistics JSON")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("render", parents=[common], help="render SVG output")
    p.add_argument("alphabet", help="alphabet JSON")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--glyph", metavar="LETTER", help="render one letter's glyph")
    mode.add_argument("--sheet", action="store_true", help="render the full alphabet grid")
    mode.add_argument("--word", metavar="WORD", help="render a connected word")
    p.add_argument("--stats", help="corpus statistics JSON (for --order freq)")
    p.add_argument("--cell", type=float, help="cell size in px (default 256)")
    p.add_argument("--stroke", type=float, help="stroke width in px (default 2%% of cell)")
    p.add_argument("--padding", type=float, help="blank border fraction (default 0.1)")
    p.add_argument("--columns", type=int, help="sheet columns (default 6)")
    p.add_argument("--order", choices=("lex", "freq"), help="sheet ordering")
    p.add_argument("--annotate", action="store_true", help="print fitness under each cell")
    p.add_argument("--show-box", action="store_true", dest="show_box")
    p.add_argument("--show-points", action="store_true", dest="show_points")
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
