"""Compare the compiled geometry kernels against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeats 5]

Both backends are imported directly (no subprocess games), fed identical
inputs, and timed with ``timeit``; a cross-check asserts they agree before
any number is printed.
"""

from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from glyphsmith._kernels import _pure
from glyphsmith.glyph import GenerationConfig, generate_glyph

try:
    from glyphsmith._kernels import _fastgeom
except ImportError:
    _fastgeom = None


def glyph_arrays(count: int) -> list[np.ndarray]:
    """Control-point arrays of shape (segments, 4, 2) from the real generator."""
    out = []
    for seed in range(count):
        g = generate_glyph(seed, GenerationConfig())
        out.append(np.array(g.path.segments, dtype=np.float64))
    return out


def bench(label: str, fn, repeats: int) -> float:
    best = min(timeit.repeat(fn, number=1, repeat=repeats))
    print(f"  {label:<28} {best * 1e3:9.2f} ms")
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best-of)")
    parser.add_argument("--glyphs", type=int, default=400, help="pool size per workload")
    parser.add_argument("--k", type=int, default=256, help="samples per cubic segment")
    args = parser.parse_args()

    chains = glyph_arrays(args.glyphs)
    rng = random.Random(1)
    hists = np.array(
        [[rng.random() for _ in range(18)] for _ in range(args.glyphs)], dtype=np.float64
    )
    hists /= hists.sum(axis=1, keepdims=True)

    backends = [("pure (numpy)", _pure)]
    if _fastgeom is not None:
        backends.append(("compiled (cython)", _fastgeom))
    else:
        print("compiled backend not built; benchmarking the fallback only")

    if _fastgeom is not None:  # cross-check before timing anything
        for ctrl in chains[:25]:
            a = _pure.path_descriptor(ctrl, args.k, 18, 1.22)
            b = _fastgeom.path_descriptor(ctrl, args.k, 18, 1.22)
            assert np.array_equal(_pure.sample_chain(ctrl, args.k), _fastgeom.sample_chain(ctrl, args.k))
            assert abs(a[0] - b[0]) < 1e-12 and abs(a[1] - b[1]) < 1e-12 and a[2] == b[2]
        assert np.allclose(_pure.l1_matrix(hists), _fastgeom.l1_matrix(hists), atol=1e-12)
        print("cross-check: backends agree on shared inputs\n")

    results: dict[str, dict[str, float]] = {}
    for name, mod in backends:
        print(f"{name}:")
        results[name] = {
            "sample_chain": bench(
                f"sample_chain k={args.k}",
                lambda m=mod: [m.sample_chain(c, args.k) for c in chains],
                args.repeats,
            ),
            "path_descriptor": bench(
                f"path_descriptor k={args.k}",
                lambda m=mod: [m.path_descriptor(c, args.k, 18, 1.22) for c in chains],
                args.repeats,
            ),
            "l1_matrix": bench(
                f"l1_matrix {args.glyphs}x{args.glyphs}",
                lambda m=mod: m.l1_matrix(hists),
                args.repeats,
            ),
        }
        print()

    if len(results) == 2:
        pure, fast = results["pure (numpy)"], results["compiled (cython)"]
        print("speedup (pure / compiled):")
        for key in pure:
            print(f"  {key:<28} {pure[key] / fast[key]:6.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
