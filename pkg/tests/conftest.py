import math
from pathlib import Path

import pytest

from glyphsmith.corpus import analyze_corpus
from glyphsmith.evolve import derive_seed
from glyphsmith.glyph import GenerationConfig, generate_glyph

DATA = Path(__file__).parent / "data"

PANGRAM = "the quick brown fox jumps over the lazy dog"


def make_pool(seed, n, config=GenerationConfig()):
    """Deterministic glyph pool; seeds split so pools never collide."""
    return [generate_glyph(derive_seed(seed, i), config) for i in range(n)]


@pytest.fixture(scope="session")
def english_seed_text():
    return (DATA / "english_seed.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def english_text(english_seed_text):
    """The seed prose tiled out to a bit over 1 MB."""
    reps = math.ceil(1_048_576 / len(english_seed_text))
    return english_seed_text * reps


@pytest.fixture(scope="session")
def english_stats(english_text):
    return analyze_corpus(english_text)


@pytest.fixture(scope="session")
def pangram_stats():
    return analyze_corpus(PANGRAM * 20)
