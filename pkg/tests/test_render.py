import math
import random
import re
import xml.etree.ElementTree as ET

import pytest

from glyphsmith.alphabet import Alphabet
from glyphsmith.corpus import analyze_corpus
from glyphsmith.geometry import BezierPath, Point
from glyphsmith.glyph import AnchorLevel, GenerationConfig, Glyph, build_path, generate_glyph
from glyphsmith.metrics import DegenerateGlyphError, GlyphWeights, connection_ease, glyph_fitness
from glyphsmith.render import RenderOptions, render_alphabet, render_glyph, render_word

from conftest import make_pool


def straight_glyph(level: int = 1) -> Glyph:
    lv = AnchorLevel(level)
    return Glyph("line", lv, lv, (), build_path(lv, lv, ()))


def anchored(seed: int, start: int, end: int) -> Glyph:
    return generate_glyph(seed, GenerationConfig(start_anchor=start, end_anchor=end))


def stroke_paths(svg: str) -> list[str]:
    # glyph strokes are `<path d="..."`; connectors carry a class attribute first
    return re.findall(r'<path d="([^"]+)"', svg)


def points_of(d: str) -> list[tuple[float, float]]:
    nums = [float(v) for v in re.findall(r"-?\d+\.\d+", d)]
    return list(zip(nums[0::2], nums[1::2]))


def labels_of(svg: str) -> list[str]:
    return re.findall(r">([a-z])</text>", svg)


class TestRenderGlyph:
    def test_straight_glyph_path_is_collinear(self):
        svg = render_glyph(straight_glyph())
        (d,) = stroke_paths(svg)
        assert d.startswith("M ") and " C " in d
        pts = points_of(d)
        assert len(pts) == 4  # M + one cubic
        ys = {y for _, y in pts}
        assert ys == {128.0}  # mid anchor, 256 cell, 10% padding
        xs = [x for x, _ in pts]
        assert xs == sorted(xs)

    def test_byte_identical_repeat(self):
        g = generate_glyph(77, GenerationConfig())
        opts = RenderOptions(cell_size=180.0, show_box=True, show_points=True)
        assert render_glyph(g, opts) == render_glyph(g, opts)

    def test_one_cubic_command_per_segment(self):
        knots = (Point(0.3, 0.8), Point(0.7, 0.2))
        lv = AnchorLevel(0)
        g = Glyph("three", lv, lv, knots, build_path(lv, lv, knots))
        assert len(g.path.segments) == 3
        (d,) = stroke_paths(render_glyph(g))
        assert d.count("C ") == 3
        for seed in range(10):
            gen = generate_glyph(seed, GenerationConfig())
            (d,) = stroke_paths(render_glyph(gen))
            assert d.count("C ") == len(gen.path.segments)

    def test_unit_box_corners_map_to_padded_cell(self):
        svg = render_glyph(straight_glyph(), RenderOptions(cell_size=256.0, padding=0.1))
        (d,) = stroke_paths(svg)
        first = d.split(" C ")[0]
        assert first == "M 25.6000 128.0000"

    def test_degenerate_glyph_rejected(self):
        p = Point(0.5, 0.5)
        dot = Glyph("dot", AnchorLevel(1), AnchorLevel(1), (), BezierPath(((p, p, p, p),)))
        with pytest.raises(DegenerateGlyphError):
            render_glyph(dot)

    def test_option_validation(self):
        g = straight_glyph()
        with pytest.raises(ValueError, match="cell_size"):
            render_glyph(g, RenderOptions(cell_size=0.0))
        with pytest.raises(ValueError, match="padding"):
            render_glyph(g, RenderOptions(padding=0.5))
        with pytest.raises(ValueError, match="columns"):
            render_alphabet(Alphabet({"a": g}), RenderOptions(columns=0))
        with pytest.raises(ValueError, match="order"):
            render_alphabet(Alphabet({"a": g}), RenderOptions(order="rank"))

    def test_stroke_width_defaults_to_two_percent(self):
        assert RenderOptions(cell_size=100.0).stroke == 2.0
        assert RenderOptions(stroke_width=3.5).stroke == 3.5
        svg = render_glyph(straight_glyph(), RenderOptions(cell_size=100.0))
        assert 'stroke-width="2.0000"' in svg

    def test_box_and_point_markers(self):
        g = generate_glyph(5, GenerationConfig())
        plain = render_glyph(g)
        assert "<rect" not in plain and "<circle" not in plain
        boxed = render_glyph(g, RenderOptions(show_box=True, show_points=True))
        assert boxed.count("<rect") == 1
        assert boxed.count("<circle") == len(g.path.control_points())

    def test_parses_as_xml(self):
        g = generate_glyph(11, GenerationConfig())
        root = ET.fromstring(render_glyph(g, RenderOptions(show_box=True)))
        assert root.tag.endswith("svg")
        assert root.get("viewBox") == "0 0 256.0000 256.0000"


class TestRenderAlphabet:
    def test_single_letter_single_cell(self):
        svg = render_alphabet(Alphabet({"q": anchored(9, 0, 2)}))
        assert len(stroke_paths(svg)) == 1
        assert labels_of(svg) == ["q"]
        root = ET.fromstring(svg)
        assert root.get("width") == "256.0000"
        assert root.get("height") == "256.0000"

    def test_row_count_follows_ceiling(self):
        for n in (1, 5, 6, 7, 12, 13):
            letters = "abcdefghijklmnopqrstuvwxyz"[:n]
            a = Alphabet({ch: anchored(40 + i, 1, 1) for i, ch in enumerate(letters)})
            svg = render_alphabet(a, RenderOptions(columns=6))
            assert len(stroke_paths(svg)) == n
            height = float(ET.fromstring(svg).get("height"))
            assert height == math.ceil(n / 6) * 256.0

    def test_lexicographic_label_order(self):
        shuffled = dict(zip("dcba", (anchored(60 + i, 1, 1) for i in range(4))))
        svg = render_alphabet(Alphabet(shuffled))
        assert labels_of(svg) == ["a", "b", "c", "d"]

    def test_frequency_order_uses_stats(self):
        stats = analyze_corpus("bbb ba a", "ab")
        a = Alphabet({"a": anchored(70, 1, 1), "b": anchored(71, 1, 1)})
        svg = render_alphabet(a, RenderOptions(order="freq"), stats=stats)
        assert labels_of(svg) == ["b", "a"]
        with pytest.raises(ValueError, match="corpus stats"):
            render_alphabet(a, RenderOptions(order="freq"))

    def test_annotations_match_fitness_to_three_decimals(self):
        letters = "abcd"
        a = Alphabet({ch: generate_glyph(80 + i, GenerationConfig()) for i, ch in enumerate(letters)})
        svg = render_alphabet(a, RenderOptions(annotate=True))
        shown = re.findall(r">(\d+\.\d{3})</text>", svg)
        expected = [f"{glyph_fitness(a.mapping[ch], GlyphWeights()):.3f}" for ch in letters]
        assert shown == expected

    def test_byte_identical_repeat(self):
        a = Alphabet({ch: anchored(90 + i, 2, 0) for i, ch in enumerate("xyz")})
        opts = RenderOptions(annotate=True, show_box=True)
        assert render_alphabet(a, opts) == render_alphabet(a, opts)


class TestRenderWord:
    def test_single_letter_word_matches_render_glyph(self):
        g = generate_glyph(101, GenerationConfig())
        a = Alphabet({"a": g})
        assert render_word(a, "a") == render_glyph(g)

    def test_matching_anchors_share_junction_exactly(self):
        a = Alphabet({"a": anchored(110, 0, 2), "b": anchored(111, 2, 1)})
        svg = render_word(a, "ab")
        assert "connector" not in svg
        first, second = stroke_paths(svg)
        assert points_of(first)[-1] == points_of(second)[0]
        # stronger: the formatted coordinate text is identical
        assert first.rsplit(" ", 2)[-2:] == second.split(" ")[1:3]

    def test_mismatch_draws_one_distinct_connector(self):
        ga, gb = anchored(120, 1, 1), anchored(121, 0, 1)
        assert connection_ease(ga, ga) == 1.0
        assert connection_ease(ga, gb) == 0.0
        svg = render_word(Alphabet({"a": ga, "b": gb}), "aab")
        assert svg.count('class="connector"') == 1
        m = re.search(r'<path class="connector"[^>]*>', svg)
        assert 'stroke="#c03030"' in m.group(0)
        assert "stroke-dasharray" in m.group(0)

    def test_connector_count_equals_mismatched_pairs(self, pangram_stats):
        rng = random.Random(130)
        pool = make_pool(130, 30)
        letters = pangram_stats.letters
        a = Alphabet(dict(zip(letters, pool[: len(letters)])))
        for _ in range(20):
            word = "".join(rng.choice(letters) for _ in range(rng.randrange(2, 12)))
            svg = render_word(a, word)
            expected = sum(
                1
                for x, y in zip(word, word[1:])
                if connection_ease(a.mapping[x], a.mapping[y]) == 0.0
            )
            assert svg.count('class="connector"') == expected

    def test_unmapped_letter_is_named(self):
        a = Alphabet({"a": anchored(140, 1, 1)})
        with pytest.raises(ValueError, match="'x'"):
            render_word(a, "axa")

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            render_word(Alphabet({"a": anchored(141, 1, 1)}), "")

    def test_word_is_case_folded(self):
        a = Alphabet({"a": anchored(150, 1, 1), "b": anchored(151, 1, 1)})
        assert render_word(a, "AbA") == render_word(a, "aba")

    def test_canvas_width_scales_with_length(self):
        a = Alphabet({"a": anchored(160, 1, 1)})
        for n in (1, 2, 5):
            svg = render_word(a, "a" * n)
            width = float(ET.fromstring(svg).get("width"))
            # padding on both flanks, one inner box per letter
            assert width == 2 * 25.6 + n * 204.8
