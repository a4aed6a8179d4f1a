"""SVG output for glyphs, alphabet sheets and connected words.

All coordinates are written with fixed 4-decimal formatting so identical
inputs produce byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .alphabet import Alphabet
from .corpus import CorpusStats
from .geometry import arc_length, flatten
from .glyph import Glyph
from .metrics import DEGENERATE_LENGTH, DegenerateGlyphError, GlyphWeights, glyph_fitness


@dataclass(frozen=True)
class RenderOptions:
    cell_size: float = 256.0
    stroke_width: float | None = None  # None: 2% of the cell
    padding: float = 0.1  # fraction of the cell left blank around the unit box
    show_box: bool = False
    show_points: bool = False
    columns: int = 6
    order: str = "lex"  # "lex" or "freq" (freq needs corpus stats)
    annotate: bool = False

    def validate(self) -> None:
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        if not 0.0 <= self.padding < 0.5:
            raise ValueError("padding must be in [0, 0.5)")
        if self.columns < 1:
            raise ValueError("columns must be at least 1")
        if self.order not in ("lex", "freq"):
            raise ValueError("order must be 'lex' or 'freq'")

    @property
    def stroke(self) -> float:
        return self.stroke_width if self.stroke_width is not None else 0.02 * self.cell_size


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def _svg_doc(width: float, height: float, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
    )
    return head + "".join(line + "\n" for line in body) + "</svg>\n"


def _path_data(g: Glyph, tx, ty) -> str:
    segs = g.path.segments
    parts = [f"M {_fmt(tx(segs[0][0].x))} {_fmt(ty(segs[0][0].y))}"]
    for seg in segs:
        parts.append("C " + " ".join(f"{_fmt(tx(p.x))} {_fmt(ty(p.y))}" for p in seg[1:]))
    return " ".join(parts)


def _glyph_elements(g: Glyph, tx, ty, options: RenderOptions) -> list[str]:
    out = []
    if options.show_box:
        x0, y0 = tx(0.0), ty(1.0)
        side_x, side_y = tx(1.0) - x0, ty(0.0) - y0
        out.append(
            f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(side_x)}" height="{_fmt(side_y)}" '
            'fill="none" stroke="#bbbbbb" stroke-width="1" stroke-dasharray="3 3"/>'
        )
    out.append(
        f'<path d="{_path_data(g, tx, ty)}" fill="none" stroke="#000000" '
        f'stroke-width="{_fmt(options.stroke)}" stroke-linecap="round" stroke-linejoin="round"/>'
    )
    if options.show_points:
        r = 0.01 * options.cell_size
        for p in g.path.control_points():
            out.append(
                f'<circle cx="{_fmt(tx(p.x))}" cy="{_fmt(ty(p.y))}" r="{_fmt(r)}" fill="#3060c0"/>'
            )
    return out


def _cell_transforms(options: RenderOptions, col: float, row: float):
    cell = options.cell_size
    pad = options.padding * cell
    inner = cell - 2.0 * pad

    def tx(u: float) -> float:
        return col * cell + pad + u * inner

    def ty(v: float) -> float:
        return row * cell + pad + (1.0 - v) * inner

    return tx, ty


def render_glyph(g: Glyph, options: RenderOptions = RenderOptions()) -> str:
    """A single glyph in one square cell."""
    options.validate()
    try:
        length = arc_length(flatten(g.path, 8))
    except ValueError as exc:  # every sampled vertex coincides
        raise DegenerateGlyphError(f"glyph {g.id}: nothing to draw ({exc})") from exc
    if length < DEGENERATE_LENGTH:
        raise DegenerateGlyphError(f"glyph {g.id}: nothing to draw, arc length is ~0")
    tx, ty = _cell_transforms(options, 0, 0)
    return _svg_doc(options.cell_size, options.cell_size, _glyph_elements(g, tx, ty, options))


def render_alphabet(
    a: Alphabet,
    options: RenderOptions = RenderOptions(),
    stats: CorpusStats | None = None,
    weights: GlyphWeights = GlyphWeights(),
) -> str:
    """A labeled grid sheet; order 'freq' sorts by corpus probability."""
    options.validate()
    if options.order == "freq":
        if stats is None:
            raise ValueError("order='freq' needs corpus stats")
        letters = sorted(a.letters(), key=lambda ch: (-stats.letter_freq.get(ch, 0.0), ch))
    else:
        letters = a.letters()
    cols = max(1, min(options.columns, len(letters)))
    rows = math.ceil(len(letters) / cols) if letters else 0
    cell = options.cell_size
    body: list[str] = []
    for i, letter in enumerate(letters):
        col, row = i % cols, i // cols
        tx, ty = _cell_transforms(options, col, row)
        body.extend(_glyph_elements(a.mapping[letter], tx, ty, options))
        body.append(
            f'<text x="{_fmt(col * cell + 0.06 * cell)}" y="{_fmt(row * cell + 0.15 * cell)}" '
            f'font-family="monospace" font-size="{_fmt(0.11 * cell)}">{escape(letter)}</text>'
        )
        if options.annotate:
            f = glyph_fitness(a.mapping[letter], weights)
            body.append(
                f'<text x="{_fmt(col * cell + 0.06 * cell)}" y="{_fmt((row + 1) * cell - 0.06 * cell)}" '
                f'font-family="monospace" font-size="{_fmt(0.07 * cell)}" fill="#666666">{f:.3f}</text>'
            )
    return _svg_doc(cols * cell, max(rows, 1) * cell, body)


def render_word(a: Alphabet, word: str, options: RenderOptions = RenderOptions()) -> str:
    """Glyphs left to right, riding the shared anchor bands.

    Adjacent glyphs whose anchors meet share the junction point exactly; a
    mismatched pair gets a distinct dashed connector stroke between the two
    anchor heights instead.
    """
    options.validate()
    if not word:
        raise ValueError("word must not be empty")
    glyphs: list[Glyph] = []
    for ch in word.lower():
        g = a.mapping.get(ch)
        if g is None:
            raise ValueError(f"letter {ch!r} is not mapped in the alphabet")
        glyphs.append(g)

    cell = options.cell_size
    pad = options.padding * cell
    inner = cell - 2.0 * pad

    def ty(v: float) -> float:
        return pad + (1.0 - v) * inner

    body: list[str] = []
    for i, g in enumerate(glyphs):
        def tx(u: float, i: float = i) -> float:
            return pad + (i + u) * inner

        body.extend(_glyph_elements(g, tx, ty, options))
        if i + 1 < len(glyphs) and glyphs[i + 1].start_anchor != g.end_anchor:
            x = pad + (i + 1.0) * inner
            y0 = ty(g.end_anchor.height)
            y1 = ty(glyphs[i + 1].start_anchor.height)
            body.append(
                f'<path class="connector" d="M {_fmt(x)} {_fmt(y0)} L {_fmt(x)} {_fmt(y1)}" '
                f'fill="none" stroke="#c03030" stroke-width="{_fmt(0.5 * options.stroke)}" '
                'stroke-dasharray="4 3"/>'
            )
    width = 2.0 * pad + len(glyphs) * inner
    return _svg_doc(width, cell, body)
