"""glyphsmith: synthesize writing-system alphabets.

Generate anchored Bezier glyphs, score them for complexity, legibility
proxies and mutual dissimilarity, bind them to letters using corpus
statistics, evolve whole alphabets with a genetic algorithm, and render the
results to SVG.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND

__all__ = ["BACKEND", "__version__"]
