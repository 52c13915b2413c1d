"""Rainbow colourings of random regular graphs with O(log n) colours."""

from .genreg import AttemptsExhausted, sample_simple_regular
from .graphcore import Path, SimpleGraph
from .localstruct import Params
from .rainbowcolor import ColorExhausted, EdgeColoring, greedy_random_coloring

__all__ = [
    "AttemptsExhausted",
    "ColorExhausted",
    "EdgeColoring",
    "Params",
    "Path",
    "SimpleGraph",
    "greedy_random_coloring",
    "sample_simple_regular",
]
