"""Figure rendering for pxpsim run artifacts.

The package consumes completed run directories (manifest.json plus the
CSV/JSON files it lists) and rebuilds publication-style panels from them.
No observable is ever recomputed here; everything is plotted as stored.
"""

from .loading import RecipeValidationError, RunData, load_run
from .recipes import FIGURE_IDS, Directives, FigureRecipe, load_recipe
from .render import render

__version__ = "0.1.0"

__all__ = [
    "FIGURE_IDS",
    "Directives",
    "FigureRecipe",
    "RecipeValidationError",
    "RunData",
    "load_recipe",
    "load_run",
    "render",
    "__version__",
]
