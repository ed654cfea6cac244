"""Deterministic figure rendering for qscramble CSV outputs.

Reads only the public CSV schema (a ``t`` column plus one column per
observable, '#' metadata lines) and declarative YAML recipes; it has no
access to the simulation package's internals.
"""

__version__ = "0.1.0"

from .reader import CsvTable, RecipeError, read_table
from .recipes import CurveSpec, FigureRecipe, PanelSpec, load_recipe, render, shipped_recipes

__all__ = [
    "CsvTable", "CurveSpec", "FigureRecipe", "PanelSpec", "RecipeError",
    "load_recipe", "read_table", "render", "shipped_recipes",
]
