"""Figure recipes: declarative multi-panel line plots over CSV columns.

A recipe is a YAML mapping:

    name: fig_example
    description: free text
    layout: [rows, cols]            # optional, defaults to one row
    output: fig_example.png
    panels:
      - title: panel title          # optional
        xlabel: t                   # optional, default "t"
        ylabel: G                   # optional
        annotate_max_pairwise_diff: true   # optional coincidence annotation
        curves:
          - {csv: file.csv, column: otoc_open, label: "coupling 0.1", style: "-"}

Relative csv paths resolve against a data directory (the recipe file's
directory by default).  Rendering is deterministic: Agg backend, fixed DPI
and figure geometry, standard bundled fonts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import yaml

from .reader import CsvTable, RecipeError, read_table

DPI = 150
PANEL_SIZE = (5.4, 3.4)  # inches per panel


@dataclass(frozen=True)
class CurveSpec:
    csv: str
    column: str
    label: str
    style: str = "-"

    def x_column(self) -> str:
        return "t"


@dataclass(frozen=True)
class PanelSpec:
    curves: tuple[CurveSpec, ...]
    title: str = ""
    xlabel: str = "t"
    ylabel: str = ""
    annotate_max_pairwise_diff: bool = False


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    panels: tuple[PanelSpec, ...]
    layout: tuple[int, int]
    output: str
    description: str = ""


def _parse_curve(raw: dict, where: str) -> CurveSpec:
    for key in ("csv", "column"):
        if key not in raw:
            raise RecipeError(f"{where}: curve is missing {key!r}")
    return CurveSpec(csv=str(raw["csv"]), column=str(raw["column"]),
                     label=str(raw.get("label", raw["column"])),
                     style=str(raw.get("style", "-")))


def parse_recipe(raw: dict, source: str = "<inline>") -> FigureRecipe:
    if not isinstance(raw, dict):
        raise RecipeError(f"{source}: recipe file must contain a mapping")
    name = str(raw.get("name") or Path(source).stem)
    panels_raw = raw.get("panels")
    if not isinstance(panels_raw, list) or not panels_raw:
        raise RecipeError(f"{source}: 'panels' must be a non-empty list")
    panels = []
    for i, panel_raw in enumerate(panels_raw):
        where = f"{source}: panels[{i}]"
        curves_raw = panel_raw.get("curves")
        if not isinstance(curves_raw, list) or not curves_raw:
            raise RecipeError(f"{where}: 'curves' must be a non-empty list")
        panels.append(PanelSpec(
            curves=tuple(_parse_curve(c, where) for c in curves_raw),
            title=str(panel_raw.get("title", "")),
            xlabel=str(panel_raw.get("xlabel", "t")),
            ylabel=str(panel_raw.get("ylabel", "")),
            annotate_max_pairwise_diff=bool(
                panel_raw.get("annotate_max_pairwise_diff", False)),
        ))
    layout_raw = raw.get("layout")
    if layout_raw is None:
        layout = (1, len(panels))
    else:
        if (not isinstance(layout_raw, list) or len(layout_raw) != 2
                or any(int(x) < 1 for x in layout_raw)):
            raise RecipeError(f"{source}: 'layout' must be [rows, cols]")
        layout = (int(layout_raw[0]), int(layout_raw[1]))
    if layout[0] * layout[1] < len(panels):
        raise RecipeError(f"{source}: layout {layout} too small for "
                          f"{len(panels)} panels")
    output = str(raw.get("output") or f"{name}.png")
    return FigureRecipe(name=name, panels=tuple(panels), layout=layout,
                        output=output, description=str(raw.get("description", "")))


def load_recipe(ref: str | Path) -> tuple[FigureRecipe, Path]:
    """Load a recipe from a path or a shipped recipe name.

    Returns the recipe and the directory against which relative CSV paths
    resolve by default.
    """
    path = Path(ref)
    if not path.exists():
        shipped = shipped_recipes()
        if str(ref) in shipped:
            path = shipped[str(ref)]
        else:
            raise RecipeError(f"no such recipe file or shipped recipe: {ref}")
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return parse_recipe(raw, source=str(path)), path.parent


def shipped_recipes() -> dict[str, Path]:
    base = resources.files("plotkit") / "recipes"
    out = {}
    for entry in sorted(base.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".yaml"):
            out[entry.name[: -len(".yaml")]] = Path(str(entry))
    return out


def _load_tables(recipe: FigureRecipe, data_dir: Path) -> dict[str, CsvTable]:
    tables: dict[str, CsvTable] = {}
    for panel in recipe.panels:
        for curve in panel.curves:
            if curve.csv not in tables:
                csv_path = Path(curve.csv)
                if not csv_path.is_absolute():
                    csv_path = data_dir / csv_path
                try:
                    tables[curve.csv] = read_table(csv_path)
                except RecipeError as exc:
                    raise RecipeError(f"recipe {recipe.name}: {exc}") from exc
            # column existence is part of the recipe invariant
            tables[curve.csv].column(curve.column)
    return tables


def render(recipe: FigureRecipe, data_dir: str | Path,
           out_path: str | Path | None = None) -> Path:
    """Render the recipe to its output image; returns the written path."""
    data_dir = Path(data_dir)
    tables = _load_tables(recipe, data_dir)
    rows, cols = recipe.layout
    fig, axes = plt.subplots(rows, cols,
                             figsize=(PANEL_SIZE[0] * cols, PANEL_SIZE[1] * rows),
                             squeeze=False)
    flat_axes = axes.reshape(-1)
    for ax in flat_axes[len(recipe.panels):]:
        ax.set_visible(False)

    for ax, panel in zip(flat_axes, recipe.panels):
        series = []
        for curve in panel.curves:
            table = tables[curve.csv]
            x = table.column(curve.x_column())
            y = table.column(curve.column)
            ax.plot(x, y, curve.style, label=curve.label, linewidth=1.4)
            series.append(y)
        if panel.annotate_max_pairwise_diff and len(series) >= 2:
            length = min(len(y) for y in series)
            diff = max(float(np.max(np.abs(a[:length] - b[:length])))
                       for i, a in enumerate(series)
                       for b in series[i + 1:])
            ax.text(0.97, 0.05, f"max diff {diff:.2e}", transform=ax.transAxes,
                    ha="right", va="bottom", fontsize=8)
        if panel.title:
            ax.set_title(panel.title, fontsize=10)
        ax.set_xlabel(panel.xlabel)
        if panel.ylabel:
            ax.set_ylabel(panel.ylabel)
        ax.legend(fontsize=8)

    fig.tight_layout()
    out = Path(out_path) if out_path is not None else Path(recipe.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out


def max_pairwise_difference(recipe: FigureRecipe, data_dir: str | Path) -> float:
    """Largest pointwise difference among curves of annotated panels."""
    tables = _load_tables(recipe, Path(data_dir))
    worst = 0.0
    for panel in recipe.panels:
        if not panel.annotate_max_pairwise_diff:
            continue
        series = [tables[c.csv].column(c.column) for c in panel.curves]
        length = min(len(y) for y in series)
        for i, a in enumerate(series):
            for b in series[i + 1:]:
                worst = max(worst, float(np.max(np.abs(a[:length] - b[:length]))))
    return worst
