import hashlib
from pathlib import Path

import numpy as np
import pytest
import yaml

from plotkit.cli import main
from plotkit.reader import RecipeError, read_table
from plotkit.recipes import (load_recipe, max_pairwise_difference,
                             parse_recipe, render, shipped_recipes)

DATA_DIR = Path(__file__).parent / "data"


def single_curve_recipe(csv_name="ising_weak_coupling_thermo.csv",
                        column="entropy_production", **overrides):
    raw = {
        "name": "unit_single",
        "output": "unit_single.png",
        "panels": [{
            "title": "one curve",
            "ylabel": "nats",
            "curves": [{"csv": csv_name, "column": column, "label": "run"}],
        }],
    }
    raw.update(overrides)
    return raw


class TestReader:
    def test_reads_golden_csv(self):
        table = read_table(DATA_DIR / "dicke_gksl_thermo.csv")
        assert table.columns[0] == "t"
        assert "otoc_open" in table.columns
        assert table.data.shape[0] == 100
        assert table.column("t")[0] == 0.0

    def test_missing_file(self):
        with pytest.raises(RecipeError, match="not found"):
            read_table(DATA_DIR / "nope.csv")

    def test_missing_column_names_the_column(self):
        table = read_table(DATA_DIR / "dicke_gksl_thermo.csv")
        with pytest.raises(RecipeError, match="entropy_sum"):
            table.column("entropy_sum")


class TestParseRecipe:
    def test_minimal(self):
        recipe = parse_recipe(single_curve_recipe())
        assert recipe.layout == (1, 1)
        assert len(recipe.panels) == 1

    def test_rejects_empty_panels(self):
        with pytest.raises(RecipeError, match="panels"):
            parse_recipe({"name": "x", "panels": []})

    def test_rejects_curve_without_column(self):
        raw = single_curve_recipe()
        del raw["panels"][0]["curves"][0]["column"]
        with pytest.raises(RecipeError, match="column"):
            parse_recipe(raw)

    def test_rejects_undersized_layout(self):
        raw = single_curve_recipe(layout=[1, 1])
        raw["panels"] = raw["panels"] * 3
        with pytest.raises(RecipeError, match="layout"):
            parse_recipe(raw)


class TestRender:
    def test_single_curve_panel(self, tmp_path):
        recipe = parse_recipe(single_curve_recipe())
        out = render(recipe, data_dir=DATA_DIR, out_path=tmp_path / "one.png")
        assert out.exists() and out.stat().st_size > 2000

    def test_absent_column_error_names_it(self, tmp_path):
        recipe = parse_recipe(single_curve_recipe(column="no_such_column"))
        with pytest.raises(RecipeError, match="no_such_column"):
            render(recipe, data_dir=DATA_DIR, out_path=tmp_path / "x.png")

    def test_missing_csv_error_carries_recipe_context(self, tmp_path):
        recipe = parse_recipe(single_curve_recipe(csv_name="absent.csv"))
        with pytest.raises(RecipeError, match="unit_single"):
            render(recipe, data_dir=DATA_DIR, out_path=tmp_path / "x.png")

    def test_rerender_is_idempotent_and_nonmutating(self, tmp_path):
        csv_path = DATA_DIR / "ising_weak_coupling_thermo.csv"
        csv_before = csv_path.read_bytes()
        recipe = parse_recipe(single_curve_recipe())
        out_a = render(recipe, data_dir=DATA_DIR, out_path=tmp_path / "a.png")
        out_b = render(recipe, data_dir=DATA_DIR, out_path=tmp_path / "b.png")
        assert hashlib.sha256(out_a.read_bytes()).digest() \
            == hashlib.sha256(out_b.read_bytes()).digest()
        assert csv_path.read_bytes() == csv_before


class TestShippedRecipes:
    def test_all_shipped_recipes_render_from_goldens(self, tmp_path):
        recipes = shipped_recipes()
        assert len(recipes) >= 12
        for name in recipes:
            recipe, _ = load_recipe(name)
            out = render(recipe, data_dir=DATA_DIR,
                         out_path=tmp_path / f"{name}.png")
            assert out.exists() and out.stat().st_size > 2000

    def test_overlay_curves_coincide(self):
        # the OTOC / operator-entanglement overlay: annotated max pointwise
        # difference stays at numerical-identity level
        recipe, _ = load_recipe("fig_ising_operator_entanglement")
        assert any(p.annotate_max_pairwise_diff for p in recipe.panels)
        diff = max_pairwise_difference(recipe, DATA_DIR)
        assert diff <= 1e-10


class TestCli:
    def test_render_command(self, tmp_path):
        raw = single_curve_recipe()
        recipe_path = tmp_path / "r.yaml"
        recipe_path.write_text(yaml.safe_dump(raw))
        out_path = tmp_path / "out.png"
        assert main(["render", str(recipe_path), "--data-dir", str(DATA_DIR),
                     "--out", str(out_path)]) == 0
        assert out_path.exists()

    def test_render_shipped_by_name(self, tmp_path):
        out_path = tmp_path / "fig.png"
        assert main(["render", "fig_dicke_gksl_thermo", "--data-dir",
                     str(DATA_DIR), "--out", str(out_path)]) == 0
        assert out_path.exists()

    def test_bad_recipe_is_exit_one(self, tmp_path):
        recipe_path = tmp_path / "bad.yaml"
        recipe_path.write_text(yaml.safe_dump({"name": "bad", "panels": []}))
        assert main(["render", str(recipe_path)]) == 1
        assert main(["render", str(tmp_path / "missing.yaml")]) == 1

    def test_list_recipes(self, capsys):
        assert main(["list-recipes"]) == 0
        out = capsys.readouterr().out
        assert "fig_ising_operator_entanglement" in out
