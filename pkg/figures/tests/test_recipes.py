import json

import pytest

from pxpfigs import (
    FIGURE_IDS,
    Directives,
    FigureRecipe,
    RecipeValidationError,
    load_recipe,
)
from pxpfigs.recipes import recipe_from_dict

from conftest import run_name


def test_figure_ids():
    assert FIGURE_IDS == ("fig2", "fig3", "fig4", "fig5", "fig6")


def test_recipe_from_dict_defaults():
    recipe = recipe_from_dict({"figure": "fig2", "runs": ["a", "b"]})
    assert recipe.figure == "fig2"
    assert recipe.runs == ["a", "b"]
    assert recipe.directives == Directives()
    assert recipe.directives.rescale_by_L is True
    assert recipe.directives.top_k == 8
    assert recipe.directives.late_window is None


def test_recipe_from_dict_directives():
    recipe = recipe_from_dict({
        "figure": "fig6",
        "runs": ["a"],
        "directives": {"top_k": 3, "late_window": [5.0, 9.0]},
    })
    assert recipe.directives.top_k == 3
    assert recipe.directives.late_window == [5.0, 9.0]


@pytest.mark.parametrize(
    "raw",
    [
        {"figure": "fig7", "runs": ["a"]},
        {"figure": "fig2", "runs": []},
        {"figure": "fig2"},
        {"runs": ["a"]},
        {"figure": "fig2", "runs": ["a"], "panels": ["a"]},
        {"figure": "fig2", "runs": ["a"], "directives": {"dpi": 300}},
        {"figure": "fig2", "runs": ["a"], "directives": "big"},
        {"figure": "fig2", "runs": ["a"], "directives": {"top_k": 0}},
        {"figure": "fig2", "runs": ["a"], "directives": {"late_window": [5.0]}},
        {"figure": "fig2", "runs": ["a"], "directives": {"late_window": [9.0, 5.0]}},
    ],
    ids=[
        "unknown-figure", "no-runs", "missing-runs", "missing-figure",
        "unknown-key", "unknown-directive", "directives-not-object",
        "bad-top-k", "short-window", "reversed-window",
    ],
)
def test_recipe_rejects_malformed_input(raw):
    with pytest.raises(RecipeValidationError):
        recipe_from_dict(raw)


def test_recipe_must_be_object():
    with pytest.raises(RecipeValidationError, match="JSON object"):
        recipe_from_dict(["fig2"])


def test_load_recipe_roundtrip(tmp_path):
    path = tmp_path / "recipe.json"
    path.write_text(json.dumps({"figure": "fig3", "runs": ["x"]}))
    recipe = load_recipe(path)
    assert recipe == FigureRecipe("fig3", ["x"])


def test_load_recipe_missing_file(tmp_path):
    with pytest.raises(RecipeValidationError, match="does not exist"):
        load_recipe(tmp_path / "absent.json")


def test_load_recipe_corrupt_file(tmp_path):
    path = tmp_path / "recipe.json"
    path.write_text("[not json!")
    with pytest.raises(RecipeValidationError, match="not valid JSON"):
        load_recipe(path)


def test_load_runs_resolves_against_base(run_root):
    names = [
        run_name("local", "blockaded", 8),
        run_name("local", "blockaded", 10),
    ]
    recipe = FigureRecipe("fig5", names)
    runs = recipe.load_runs(run_root)
    assert [run.L for run in runs] == [8, 10]


def test_load_runs_checks_directories(run_root):
    recipe = FigureRecipe("fig5", ["missing_run"])
    with pytest.raises(RecipeValidationError, match="does not exist"):
        recipe.load_runs(run_root)
