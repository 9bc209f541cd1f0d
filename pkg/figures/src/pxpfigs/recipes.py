"""Figure recipes: which runs feed which figure, plus render directives."""

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .loading import RecipeValidationError, RunData, check_consistent, load_run

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6")


@dataclass(frozen=True)
class Directives:
    """Axis, scale and rescale options shared by all figures."""

    # draw S/L vs t/L insets on the size-family entropy panels
    rescale_by_L: bool = True
    # states highlighted in the overlap scatter
    top_k: int = 8
    # optional [t0, t1] window applied to the long-time fidelity panel
    late_window: list[float] | None = None

    def validate(self):
        if self.top_k < 1:
            raise RecipeValidationError(f"top_k must be >= 1, got {self.top_k}")
        if self.late_window is not None:
            if len(self.late_window) != 2 or not self.late_window[0] < self.late_window[1]:
                raise RecipeValidationError(
                    f"late_window must be [t0, t1] with t0 < t1, got {self.late_window}"
                )


@dataclass(frozen=True)
class FigureRecipe:
    figure: str
    runs: list[str]
    directives: Directives = field(default_factory=Directives)

    def validate(self):
        if self.figure not in FIGURE_IDS:
            raise RecipeValidationError(
                f"unknown figure {self.figure!r}; expected one of {FIGURE_IDS}"
            )
        if not self.runs:
            raise RecipeValidationError("recipe lists no input runs")
        self.directives.validate()

    def load_runs(self, base: Path | None = None) -> list[RunData]:
        """Load and cross-check every referenced run directory."""
        self.validate()
        root = Path(base) if base is not None else Path(".")
        runs = [load_run(root / p) for p in self.runs]
        check_consistent(runs)
        return runs


def recipe_from_dict(raw: dict) -> FigureRecipe:
    if not isinstance(raw, dict):
        raise RecipeValidationError("recipe must be a JSON object")
    unknown = set(raw) - {"figure", "runs", "directives"}
    if unknown:
        raise RecipeValidationError(f"unknown recipe keys {sorted(unknown)}")
    if "figure" not in raw or "runs" not in raw:
        raise RecipeValidationError("recipe needs 'figure' and 'runs'")
    directives_raw = raw.get("directives", {})
    if not isinstance(directives_raw, dict):
        raise RecipeValidationError("'directives' must be an object")
    allowed = {f.name for f in fields(Directives)}
    bad = set(directives_raw) - allowed
    if bad:
        raise RecipeValidationError(f"unknown directives {sorted(bad)}")
    recipe = FigureRecipe(
        figure=str(raw["figure"]),
        runs=[str(p) for p in raw["runs"]],
        directives=Directives(**directives_raw),
    )
    recipe.validate()
    return recipe


def load_recipe(path) -> FigureRecipe:
    path = Path(path)
    if not path.is_file():
        raise RecipeValidationError(f"recipe file {path} does not exist")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise RecipeValidationError(f"{path} is not valid JSON: {exc}")
    return recipe_from_dict(raw)
