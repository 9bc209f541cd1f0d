"""Assemble the figure panels and write one vector file per panel."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# stable ids inside the SVG output so identical inputs give identical bytes
matplotlib.rcParams["svg.hashsalt"] = "pxpfigs"

import matplotlib.pyplot as plt

from . import panels
from .loading import RecipeValidationError, RunData
from .recipes import FigureRecipe

PANEL_SIZE = (3.6, 2.7)


def _dynamics(runs):
    return [run for run in runs if run.is_dynamics]


def _spectral(runs):
    return [run for run in runs if run.kind == "spectral"]


def _size_family(runs):
    """Dynamics runs sharing state and angle, spanning several sizes."""
    groups: dict[tuple, dict[int, RunData]] = {}
    for run in _dynamics(runs):
        groups.setdefault((run.state, run.theta_literal), {})[run.L] = run
    best: list[RunData] = []
    for group in groups.values():
        if len(group) >= 2 and len(group) > len(best):
            best = [group[L] for L in sorted(group)]
    return best


def _angle_family(runs):
    """Dynamics runs sharing state and size, spanning several angles."""
    groups: dict[tuple, dict[float, RunData]] = {}
    for run in _dynamics(runs):
        if not run.state.startswith("theta"):
            continue
        groups.setdefault((run.state, run.L), {})[run.theta] = run
    best: list[RunData] = []
    for group in groups.values():
        if len(group) >= 2 and len(group) > len(best):
            best = [group[theta] for theta in sorted(group)]
    return best


def _largest_dynamics(runs):
    cands = _dynamics(runs)
    return max(cands, key=lambda run: run.L) if cands else None


def _heatmap_run(runs):
    cands = [
        run for run in _dynamics(runs)
        if "per_site.csv" in run.manifest["outputs"]
    ]
    return max(cands, key=lambda run: run.L) if cands else None


def _largest_spectral(runs):
    cands = _spectral(runs)
    return max(cands, key=lambda run: run.L) if cands else None


def _per_state_dynamics(runs):
    """One dynamics run per state label, at its largest size."""
    by_state: dict[str, RunData] = {}
    for run in _dynamics(runs):
        label = run.state_label()
        if label not in by_state or run.L > by_state[label].L:
            by_state[label] = run
    return [by_state[label] for label in sorted(by_state)]


def _new_panel():
    return plt.subplots(figsize=PANEL_SIZE, dpi=150, layout="constrained")


def _overlap_panel(runs, directives):
    run = _largest_spectral(runs)
    if run is None:
        return None
    fig, ax = _new_panel()
    panels.plot_overlap_scatter(ax, run, directives.top_k)
    same_state = [r for r in _spectral(runs) if r.state == run.state]
    if len(same_state) >= 2:
        panels.add_dominant_entropy_inset(ax, same_state)
    return fig


def _family_panel(family, column, labeler, ylabel, logy=False):
    if not family:
        return None
    fig, ax = _new_panel()
    panels.plot_series_family(ax, family, column, labeler, ylabel, logy=logy)
    return fig


def _entropy_size_panel(runs, directives):
    family = _size_family(runs)
    if not family:
        return None
    fig, ax = _new_panel()
    panels.plot_series_family(ax, family, "S_half", panels.size_label, "S(t)")
    if directives.rescale_by_L:
        panels.add_rescaled_inset(ax, family, "S_half")
    return fig


def _product_overlay_panel(runs, _directives):
    run = _largest_dynamics(runs)
    if run is None:
        return None
    fig, ax = _new_panel()
    panels.plot_global_with_product(ax, run)
    return fig


def _block_panel(runs, _directives):
    run = _largest_dynamics(runs)
    if run is None or not run.block_columns():
        return None
    fig, ax = _new_panel()
    panels.plot_block_entropies(ax, run)
    return fig


def _heatmap_panel(runs, _directives):
    run = _heatmap_run(runs)
    if run is None:
        return None
    fig, ax = _new_panel()
    panels.plot_magnetization_heatmap(fig, ax, run)
    return fig


def _state_overlay_panel(runs, column, ylabel, window=None):
    per_state = _per_state_dynamics(runs)
    if len(per_state) < 2:
        return None
    fig, ax = _new_panel()
    panels.plot_state_overlay(ax, per_state, column, ylabel, window=window)
    return fig


def _longtime_bound_panel(runs, _directives):
    per_state = _per_state_dynamics(runs)
    if len(per_state) < 2:
        return None
    fig, ax = _new_panel()
    panels.plot_state_overlay(ax, per_state, "cesaro_F_global",
                              "time-averaged F")
    bounds = {}
    for spectral_run in _spectral(runs):
        label = spectral_run.state_label()
        summary = spectral_run.summary()
        best = bounds.get(label)
        if best is None or spectral_run.L > best[0]:
            bounds[label] = (spectral_run.L, summary["scar_bound"])
    panels.add_bound_lines(ax, {k: v[1] for k, v in bounds.items()})
    return fig


def _longtime_vs_size_panel(runs, _directives):
    spectral_runs = _spectral(runs)
    if not spectral_runs:
        return None
    fig, ax = _new_panel()
    panels.plot_longtime_vs_size(ax, spectral_runs)
    return fig


def _angle(column, ylabel, logy=False):
    def build(runs, _directives):
        return _family_panel(_angle_family(runs), column, panels.angle_label,
                             ylabel, logy=logy)
    return build


def _size(column, ylabel, logy=False):
    def build(runs, _directives):
        return _family_panel(_size_family(runs), column, panels.size_label,
                             ylabel, logy=logy)
    return build


_FIGURES = {
    "fig2": [
        ("a", _overlap_panel),
        ("b", _angle("F_global", "F(t)")),
        ("c", _size("F_global", "F(t)")),
        ("d", _angle("S_half", "S(t)")),
        ("e", _entropy_size_panel),
    ],
    "fig3": [
        ("a", _angle("F_1site", "F_1site(t)")),
        ("b", _size("F_1site", "F_1site(t)")),
        ("c", _size("prod_Fj", "prod_j F_j(t)")),
        ("d", _block_panel),
        ("e", _heatmap_panel),
    ],
    "fig4": [
        ("a", _overlap_panel),
        ("b", _entropy_size_panel),
        ("c", _product_overlay_panel),
        ("d", _angle("F_1site", "F_1site(t)")),
        ("e", _size("F_1site", "F_1site(t)")),
        ("f", _size("cesaro_F1site", "time-averaged F_1site")),
        ("g", _size("std_F1site", "std of F_1site")),
        ("h", _heatmap_panel),
    ],
    "fig5": [
        ("a", _overlap_panel),
        ("b", _entropy_size_panel),
        ("c", _product_overlay_panel),
        ("d", _size("cesaro_F_global", "time-averaged F")),
        ("e", _size("F_1site", "F_1site(t)")),
        ("f", _block_panel),
        ("i", _heatmap_panel),
    ],
    "fig6": [
        ("a", lambda runs, d: _state_overlay_panel(
            runs, "F_global", "F(t)", window=d.late_window)),
        ("b", _longtime_bound_panel),
        ("c", _longtime_vs_size_panel),
    ],
}


def render(recipe: FigureRecipe, out_dir, base=None) -> list[Path]:
    """Render every panel the given runs can support.

    Returns the written file paths; raises RecipeValidationError when the
    recipe is malformed or supports no panel at all.
    """
    runs = recipe.load_runs(base)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for panel, build in _FIGURES[recipe.figure]:
        fig = build(runs, recipe.directives)
        if fig is None:
            continue
        path = out / f"{recipe.figure}_{panel}.svg"
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        written.append(path)
    if not written:
        raise RecipeValidationError(
            f"recipe for {recipe.figure} supports no panel with the given runs"
        )
    return written
