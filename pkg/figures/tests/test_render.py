import pytest

from pxpfigs import Directives, FigureRecipe, RecipeValidationError, render

from conftest import LOCAL_RUNS, SPECTRAL_RUNS, run_name


def locals_for(state):
    return [
        run_name("local", s, L, literal)
        for (s, L, literal) in LOCAL_RUNS
        if s == state
    ]


def spectral_for(state):
    return [run_name("spectral", s, L) for (s, L) in SPECTRAL_RUNS if s == state]


def check_svg(path):
    content = path.read_text()
    assert content.startswith("<?xml")
    assert "</svg>" in content


def panel_names(paths):
    return sorted(path.name for path in paths)


def test_fig2_renders_every_panel(run_root, tmp_path):
    recipe = FigureRecipe(
        "fig2", locals_for("theta_plus") + spectral_for("theta_plus")
    )
    written = render(recipe, tmp_path / "out", base=run_root)
    assert panel_names(written) == [
        "fig2_a.svg", "fig2_b.svg", "fig2_c.svg", "fig2_d.svg", "fig2_e.svg",
    ]
    for path in written:
        check_svg(path)


def test_fig3_renders_every_panel(run_root, tmp_path):
    recipe = FigureRecipe("fig3", locals_for("theta_plus"))
    written = render(recipe, tmp_path / "out", base=run_root)
    assert panel_names(written) == [
        "fig3_a.svg", "fig3_b.svg", "fig3_c.svg", "fig3_d.svg", "fig3_e.svg",
    ]
    for path in written:
        check_svg(path)


def test_fig4_renders_every_panel(run_root, tmp_path):
    recipe = FigureRecipe(
        "fig4", locals_for("theta_symm") + spectral_for("theta_symm")
    )
    written = render(recipe, tmp_path / "out", base=run_root)
    assert panel_names(written) == [f"fig4_{p}.svg" for p in "abcdefgh"]
    for path in written:
        check_svg(path)


def test_fig4_size_family_alone_still_renders_size_panels(run_root, tmp_path):
    # a recipe holding one angle at several sizes has no spectral data and
    # no angle family; the size-resolved panels must still come out
    names = [
        run_name("local", "theta_symm", L, "pi/4") for L in (8, 10, 12)
    ]
    written = render(FigureRecipe("fig4", names), tmp_path / "out",
                     base=run_root)
    got = set(panel_names(written))
    assert {"fig4_b.svg", "fig4_e.svg", "fig4_f.svg", "fig4_g.svg"} <= got
    assert "fig4_a.svg" not in got
    assert "fig4_d.svg" not in got


def test_fig5_renders_every_panel(run_root, tmp_path):
    recipe = FigureRecipe(
        "fig5", locals_for("blockaded") + spectral_for("blockaded")
    )
    written = render(recipe, tmp_path / "out", base=run_root)
    assert panel_names(written) == [
        "fig5_a.svg", "fig5_b.svg", "fig5_c.svg", "fig5_d.svg",
        "fig5_e.svg", "fig5_f.svg", "fig5_i.svg",
    ]
    for path in written:
        check_svg(path)


def all_runs():
    names = [
        run_name("local", state, L, literal)
        for (state, L, literal) in LOCAL_RUNS
    ]
    names += [run_name("spectral", state, L) for (state, L) in SPECTRAL_RUNS]
    return names


def test_fig6_renders_every_panel(run_root, tmp_path):
    written = render(FigureRecipe("fig6", all_runs()), tmp_path / "out",
                     base=run_root)
    assert panel_names(written) == ["fig6_a.svg", "fig6_b.svg", "fig6_c.svg"]
    for path in written:
        check_svg(path)


def test_fig6_late_window_changes_the_overlay(run_root, tmp_path):
    names = all_runs()
    full = render(FigureRecipe("fig6", names), tmp_path / "full",
                  base=run_root)
    windowed = render(
        FigureRecipe("fig6", names,
                     Directives(late_window=[5.0, 9.0])),
        tmp_path / "windowed",
        base=run_root,
    )
    full_a = next(p for p in full if p.name == "fig6_a.svg")
    win_a = next(p for p in windowed if p.name == "fig6_a.svg")
    assert full_a.read_bytes() != win_a.read_bytes()


def test_rescale_inset_toggle(run_root, tmp_path):
    names = [run_name("local", "theta_symm", L, "pi/4") for L in (8, 10, 12)]
    with_inset = render(FigureRecipe("fig4", names), tmp_path / "on",
                        base=run_root)
    without = render(
        FigureRecipe("fig4", names, Directives(rescale_by_L=False)),
        tmp_path / "off",
        base=run_root,
    )
    on_b = next(p for p in with_inset if p.name == "fig4_b.svg")
    off_b = next(p for p in without if p.name == "fig4_b.svg")
    assert on_b.read_bytes() != off_b.read_bytes()


def test_render_is_deterministic(run_root, tmp_path):
    recipe = FigureRecipe("fig3", locals_for("theta_plus"))
    first = render(recipe, tmp_path / "first", base=run_root)
    second = render(recipe, tmp_path / "second", base=run_root)
    assert panel_names(first) == panel_names(second)
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()


def test_unsupported_recipe_is_an_error(run_root, tmp_path):
    # a single non-theta run feeds no fig2 panel: no spectrum, no family
    recipe = FigureRecipe("fig2", [run_name("local", "blockaded", 8)])
    with pytest.raises(RecipeValidationError, match="supports no panel"):
        render(recipe, tmp_path / "out", base=run_root)
    assert not list((tmp_path / "out").glob("*.svg"))


def test_render_reports_exactly_what_it_wrote(run_root, tmp_path):
    out = tmp_path / "out"
    written = render(FigureRecipe("fig3", locals_for("theta_plus")), out,
                     base=run_root)
    assert sorted(out.glob("*.svg")) == sorted(written)
