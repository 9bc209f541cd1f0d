import json
import shutil

import numpy as np
import pytest

from pxpfigs import RecipeValidationError, load_run
from pxpfigs.loading import check_consistent

from conftest import run_name


def test_load_local_run(run_root):
    run = load_run(run_root / run_name("local", "theta_plus", 10, "pi/4"))
    assert run.kind == "local"
    assert run.L == 10
    assert run.state == "theta_plus"
    assert run.theta == pytest.approx(np.pi / 4)
    assert run.theta_literal == "pi/4"
    assert run.is_dynamics
    assert run.state_label() == "theta_plus(pi/4)"
    series = run.series()
    for column in ("t", "F_global", "F_1site", "S_half", "cesaro_F1site"):
        assert column in series
    assert series["t"].shape == (101,)
    assert run.block_columns() == [1, 2]
    per_site = run.per_site()
    assert per_site["t"].shape == (101 * 10,)


def test_load_spectral_run(run_root):
    run = load_run(run_root / run_name("spectral", "neel", 8))
    assert run.kind == "spectral"
    assert not run.is_dynamics
    assert run.state_label() == "neel"
    spectrum = run.spectrum()
    assert set(spectrum) >= {"E_n", "weight", "entropy_n"}
    assert np.all(np.diff(spectrum["E_n"]) >= 0)
    assert run.survival()["t"].size > 0
    summary = run.summary()
    assert "longtime_average" in summary and "scar_bound" in summary


def test_tables_are_cached(run_root):
    run = load_run(run_root / run_name("local", "blockaded", 8))
    assert run.series() is run.series()


def test_missing_directory(tmp_path):
    with pytest.raises(RecipeValidationError, match="does not exist"):
        load_run(tmp_path / "nowhere")


def test_missing_manifest(tmp_path):
    (tmp_path / "bare").mkdir()
    with pytest.raises(RecipeValidationError, match="manifest.json"):
        load_run(tmp_path / "bare")


def test_corrupt_manifest(tmp_path):
    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "manifest.json").write_text("{not json")
    with pytest.raises(RecipeValidationError, match="not valid JSON"):
        load_run(bad)


def test_manifest_missing_keys(run_root, tmp_path):
    src = run_root / run_name("local", "blockaded", 8)
    dst = tmp_path / "stripped"
    shutil.copytree(src, dst)
    manifest = json.loads((dst / "manifest.json").read_text())
    del manifest["coupling"]
    (dst / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(RecipeValidationError, match="coupling"):
        load_run(dst)


def test_listed_artifact_missing(run_root, tmp_path):
    src = run_root / run_name("local", "blockaded", 8)
    dst = tmp_path / "truncated"
    shutil.copytree(src, dst)
    (dst / "series.csv").unlink()
    with pytest.raises(RecipeValidationError, match="series.csv"):
        load_run(dst)


def test_absent_artifact_is_refused(run_root):
    # a global-only run never wrote per-site data; asking for it must not
    # silently read a stale file
    run = load_run(run_root / run_name("evolve", "theta_plus", 10, "pi/4"))
    assert "per_site.csv" not in run.manifest["outputs"]
    with pytest.raises(RecipeValidationError, match="per_site.csv"):
        run.per_site()
    with pytest.raises(RecipeValidationError, match="summary.json"):
        run.summary()


def test_mismatched_model_parameters(run_root, tmp_path):
    src = run_root / run_name("local", "blockaded", 8)
    dst = tmp_path / "retuned"
    shutil.copytree(src, dst)
    manifest = json.loads((dst / "manifest.json").read_text())
    manifest["coupling"] = 2.0
    (dst / "manifest.json").write_text(json.dumps(manifest))
    runs = [load_run(src), load_run(dst)]
    with pytest.raises(RecipeValidationError, match="mismatched"):
        check_consistent(runs)
