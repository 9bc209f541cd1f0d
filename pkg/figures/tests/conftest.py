"""Shared corpus of small completed runs for the rendering tests.

The runs are produced through the simulator's command line interface in a
subprocess, never by importing it: the figures package only ever sees the
artifact files, and the tests exercise exactly that boundary.
"""

import json
import subprocess
import sys

import pytest

# (state, L, angle literal or None); every run uses tmax=10, dt=0.1
LOCAL_RUNS = [
    ("theta_plus", 8, "pi/4"),
    ("theta_plus", 10, "pi/8"),
    ("theta_plus", 10, "pi/4"),
    ("theta_plus", 10, "3pi/8"),
    ("theta_plus", 12, "pi/4"),
    ("theta_symm", 8, "pi/4"),
    ("theta_symm", 10, "pi/8"),
    ("theta_symm", 10, "pi/4"),
    ("theta_symm", 10, "3pi/8"),
    ("theta_symm", 12, "pi/4"),
    ("blockaded", 8, None),
    ("blockaded", 10, None),
    ("homogeneous", 10, None),
    ("neel", 10, None),
]

SPECTRAL_RUNS = [
    (state, L)
    for state in ("homogeneous", "neel", "blockaded", "theta_plus", "theta_symm")
    for L in (8, 10)
]


def run_name(kind, state, L, literal=None):
    name = f"{kind}_{state}_L{L}"
    if literal is not None:
        name += "_" + literal.replace("/", "_")
    return name


def _simulate(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "pxpsim", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr


@pytest.fixture(scope="session")
def run_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("runs")
    for state, L, literal in LOCAL_RUNS:
        args = [
            "local", "--L", str(L), "--state", state,
            "--tmax", "10", "--dt", "0.1", "--blocks", "1,2",
            "--out", run_name("local", state, L, literal),
        ]
        if literal is not None:
            args += ["--theta", literal]
        _simulate(args, root)
    for state, L in SPECTRAL_RUNS:
        args = [
            "spectral", "--L", str(L), "--state", state,
            "--out", run_name("spectral", state, L),
        ]
        if state.startswith("theta"):
            args += ["--theta", "pi/4"]
        _simulate(args, root)
    # one global-only run: no per-site artifact
    _simulate(
        [
            "evolve", "--L", "10", "--state", "theta_plus", "--theta", "pi/4",
            "--tmax", "10", "--dt", "0.1", "--blocks", "1,2",
            "--out", run_name("evolve", "theta_plus", 10, "pi/4"),
        ],
        root,
    )
    return root


@pytest.fixture()
def write_recipe(tmp_path):
    def _write(raw, name="recipe.json"):
        path = tmp_path / name
        path.write_text(json.dumps(raw))
        return path

    return _write
