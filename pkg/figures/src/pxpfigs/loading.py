"""Read-only access to completed run directories.

A run directory is valid when it contains a manifest naming every other
artifact in it. Loading never parses more than asked for; the CSV tables
are cached after the first read.
"""

import json
from pathlib import Path

import numpy as np


class RecipeValidationError(ValueError):
    """A recipe or one of its referenced run directories is unusable."""


MANIFEST_NAME = "manifest.json"

# manifest keys every run is expected to carry
_REQUIRED_KEYS = ("kind", "L", "state", "theta", "theta_literal",
                  "coupling", "delta", "outputs")


def _read_table(path: Path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.ndim == 0:
        data = data.reshape(1)
    return {name: np.asarray(data[name]) for name in data.dtype.names}


class RunData:
    """One completed run: its manifest and lazily loaded artifacts."""

    def __init__(self, path: Path, manifest: dict):
        self.path = Path(path)
        self.manifest = manifest
        self._tables: dict[str, dict[str, np.ndarray]] = {}

    @property
    def kind(self) -> str:
        return self.manifest["kind"]

    @property
    def L(self) -> int:
        return int(self.manifest["L"])

    @property
    def state(self) -> str:
        return self.manifest["state"]

    @property
    def theta(self) -> float:
        return float(self.manifest["theta"])

    @property
    def theta_literal(self) -> str:
        return str(self.manifest["theta_literal"])

    @property
    def is_dynamics(self) -> bool:
        return self.kind in ("evolve", "local")

    def state_label(self) -> str:
        if self.state.startswith("theta"):
            return f"{self.state}({self.theta_literal})"
        return self.state

    def _table(self, name: str) -> dict[str, np.ndarray]:
        if name not in self._tables:
            if name not in self.manifest["outputs"]:
                raise RecipeValidationError(
                    f"run {self.path} has no artifact {name!r}"
                )
            self._tables[name] = _read_table(self.path / name)
        return self._tables[name]

    def series(self) -> dict[str, np.ndarray]:
        return self._table("series.csv")

    def per_site(self) -> dict[str, np.ndarray]:
        return self._table("per_site.csv")

    def spectrum(self) -> dict[str, np.ndarray]:
        return self._table("spectrum.csv")

    def survival(self) -> dict[str, np.ndarray]:
        return self._table("survival.csv")

    def summary(self) -> dict:
        if "summary.json" not in self.manifest["outputs"]:
            raise RecipeValidationError(
                f"run {self.path} has no artifact 'summary.json'"
            )
        return json.loads((self.path / "summary.json").read_text())

    def block_columns(self) -> list[int]:
        """Block lengths for which the series carries entropy columns."""
        sizes = []
        for name in self.series():
            if name.startswith("S_l") and name[3:].isdigit():
                sizes.append(int(name[3:]))
        return sorted(sizes)


def load_run(path) -> RunData:
    path = Path(path)
    if not path.is_dir():
        raise RecipeValidationError(f"run directory {path} does not exist")
    manifest_path = path / MANIFEST_NAME
    if not manifest_path.is_file():
        raise RecipeValidationError(f"{path} has no {MANIFEST_NAME}")
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise RecipeValidationError(f"{manifest_path} is not valid JSON: {exc}")
    missing = [key for key in _REQUIRED_KEYS if key not in manifest]
    if missing:
        raise RecipeValidationError(
            f"{manifest_path} is missing keys {missing}"
        )
    for name in manifest["outputs"]:
        if not (path / name).exists():
            raise RecipeValidationError(
                f"{path} is missing the listed artifact {name!r}"
            )
    return RunData(path, manifest)


def check_consistent(runs: list[RunData]):
    """All runs in one recipe must describe the same model."""
    first = runs[0]
    for run in runs[1:]:
        for key in ("coupling", "delta"):
            if run.manifest[key] != first.manifest[key]:
                raise RecipeValidationError(
                    f"mismatched manifests: {run.path} has {key}="
                    f"{run.manifest[key]} but {first.path} has "
                    f"{key}={first.manifest[key]}"
                )
