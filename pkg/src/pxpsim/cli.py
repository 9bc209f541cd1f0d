"""Deterministic experiment runner.

Subcommands build a manifest, run the requested pipeline, and write CSV and
JSON artifacts into a fresh run directory.  Identical manifests produce
byte-identical data files: there is no randomness anywhere in the pipeline,
iterative solvers use fixed start vectors, and floating-point values are
written with 17 significant digits.  On failure every partially-written
output is removed; the manifest is written last, so its presence marks a
completed run.

Exit codes: 0 success, 2 validation error, 3 numerical/convergence error,
4 capacity error.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .basis import enumerate_basis
from .errors import (
    CapacityError,
    NumericalError,
    PxpError,
    ValidationError,
)
from .hamiltonian import DENSE_LIMIT, SparseHamiltonian, build_pxp
from .observables import (
    TimeSeries,
    cesaro_average,
    entanglement_entropy,
    global_fidelity,
    max_trace_distance,
    running_std,
    running_std_conventional,
    site_rdm_stack,
    trace_distance_stack,
    uhlmann_fidelity_stack,
)
from .propagator import (
    ExactPropagator,
    TimeGrid,
    diagonalize,
    evolve_krylov,
)
from .spectral import (
    DEG_TOL_RELATIVE,
    SCAR_MIN_GAP_DEFAULT,
    SCAR_STRATEGIES,
    identify_scars,
    longtime_average,
    overlaps,
    scar_bound,
    survival_amplitude,
)
from .states import STATE_KINDS, StateSpec, StateVector, make_state, parse_theta

# Full diagonalization cap with --allow-heavy: dim 18000 keeps the in-place
# QR driver near one matrix-sized buffer (~2.6 GB at the cap).
HEAVY_DENSE_LIMIT = 18000

MANIFEST_FILENAME = "manifest.json"
SERIES_FILENAME = "series.csv"
PER_SITE_FILENAME = "per_site.csv"
SPECTRUM_FILENAME = "spectrum.csv"
SUMMARY_FILENAME = "summary.json"
SURVIVAL_FILENAME = "survival.csv"
HAM_DUMP_FILENAME = "ham_triplets.txt"

SANDWICH_SLACK = 1e-9

RUN_KINDS = ("basis-info", "evolve", "local", "spectral", "sweep")
SWEEP_KINDS = ("evolve", "local", "spectral")
METHODS = ("auto", "exact", "krylov")


@dataclass
class RunManifest:
    """Complete description of one run; serialized with stable key order."""

    kind: str
    L: int
    state: str = "homogeneous"
    theta: float = 0.0
    theta_literal: str = "0"
    delta: float = 0.0
    coupling: float = 1.0
    dt: float = 0.05
    tmax: float = 100.0
    method: str = "auto"
    krylov_dim: int = 30
    tol: float = 1e-10
    deg_tol: float | None = None
    n_scars: int | None = None
    scar_strategy: str = "overlap-greedy"
    scar_min_gap: float = SCAR_MIN_GAP_DEFAULT
    blocks: list[int] = field(default_factory=list)
    allow_heavy: bool = False
    dump_ham: bool = False
    dump_basis: bool = False
    out_dir: str = "."
    sweep_kind: str | None = None
    L_list: list[int] | None = None
    theta_list: list[str] | None = None
    tool_version: str = __version__
    outputs: list[str] = field(default_factory=list)
    wall_clock_seconds: float | None = None

    def validate(self):
        if self.kind not in RUN_KINDS:
            raise ValidationError(f"unknown run kind {self.kind!r}")
        if self.L < 1:
            raise ValidationError(f"L must be >= 1, got {self.L}")
        if self.kind in ("evolve", "local", "spectral") and self.L < 2:
            raise ValidationError(
                f"{self.kind} runs need L >= 2 for the half-chain cut"
            )
        if self.state not in STATE_KINDS:
            raise ValidationError(f"unknown state kind {self.state!r}")
        if not np.isfinite(self.theta):
            raise ValidationError("theta must be finite")
        if not (np.isfinite(self.coupling) and self.coupling != 0.0):
            raise ValidationError("coupling must be finite and nonzero")
        if not np.isfinite(self.delta):
            raise ValidationError("delta must be finite")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be positive, got {self.dt}")
        if not (np.isfinite(self.tmax) and self.tmax >= 0):
            raise ValidationError(f"tmax must be nonnegative, got {self.tmax}")
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}")
        if self.krylov_dim < 2:
            raise ValidationError(
                f"krylov dimension must be >= 2, got {self.krylov_dim}"
            )
        if not self.tol > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tol}")
        if self.deg_tol is not None and self.deg_tol < 0:
            raise ValidationError(
                f"degeneracy tolerance must be >= 0, got {self.deg_tol}"
            )
        if self.n_scars is not None and self.n_scars < 1:
            raise ValidationError(f"scar count must be >= 1, got {self.n_scars}")
        if self.scar_strategy not in SCAR_STRATEGIES:
            raise ValidationError(f"unknown scar strategy {self.scar_strategy!r}")
        if not self.scar_min_gap >= 0:
            raise ValidationError(
                f"scar energy gap must be >= 0, got {self.scar_min_gap}"
            )
        if len(set(self.blocks)) != len(self.blocks):
            raise ValidationError("block lengths must be distinct")
        largest = (
            max(self.L_list) if (self.kind == "sweep" and self.L_list) else self.L
        )
        for ell in self.blocks:
            if not 1 <= ell < largest:
                raise ValidationError(
                    f"block length {ell} outside [1, {largest - 1}]"
                )
        if self.kind == "sweep":
            if self.sweep_kind not in SWEEP_KINDS:
                raise ValidationError(
                    f"sweep kind must be one of {SWEEP_KINDS}, got {self.sweep_kind!r}"
                )
            if not self.L_list:
                raise ValidationError("sweep requires a nonempty L list")
            if self.theta_list is not None and not self.theta_list:
                raise ValidationError("theta list, when given, must be nonempty")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls.from_dict(json.loads(text))


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_format_value(x) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _resolve_method(requested: str, dim: int) -> str:
    if requested == "auto":
        return "exact" if dim <= DENSE_LIMIT else "krylov"
    if requested == "exact" and dim > DENSE_LIMIT:
        raise CapacityError(
            f"exact method refused at dimension {dim} (limit {DENSE_LIMIT}); "
            f"use --method krylov"
        )
    return requested


def _print_preflight(manifest: RunManifest, ham: SparseHamiltonian, method: str):
    dim = ham.dim
    if method == "exact":
        est = 3 * dim * dim * 8 / 1e6
    else:
        est = (2 * manifest.krylov_dim + 8) * dim * 16 / 1e6
    print(
        f"preflight: L={manifest.L} dim={dim} nnz={ham.nnz} "
        f"method={method} est_memory_mb={est:.1f}",
        flush=True,
    )


def _write_ham_dump(ham: SparseHamiltonian, out: Path, written: list[str]):
    lines = [
        f"{row} {col} {_format_value(val)}" for row, col, val in ham.iter_triplets()
    ]
    (out / HAM_DUMP_FILENAME).write_text("\n".join(lines) + "\n")
    written.append(HAM_DUMP_FILENAME)


def _check_sandwich(fj: np.ndarray, dj: np.ndarray, t: float):
    lower = 1.0 - np.sqrt(np.clip(fj, 0.0, 1.0))
    upper = np.sqrt(np.clip(1.0 - fj, 0.0, None))
    if np.any(dj < lower - SANDWICH_SLACK) or np.any(dj > upper + SANDWICH_SLACK):
        raise NumericalError(
            f"local fidelity / trace distance bounds violated at t={t:.6g}"
        )


def _snapshots(ham, psi0, grid, method, manifest):
    if method == "exact":
        eig = diagonalize(ham)
        prop = ExactPropagator(eig, psi0)
        for t in grid.times:
            yield prop.at(float(t))
    else:
        yield from evolve_krylov(
            ham, psi0, grid, m=manifest.krylov_dim, tol=manifest.tol
        )


def _run_evolution(manifest: RunManifest, out: Path, written: list[str], per_site: bool):
    basis = enumerate_basis(manifest.L)
    ham = build_pxp(basis, manifest.coupling, manifest.delta)
    psi0 = make_state(basis, StateSpec(manifest.state, manifest.theta))
    grid = TimeGrid.from_tmax(manifest.tmax, manifest.dt)
    method = _resolve_method(manifest.method, basis.dim)
    _print_preflight(manifest, ham, method)
    if manifest.dump_ham:
        _write_ham_dump(ham, out, written)

    rho0 = site_rdm_stack(psi0)
    z0 = (rho0[:, 1, 1] - rho0[:, 0, 0]).real
    ell_half = basis.L // 2
    n_rows = grid.n_steps + 1
    times = grid.times

    f_global = np.empty(n_rows)
    f_1site = np.empty(n_rows)
    prod_log = np.empty(n_rows)
    prod_val = np.empty(n_rows)
    s_half = np.empty(n_rows)
    dmax_1site = np.empty(n_rows)
    block_entropy = {ell: np.empty(n_rows) for ell in manifest.blocks}
    per_site_parts = []

    for k, psit in enumerate(_snapshots(ham, psi0, grid, method, manifest)):
        rhot = site_rdm_stack(psit)
        fj = uhlmann_fidelity_stack(rho0, rhot)
        dj = trace_distance_stack(rho0, rhot)
        _check_sandwich(fj, dj, float(times[k]))
        dmax_j = max_trace_distance(fj)
        f_global[k] = global_fidelity(psi0, psit)
        f_1site[k] = fj.mean()
        with np.errstate(divide="ignore"):
            logs = np.log(fj)
        prod_log[k] = logs.sum()
        prod_val[k] = np.prod(fj)
        s_half[k] = entanglement_entropy(psit, ell_half)
        dmax_1site[k] = dmax_j.mean()
        for ell in manifest.blocks:
            block_entropy[ell][k] = entanglement_entropy(psit, ell)
        if per_site:
            zt = (rhot[:, 1, 1] - rhot[:, 0, 0]).real
            per_site_parts.append((fj, dmax_j, zt, np.abs(zt - z0), dj))

    series = TimeSeries(grid, f_1site)
    cesaro_f1 = cesaro_average(series).values
    std_f1 = running_std(series).values
    std_conv = running_std_conventional(series).values
    cesaro_fg = cesaro_average(TimeSeries(grid, f_global)).values
    cesaro_dm = cesaro_average(TimeSeries(grid, dmax_1site)).values

    header = [
        "t",
        "F_global",
        "F_1site",
        "prod_Fj_log",
        "S_half",
        "cesaro_F1site",
        "std_F1site",
        "std_conv_F1site",
        "prod_Fj",
        "cesaro_F_global",
        "Dmax_1site",
        "cesaro_Dmax_1site",
    ]
    columns = [
        times,
        f_global,
        f_1site,
        prod_log,
        s_half,
        cesaro_f1,
        std_f1,
        std_conv,
        prod_val,
        cesaro_fg,
        dmax_1site,
        cesaro_dm,
    ]
    for ell in manifest.blocks:
        header.append(f"S_l{ell}")
        columns.append(block_entropy[ell])
    _write_csv(out / SERIES_FILENAME, header, zip(*columns))
    written.append(SERIES_FILENAME)

    if per_site:
        rows = []
        for k, (fj, dmax_j, zt, dzt, dj) in enumerate(per_site_parts):
            t = times[k]
            for j in range(basis.L):
                rows.append(
                    (t, j + 1, fj[j], dmax_j[j], zt[j], dzt[j], dj[j])
                )
        _write_csv(
            out / PER_SITE_FILENAME,
            ["t", "j", "F_j", "Dmax_j", "Z_j", "absdZ_j", "Dj_direct"],
            rows,
        )
        written.append(PER_SITE_FILENAME)


def _run_spectral(manifest: RunManifest, out: Path, written: list[str]):
    basis = enumerate_basis(manifest.L)
    ham = build_pxp(basis, manifest.coupling, manifest.delta)
    psi0 = make_state(basis, StateSpec(manifest.state, manifest.theta))
    limit = HEAVY_DENSE_LIMIT if manifest.allow_heavy else DENSE_LIMIT
    if basis.dim > limit:
        hint = "" if manifest.allow_heavy else " (pass --allow-heavy to raise the cap)"
        raise CapacityError(
            f"spectral run needs a full diagonalization of dimension {basis.dim}, "
            f"above the limit {limit}{hint}"
        )
    _print_preflight(manifest, ham, "exact")
    if manifest.dump_ham:
        _write_ham_dump(ham, out, written)

    eig = diagonalize(ham, dense_limit=limit)
    spectrum = overlaps(eig, psi0)
    deg_tol = (
        manifest.deg_tol
        if manifest.deg_tol is not None
        else DEG_TOL_RELATIVE * spectrum.width
    )
    lt_avg = longtime_average(spectrum, deg_tol)
    scars = identify_scars(
        eig,
        basis,
        n_scars=manifest.n_scars,
        strategy=manifest.scar_strategy,
        min_gap=manifest.scar_min_gap,
    )
    bound = scar_bound(scars, eig, psi0)
    ratio = lt_avg / bound if bound > 0 else None

    is_scar = np.zeros(basis.dim, dtype=np.int64)
    is_scar[scars.indices] = 1
    half = basis.L // 2
    entropies = np.array(
        [
            entanglement_entropy(StateVector(basis, eig.vectors[:, n]), half)
            for n in range(basis.dim)
        ]
    )
    _write_csv(
        out / SPECTRUM_FILENAME,
        ["E_n", "weight", "entropy_n", "is_scar"],
        zip(spectrum.energies, spectrum.weights, entropies, is_scar),
    )
    written.append(SPECTRUM_FILENAME)

    grid = TimeGrid.from_tmax(manifest.tmax, manifest.dt)
    nu = survival_amplitude(spectrum, grid.times)
    f_nu = np.abs(nu) ** 2
    cesaro_nu = cesaro_average(TimeSeries(grid, f_nu)).values
    _write_csv(
        out / SURVIVAL_FILENAME,
        ["t", "F_nu", "cesaro_F_nu"],
        zip(grid.times, f_nu, cesaro_nu),
    )
    written.append(SURVIVAL_FILENAME)

    top = int(np.argmax(spectrum.weights))
    summary = {
        "deg_tol": deg_tol,
        "longtime_average": lt_avg,
        "max_weight": float(spectrum.weights[top]),
        "max_weight_energy": float(spectrum.energies[top]),
        "n_scars": scars.count,
        "ratio": ratio,
        "scar_bound": bound,
        "scar_min_gap": manifest.scar_min_gap,
        "scar_strategy": scars.strategy,
        "tool_version": manifest.tool_version,
    }
    (out / SUMMARY_FILENAME).write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n"
    )
    written.append(SUMMARY_FILENAME)


def _theta_slug(literal: str) -> str:
    return (
        literal.strip()
        .replace("*", "x")
        .replace("/", "_over_")
        .replace(".", "p")
        .replace(" ", "")
    )


def _run_sweep(manifest: RunManifest, out: Path, written: list[str]):
    thetas = manifest.theta_list if manifest.theta_list else [manifest.theta_literal]
    labelled = manifest.theta_list is not None
    done: list[str] = []
    try:
        for L in manifest.L_list:
            for literal in thetas:
                label = f"L{L}"
                if labelled:
                    label += f"_theta_{_theta_slug(literal)}"
                sub = RunManifest(
                    kind=manifest.sweep_kind,
                    L=L,
                    state=manifest.state,
                    theta=parse_theta(literal),
                    theta_literal=literal,
                    delta=manifest.delta,
                    coupling=manifest.coupling,
                    dt=manifest.dt,
                    tmax=manifest.tmax,
                    method=manifest.method,
                    krylov_dim=manifest.krylov_dim,
                    tol=manifest.tol,
                    deg_tol=manifest.deg_tol,
                    n_scars=manifest.n_scars,
                    scar_strategy=manifest.scar_strategy,
                    scar_min_gap=manifest.scar_min_gap,
                    blocks=[ell for ell in manifest.blocks if ell < L],
                    allow_heavy=manifest.allow_heavy,
                    dump_ham=manifest.dump_ham,
                    out_dir=str(out / label),
                )
                run_experiment(manifest.sweep_kind, sub)
                done.append(label)
    except BaseException:
        for label in done:
            shutil.rmtree(out / label, ignore_errors=True)
        raise
    written.extend(done)


def _run_basis_info(manifest: RunManifest) -> list[str]:
    basis = enumerate_basis(manifest.L)
    print(f"L: {basis.L}")
    print(f"dimension: {basis.dim}")
    if manifest.dump_basis:
        for pattern in basis.states:
            print(format(int(pattern), f"0{basis.L}b"))
    return []


def run_experiment(kind: str, manifest: RunManifest) -> list[str]:
    """Validate the manifest, run the pipeline, write artifacts.

    Returns the names of the files written into the run directory (manifest
    first).  Raises a PxpError subclass on any documented failure; partial
    outputs are removed before the exception propagates.
    """
    if kind != manifest.kind:
        raise ValidationError(
            f"kind argument {kind!r} does not match manifest kind {manifest.kind!r}"
        )
    manifest.validate()
    if kind == "basis-info":
        return _run_basis_info(manifest)

    out = Path(manifest.out_dir)
    if (out / MANIFEST_FILENAME).exists():
        raise ValidationError(
            f"refusing to overwrite completed run directory {out}"
        )
    out.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    written: list[str] = []
    try:
        if kind in ("evolve", "local"):
            _run_evolution(manifest, out, written, per_site=(kind == "local"))
        elif kind == "spectral":
            _run_spectral(manifest, out, written)
        else:
            _run_sweep(manifest, out, written)
        manifest.outputs = list(written)
        manifest.wall_clock_seconds = round(time.monotonic() - started, 3)
        (out / MANIFEST_FILENAME).write_text(manifest.to_json())
    except BaseException:
        # a half-written artifact may not have been recorded yet, so clear
        # the standard names as well
        leftovers = set(written) | {
            SERIES_FILENAME,
            PER_SITE_FILENAME,
            SPECTRUM_FILENAME,
            SUMMARY_FILENAME,
            SURVIVAL_FILENAME,
            HAM_DUMP_FILENAME,
        }
        for name in leftovers:
            target = out / name
            if target.is_dir():
                shutil.rmtree(target, ignore_errors=True)
            else:
                target.unlink(missing_ok=True)
        raise
    return [MANIFEST_FILENAME, *written]


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse integer list {text!r}") from None


def _parse_str_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _add_model_flags(sp: argparse.ArgumentParser, with_size: bool = True):
    if with_size:
        sp.add_argument("--L", type=int, required=True, help="number of sites")
    sp.add_argument(
        "--state",
        required=True,
        choices=STATE_KINDS,
        help="initial state kind",
    )
    sp.add_argument(
        "--theta",
        default="0",
        help="angle for theta_* states; accepts 'pi/4'-style literals",
    )
    sp.add_argument("--delta", type=float, default=0.0, help="detuning")
    sp.add_argument("--coupling", type=float, default=1.0, help="half Rabi frequency")
    sp.add_argument("--out", required=True, help="run directory (must be fresh)")
    sp.add_argument(
        "--dump-ham",
        action="store_true",
        help="also write the sparse operator as text triplets",
    )


def _add_time_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--tmax", type=float, default=100.0, help="final time")
    sp.add_argument("--dt", type=float, default=0.05, help="grid step")


def _add_evolve_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.add_argument("--krylov-dim", type=int, default=30)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument(
        "--blocks",
        default="",
        help="comma-separated extra block lengths for entropy columns",
    )


def _add_spectral_flags(sp: argparse.ArgumentParser):
    sp.add_argument(
        "--deg-tol",
        type=float,
        default=None,
        help="energy tolerance for degeneracy classes (default: 1e-8 of width)",
    )
    sp.add_argument("--n-scars", type=int, default=None)
    sp.add_argument("--scar-strategy", choices=SCAR_STRATEGIES, default="overlap-greedy")
    sp.add_argument(
        "--scar-min-gap",
        type=float,
        default=SCAR_MIN_GAP_DEFAULT,
        help="energy separation enforced between greedily picked scars",
    )
    sp.add_argument(
        "--allow-heavy",
        action="store_true",
        help="raise the full-diagonalization cap (slow, memory-hungry)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pxpsim",
        description="PXP-chain dynamics in the blockaded subspace",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis-info", help="print basis size, optionally the patterns")
    b.add_argument("--L", type=int, required=True)
    b.add_argument("--dump", action="store_true", help="print one pattern per line")

    ev = sub.add_parser("evolve", help="time series of global/local diagnostics")
    _add_model_flags(ev)
    _add_time_flags(ev)
    _add_evolve_flags(ev)

    lo = sub.add_parser("local", help="evolve plus per-site CSV")
    _add_model_flags(lo)
    _add_time_flags(lo)
    _add_evolve_flags(lo)

    spc = sub.add_parser("spectral", help="overlap spectrum, scars, survival series")
    _add_model_flags(spc)
    _add_time_flags(spc)
    _add_spectral_flags(spc)

    sw = sub.add_parser("sweep", help="cross-product of L and theta values")
    sw.add_argument("--kind", required=True, choices=SWEEP_KINDS)
    sw.add_argument("--L-list", required=True, help="comma-separated sizes")
    sw.add_argument("--theta-list", default=None, help="comma-separated angles")
    _add_model_flags(sw, with_size=False)
    _add_time_flags(sw)
    _add_evolve_flags(sw)
    _add_spectral_flags(sw)

    return parser


def _manifest_from_args(args: argparse.Namespace) -> RunManifest:
    kind = args.command
    if kind == "basis-info":
        return RunManifest(kind=kind, L=args.L, dump_basis=args.dump)
    theta = parse_theta(args.theta)
    if kind == "sweep":
        sizes = _parse_int_list(args.L_list)
        if not sizes:
            raise ValidationError("sweep requires a nonempty L list")
        size = sizes[0]
    else:
        size = args.L
    common = dict(
        L=size,
        state=args.state,
        theta=theta,
        theta_literal=args.theta,
        delta=args.delta,
        coupling=args.coupling,
        dump_ham=args.dump_ham,
        out_dir=args.out,
        tmax=args.tmax,
        dt=args.dt,
    )
    if kind in ("evolve", "local"):
        return RunManifest(
            kind=kind,
            method=args.method,
            krylov_dim=args.krylov_dim,
            tol=args.tol,
            blocks=_parse_int_list(args.blocks),
            **common,
        )
    if kind == "spectral":
        return RunManifest(
            kind=kind,
            deg_tol=args.deg_tol,
            n_scars=args.n_scars,
            scar_strategy=args.scar_strategy,
            scar_min_gap=args.scar_min_gap,
            allow_heavy=args.allow_heavy,
            **common,
        )
    return RunManifest(
        kind="sweep",
        sweep_kind=args.kind,
        L_list=sizes,
        theta_list=(
            _parse_str_list(args.theta_list) if args.theta_list is not None else None
        ),
        method=args.method,
        krylov_dim=args.krylov_dim,
        tol=args.tol,
        blocks=_parse_int_list(args.blocks),
        deg_tol=args.deg_tol,
        n_scars=args.n_scars,
        scar_strategy=args.scar_strategy,
        scar_min_gap=args.scar_min_gap,
        allow_heavy=args.allow_heavy,
        **common,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        manifest = _manifest_from_args(args)
        run_experiment(args.command, manifest)
    except PxpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
