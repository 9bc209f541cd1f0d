"""Dynamical diagnostics: reduced density matrices, Uhlmann fidelities,
trace-distance bounds, entanglement entropy, magnetizations, and running
time statistics.

Single-site quantities are computed for all sites at once as stacked 2x2
matrices; the 2x2 Uhlmann fidelity is evaluated by two independent routes
(eigendecomposition square root and the determinant closed form) whose
agreement is checked on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .basis import fib
from .errors import (
    DomainError,
    NumericalError,
    RangeError,
    ShapeError,
    ValidationError,
)
from .propagator import TimeGrid
from .states import StateVector

# Eigenvalues of reduced matrices this far below zero are roundoff and get
# clamped; anything lower is rejected as not a density matrix.
PSD_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
# The eigendecomposition square root loses sqrt(eps) ~ 1.5e-8 digits when a
# matrix is nearly pure (an eigenvalue within roundoff of zero), so the
# cross-route guard cannot be tighter than ~1e-7 for the states dynamics
# actually visits.  Well-conditioned inputs agree to 1e-10 and better.
DUAL_PATH_TOL = 2e-7
SINGULAR_VALUE_FLOOR = 1e-14


def _validate_density_stack(mats: np.ndarray, what: str) -> np.ndarray:
    """Hermiticity, unit trace, and PSD checks on a (..., d, d) stack."""
    mats = np.asarray(mats, dtype=np.complex128)
    if mats.ndim < 2 or mats.shape[-1] != mats.shape[-2]:
        raise ShapeError(f"{what} must be square matrices, got shape {mats.shape}")
    herm_dev = float(np.max(np.abs(mats - mats.conj().swapaxes(-1, -2))))
    if herm_dev > HERMITICITY_TOL:
        raise DomainError(f"{what} deviates from Hermitian by {herm_dev:.3e}")
    traces = np.einsum("...ii->...", mats).real
    trace_dev = float(np.max(np.abs(traces - 1.0)))
    if trace_dev > TRACE_TOL:
        raise DomainError(f"{what} trace deviates from 1 by {trace_dev:.3e}")
    eigvals = np.linalg.eigvalsh(mats)
    min_eig = float(eigvals.min())
    if min_eig < -PSD_TOL:
        raise DomainError(f"{what} has negative eigenvalue {min_eig:.3e}")
    return mats


class QubitDensityMatrix:
    """Validated 2x2 density matrix of one site."""

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape != (2, 2):
            raise ShapeError(f"expected a 2x2 matrix, got shape {matrix.shape}")
        _validate_density_stack(matrix, "single-site density matrix")
        matrix.flags.writeable = False
        self.matrix = matrix


class BlockDensityMatrix:
    """Validated density matrix of the prefix block [1, ell], expressed in
    the block's own blockaded basis of dimension fib(ell + 2)."""

    def __init__(self, ell: int, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.complex128)
        expected = fib(ell + 2)
        if matrix.shape != (expected, expected):
            raise ShapeError(
                f"block of length {ell} needs a {expected}x{expected} matrix, "
                f"got {matrix.shape}"
            )
        _validate_density_stack(matrix, "block density matrix")
        matrix.flags.writeable = False
        self.ell = int(ell)
        self.matrix = matrix


@dataclass(frozen=True)
class TimeSeries:
    """Real-valued observable sampled on a TimeGrid."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_steps + 1,):
            raise ShapeError(
                f"series length {values.shape} does not match grid "
                f"({self.grid.n_steps + 1} points)"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, (QubitDensityMatrix, BlockDensityMatrix)):
        return rho.matrix
    return np.asarray(rho, dtype=np.complex128)


def global_fidelity(psi0: StateVector, psit: StateVector) -> float:
    """|<psi0|psit>|**2."""
    if psi0.basis != psit.basis:
        raise ShapeError("global fidelity requires states on the same basis")
    return float(abs(np.vdot(psi0.amplitudes, psit.amplitudes)) ** 2)


def site_rdm_stack(psi: StateVector) -> np.ndarray:
    """All L single-site reduced density matrices as an (L, 2, 2) stack.

    rho_00 = sum of |a_s|^2 over patterns with site j empty, rho_11 the
    complement, and rho_01 sums a_s * conj(a_s') over pairs differing only
    at site j (pairs that leave the blockaded space contribute nothing).
    """
    basis = psi.basis
    amps = psi.amplitudes
    prob = np.abs(amps) ** 2
    out = np.empty((basis.L, 2, 2), dtype=np.complex128)
    for j in range(1, basis.L + 1):
        mask = basis.site_mask(j)
        p11 = float(prob[mask].sum())
        p00 = float(prob[~mask].sum())
        src, dst = basis.site_coherence_pairs(j)
        coh = complex(np.sum(amps[src] * amps[dst].conj()))
        out[j - 1] = [[p00, coh], [coh.conjugate(), p11]]
    return out


def single_site_rdm(psi: StateVector, j: int) -> QubitDensityMatrix:
    """Reduced density matrix of site j (1-based)."""
    basis = psi.basis
    if not 1 <= j <= basis.L:
        raise RangeError(f"site index must be in [1, {basis.L}], got {j}")
    amps = psi.amplitudes
    mask = basis.site_mask(j)
    prob = np.abs(amps) ** 2
    p11 = float(prob[mask].sum())
    p00 = float(prob[~mask].sum())
    src, dst = basis.site_coherence_pairs(j)
    coh = complex(np.sum(amps[src] * amps[dst].conj()))
    return QubitDensityMatrix([[p00, coh], [coh.conjugate(), p11]])


def site_magnetizations(psi: StateVector) -> np.ndarray:
    """<Z_j> = rho_11 - rho_00 for every site, as a length-L array."""
    stack = site_rdm_stack(psi)
    return (stack[:, 1, 1] - stack[:, 0, 0]).real


def magnetization(psi: StateVector, j: int) -> float:
    """<Z_j> = rho_11 - rho_00 of the single-site reduced matrix."""
    rho = single_site_rdm(psi, j).matrix
    return float((rho[1, 1] - rho[0, 0]).real)


def _coefficient_matrix(psi: StateVector, ell: int) -> np.ndarray:
    """Amplitudes arranged as a (left block) x (right block) matrix; pairs
    absent from the bipartition stay zero."""
    part = psi.basis.bipartition(ell)
    mat = np.zeros((part.left.dim, part.right.dim), dtype=np.complex128)
    mat[part.left_index, part.right_index] = psi.amplitudes
    return mat


def block_rdm(psi: StateVector, ell: int) -> BlockDensityMatrix:
    """Density matrix of sites 1..ell in the block's blockaded basis."""
    mat = _coefficient_matrix(psi, ell)
    return BlockDensityMatrix(ell, mat @ mat.conj().T)


def entanglement_entropy(psi: StateVector, ell: int) -> float:
    """Von Neumann entropy (natural log) across the cut after site ell,
    from singular values of the bipartition coefficient matrix."""
    sv = np.linalg.svd(_coefficient_matrix(psi, ell), compute_uv=False)
    sv = sv[sv >= SINGULAR_VALUE_FLOOR]
    p = sv**2
    return float(-np.sum(p * np.log(p)))


def _clamped_psd_eigh(mats: np.ndarray, what: str):
    vals, vecs = np.linalg.eigh(mats)
    min_eig = float(vals.min())
    if min_eig < -PSD_TOL:
        raise DomainError(f"{what} has negative eigenvalue {min_eig:.3e}")
    return np.clip(vals, 0.0, None), vecs


def _uhlmann_general(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[Tr sqrt(sqrt(a) b sqrt(a))]**2 on (..., d, d) stacks."""
    vals, vecs = _clamped_psd_eigh(a, "fidelity input")
    sq = np.einsum(
        "...ik,...k,...jk->...ij", vecs, np.sqrt(vals), vecs.conj(), optimize=True
    )
    inner = sq @ b @ sq
    ev = np.linalg.eigvalsh(inner)
    # inner matrices are PSD up to roundoff; tiny negatives get clamped
    ev = np.clip(ev, 0.0, None)
    return np.sum(np.sqrt(ev), axis=-1) ** 2


def _uhlmann_closed_2x2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tr(ab) + 2 sqrt(det a det b) on (..., 2, 2) stacks."""
    tr_ab = np.einsum("...ij,...ji->...", a, b).real
    det_a = (a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]).real
    det_b = (b[..., 0, 0] * b[..., 1, 1] - b[..., 0, 1] * b[..., 1, 0]).real
    min_det = min(float(det_a.min()), float(det_b.min()))
    if min_det < -PSD_TOL:
        raise DomainError(f"fidelity input has negative determinant {min_det:.3e}")
    prod = np.clip(det_a, 0.0, None) * np.clip(det_b, 0.0, None)
    return tr_ab + 2.0 * np.sqrt(prod)


def uhlmann_fidelity_stack(rhos: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """Batched 2x2 Uhlmann fidelity with the mandatory dual-path check."""
    rhos = _validate_density_stack(rhos, "fidelity input")
    sigmas = _validate_density_stack(sigmas, "fidelity input")
    if rhos.shape != sigmas.shape or rhos.shape[-1] != 2:
        raise ShapeError("expected matching stacks of 2x2 density matrices")
    closed = _uhlmann_closed_2x2(rhos, sigmas)
    general = _uhlmann_general(rhos, sigmas)
    dev = float(np.max(np.abs(closed - general)))
    if dev > DUAL_PATH_TOL:
        raise NumericalError(
            f"2x2 fidelity routes disagree by {dev:.3e} (> {DUAL_PATH_TOL})"
        )
    return np.clip(closed, 0.0, 1.0)


def uhlmann_fidelity(rho, sigma) -> float:
    """Uhlmann fidelity of two equal-dimension density matrices.

    2x2 inputs are evaluated by both the closed form and the matrix square
    root; disagreement beyond tolerance is a numerical error.
    """
    a = _as_matrix(rho)
    b = _as_matrix(sigma)
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if a.shape == (2, 2):
        return float(uhlmann_fidelity_stack(a, b))
    a = _validate_density_stack(a, "fidelity input")
    b = _validate_density_stack(b, "fidelity input")
    return float(np.clip(_uhlmann_general(a, b), 0.0, 1.0))


def trace_distance(rho, sigma) -> float:
    """Half the sum of absolute eigenvalues of rho - sigma."""
    a = _as_matrix(rho)
    b = _as_matrix(sigma)
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def trace_distance_stack(rhos: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """Batched trace distance on (..., d, d) stacks."""
    diff = np.asarray(rhos) - np.asarray(sigmas)
    return 0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=-1)


def max_trace_distance(fidelity):
    """Upper bound sqrt(1 - F) on the trace distance; accepts arrays."""
    f = np.asarray(fidelity, dtype=np.float64)
    if np.any(f < -1e-12) or np.any(f > 1.0 + 1e-12):
        raise RangeError("fidelity must lie in [0, 1]")
    out = np.sqrt(np.clip(1.0 - f, 0.0, None))
    return float(out) if out.ndim == 0 else out


def local_fidelities(psi0: StateVector, psit: StateVector) -> np.ndarray:
    """Uhlmann fidelity F_j between ρ_j(0) and ρ_j(t) for every site."""
    if psi0.basis != psit.basis:
        raise ShapeError("local fidelities require states on the same basis")
    return uhlmann_fidelity_stack(site_rdm_stack(psi0), site_rdm_stack(psit))


def avg_local_fidelity(psi0: StateVector, psit: StateVector) -> float:
    """Spatial average (1/L) sum_j F_j."""
    return float(local_fidelities(psi0, psit).mean())


def product_local_fidelity(psi0: StateVector, psit: StateVector) -> tuple[float, float]:
    """Product over sites of F_j, returned as (value, log-sum); the log-sum
    stays finite (-inf only when some F_j is exactly 0) where the plain
    product would underflow."""
    fj = local_fidelities(psi0, psit)
    with np.errstate(divide="ignore"):
        logs = np.log(fj)
    return float(np.prod(fj)), float(np.sum(logs))


def _cumulative_trapezoid(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    return cumulative_trapezoid(values, times, initial=0.0)


def cesaro_average(series: TimeSeries) -> TimeSeries:
    """Running average (1/t) * integral of the series by trapezoid rule;
    defined as f(0) at t=0."""
    t = series.times
    integral = _cumulative_trapezoid(series.values, t)
    out = np.empty_like(series.values)
    out[0] = series.values[0]
    out[1:] = integral[1:] / t[1:]
    return TimeSeries(series.grid, out)


def running_std(series: TimeSeries) -> TimeSeries:
    """sigma(t) = sqrt((1/t) * integral of [f(t') - mean(t')]^2 dt') where
    mean(t') is the running average at t', i.e. the deviation is taken from
    the instantaneous running mean inside the integrand; 0 at t=0."""
    t = series.times
    mean_run = cesaro_average(series).values
    dev2 = (series.values - mean_run) ** 2
    integral = _cumulative_trapezoid(dev2, t)
    out = np.empty_like(series.values)
    out[0] = 0.0
    out[1:] = np.sqrt(np.clip(integral[1:] / t[1:], 0.0, None))
    return TimeSeries(series.grid, out)


def running_std_conventional(series: TimeSeries) -> TimeSeries:
    """Conventional windowed deviation sqrt(mean(f^2) - mean(f)^2) with both
    means taken as running averages over [0, t]; 0 at t=0."""
    sq = TimeSeries(series.grid, series.values**2)
    mean_sq = cesaro_average(sq).values
    mean = cesaro_average(series).values
    var = np.clip(mean_sq - mean**2, 0.0, None)
    return TimeSeries(series.grid, np.sqrt(var))
