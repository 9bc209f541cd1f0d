"""Overlap spectra, survival amplitude, Wiener-style long-time averages,
scar identification, and the scar lower bound.

The long-time average of |nu(t)|^2 over an infinite window equals the sum
of squared weights aggregated over degenerate energy classes; degeneracy is
detected by an energy tolerance because the model carries an exact
zero-energy manifold that finite-precision eigensolvers split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .basis import BlockadedBasis
from .errors import (
    NumericalError,
    RangeError,
    SelectionError,
    ShapeError,
    ValidationError,
)
from .hamiltonian import SparseHamiltonian
from .observables import entanglement_entropy
from .propagator import EigenDecomposition
from .states import StateSpec, StateVector, make_state

WEIGHT_SUM_TOL = 1e-10
DEG_TOL_RELATIVE = 1e-8
SCAR_MIN_GAP_DEFAULT = 0.5
SCAR_STRATEGIES = ("overlap-greedy", "band")


@dataclass(frozen=True)
class OverlapSpectrum:
    """Energies ascending with the initial state's spectral weights."""

    energies: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.energies.shape != self.weights.shape or self.energies.ndim != 1:
            raise ShapeError("energies and weights must be equal-length vectors")
        if np.any(np.diff(self.energies) < 0):
            raise ValidationError("energies must be ascending")
        if np.any(self.weights < 0):
            raise ValidationError("weights must be nonnegative")
        total = float(self.weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise NumericalError(
                f"spectral weights sum to {total!r}, not 1 within {WEIGHT_SUM_TOL}"
            )

    @property
    def width(self) -> float:
        return float(self.energies[-1] - self.energies[0])


@dataclass(frozen=True)
class ScarSet:
    """Selected scar eigenstates: ordinals into the eigendecomposition plus
    per-scar energy, weight on |Z2>, and half-chain entropy."""

    indices: np.ndarray
    energies: np.ndarray
    z2_weights: np.ndarray
    entropies: np.ndarray
    strategy: str

    def __post_init__(self):
        n = self.indices.size
        if len(np.unique(self.indices)) != n:
            raise ValidationError("scar indices must be distinct")
        for arr in (self.energies, self.z2_weights, self.entropies):
            if arr.shape != (n,):
                raise ShapeError("scar arrays must have equal length")

    @property
    def count(self) -> int:
        return int(self.indices.size)


def overlaps(eig: EigenDecomposition, psi0: StateVector) -> OverlapSpectrum:
    """Spectral weights |<E_n|psi0>|^2 of the initial state."""
    if eig.dim != psi0.dim:
        raise ShapeError("eigendecomposition and state dimensions differ")
    coeffs = eig.vectors.T @ psi0.amplitudes
    weights = np.abs(coeffs) ** 2
    return OverlapSpectrum(np.array(eig.energies), weights)


def survival_amplitude(spectrum: OverlapSpectrum, t):
    """nu(t) = sum_n w_n exp(-i E_n t); scalar in, scalar out.

    Array arguments are evaluated in time chunks to bound the size of the
    phase matrix.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if not np.all(np.isfinite(t_arr)):
        raise RangeError("times must be finite")
    energies = spectrum.energies
    weights = spectrum.weights
    out = np.empty(t_arr.size, dtype=np.complex128)
    chunk = max(1, 4_000_000 // max(1, energies.size))
    for start in range(0, t_arr.size, chunk):
        sl = slice(start, min(start + chunk, t_arr.size))
        phases = np.exp(-1j * np.outer(t_arr[sl], energies))
        out[sl] = phases @ weights
    return complex(out[0]) if np.isscalar(t) or np.ndim(t) == 0 else out


def longtime_average(spectrum: OverlapSpectrum, deg_tol: float | None = None) -> float:
    """Infinite-time average of |nu(t)|^2: sum over degeneracy classes of
    the squared class weight.  Classes chain consecutive energies whose gap
    is <= deg_tol; the default tolerance is 1e-8 of the spectral width."""
    if deg_tol is None:
        deg_tol = DEG_TOL_RELATIVE * spectrum.width
    if deg_tol < 0:
        raise RangeError(f"degeneracy tolerance must be >= 0, got {deg_tol}")
    gaps = np.diff(spectrum.energies)
    starts = np.r_[0, np.flatnonzero(gaps > deg_tol) + 1]
    class_weights = np.add.reduceat(spectrum.weights, starts)
    return float(np.sum(class_weights**2))


def _z2_weights(eig: EigenDecomposition, basis: BlockadedBasis) -> np.ndarray:
    psi = make_state(basis, StateSpec("neel"))
    coeffs = eig.vectors.T @ psi.amplitudes
    return np.abs(coeffs) ** 2


def identify_scars(
    eig: EigenDecomposition,
    basis: BlockadedBasis,
    n_scars: int | None = None,
    strategy: str = "overlap-greedy",
    min_gap: float = SCAR_MIN_GAP_DEFAULT,
) -> ScarSet:
    """Pick the scarred tower by overlap with the Neel state.

    "overlap-greedy" repeatedly takes the highest-overlap eigenstate whose
    energy is at least min_gap away from every state already picked;
    "band" splits the spectrum into n_scars equal energy bands and takes
    the top-overlap state in each.  Defaults: n_scars = L + 1 (the tower
    size for this model), min_gap = 0.5 in coupling units.
    """
    if strategy not in SCAR_STRATEGIES:
        raise ValidationError(
            f"unknown strategy {strategy!r}; expected one of {SCAR_STRATEGIES}"
        )
    if n_scars is None:
        n_scars = basis.L + 1
    if n_scars < 1:
        raise RangeError(f"scar count must be >= 1, got {n_scars}")
    if eig.dim != basis.dim:
        raise ShapeError("eigendecomposition does not match the basis")
    if n_scars > eig.dim:
        raise RangeError(f"cannot select {n_scars} scars from {eig.dim} states")
    z2w = _z2_weights(eig, basis)
    if strategy == "overlap-greedy":
        picked: list[int] = []
        for idx in np.argsort(-z2w, kind="stable"):
            energy = eig.energies[idx]
            if all(abs(energy - eig.energies[p]) >= min_gap for p in picked):
                picked.append(int(idx))
                if len(picked) == n_scars:
                    break
        if len(picked) < n_scars:
            raise SelectionError(
                f"only {len(picked)} of {n_scars} scar candidates are separated "
                f"by {min_gap} in energy"
            )
        indices = np.sort(np.asarray(picked, dtype=np.int64))
    else:
        edges = np.linspace(eig.energies[0], eig.energies[-1], n_scars + 1)
        picked = []
        for b in range(n_scars):
            lo = np.searchsorted(eig.energies, edges[b], side="left")
            hi = (
                eig.dim
                if b == n_scars - 1
                else np.searchsorted(eig.energies, edges[b + 1], side="left")
            )
            if hi <= lo:
                raise SelectionError(
                    f"energy band {b + 1} of {n_scars} contains no eigenstates "
                    f"(selected {len(picked)} so far)"
                )
            picked.append(int(lo + np.argmax(z2w[lo:hi])))
        indices = np.sort(np.asarray(picked, dtype=np.int64))
        if len(np.unique(indices)) < n_scars:
            raise SelectionError("energy bands selected duplicate states")
    half = basis.L // 2
    entropies = np.array(
        [
            entanglement_entropy(StateVector(basis, eig.vectors[:, i]), half)
            for i in indices
        ]
    )
    return ScarSet(
        indices=indices,
        energies=np.array(eig.energies[indices]),
        z2_weights=z2w[indices],
        entropies=entropies,
        strategy=strategy,
    )


def scar_bound(scars: ScarSet, eig: EigenDecomposition, psi0: StateVector) -> float:
    """Lower bound sum over scars of |<S_n|psi0>|^4 on the long-time
    average of the survival probability."""
    if eig.dim != psi0.dim:
        raise ShapeError("eigendecomposition and state dimensions differ")
    coeffs = eig.vectors[:, scars.indices].T @ psi0.amplitudes
    weights = np.abs(coeffs) ** 2
    return float(np.sum(weights**2))


def dominant_overlap(
    ham: SparseHamiltonian,
    psi0: StateVector,
    k_start: int = 64,
    k_max: int = 1024,
) -> tuple[float, float, bool]:
    """Largest spectral weight of psi0, found from the top of the spectrum
    without full diagonalization.

    Computes the k highest eigenpairs and doubles k until the captured
    weight W and captured maximum m satisfy m > 1 - W, which certifies that
    no uncaptured eigenstate can beat m.  Returns (energy, weight,
    certified); certified=False means k_max was reached first.
    """
    dim = ham.dim
    if psi0.dim != dim:
        raise ShapeError("operator and state dimensions differ")
    op = LinearOperator((dim, dim), matvec=ham.matvec, dtype=np.float64)
    v0 = np.full(dim, 1.0 / np.sqrt(dim))
    k = min(k_start, dim - 2)
    best_energy = 0.0
    best_weight = 0.0
    while True:
        try:
            vals, vecs = eigsh(op, k=k, which="LA", v0=v0)
        except Exception as exc:
            raise NumericalError(f"partial eigensolver failed: {exc}") from exc
        weights = np.abs(vecs.T @ psi0.amplitudes) ** 2
        top = int(np.argmax(weights))
        best_energy = float(vals[top])
        best_weight = float(weights[top])
        captured = float(weights.sum())
        if best_weight > 1.0 - captured:
            return best_energy, best_weight, True
        if k >= min(k_max, dim - 2):
            return best_energy, best_weight, False
        k = min(k * 2, dim - 2)
