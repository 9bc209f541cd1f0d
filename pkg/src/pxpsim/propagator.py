"""Time evolution by full eigendecomposition or Krylov stepping.

The exact path diagonalizes the dense operator (capped by the dense-size
limit) and applies phases in the energy eigenbasis.  The Krylov path builds
a Lanczos subspace per step with full reorthogonalization, applies the
matrix exponential on the small tridiagonal projection, and sub-steps
adaptively whenever the a-posteriori error estimate misses the tolerance.
State norms are never renormalized; drift beyond tolerance raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import LinearOperator, eigsh

from .errors import NumericalError, RangeError, ShapeError, ValidationError
from .hamiltonian import DENSE_LIMIT, SparseHamiltonian
from .states import StateVector

KRYLOV_DIM_DEFAULT = 30
KRYLOV_TOL_DEFAULT = 1e-10
STEP_NORM_DRIFT_TOL = 1e-12
_BREAKDOWN_TOL = 1e-13
_MIN_SUBSTEP_FRACTION = 2.0**-40


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k * dt for k = 0 .. n_steps (t=0 included)."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise RangeError(f"dt must be positive and finite, got {self.dt}")
        if self.n_steps < 0:
            raise RangeError(f"n_steps must be nonnegative, got {self.n_steps}")

    @classmethod
    def from_tmax(cls, tmax: float, dt: float) -> "TimeGrid":
        if not (np.isfinite(tmax) and tmax >= 0):
            raise RangeError(f"tmax must be nonnegative and finite, got {tmax}")
        if not (np.isfinite(dt) and dt > 0):
            raise RangeError(f"dt must be positive and finite, got {dt}")
        return cls(dt=float(dt), n_steps=int(round(tmax / dt)))

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    @property
    def tmax(self) -> float:
        return self.n_steps * self.dt


@dataclass(frozen=True)
class EigenDecomposition:
    """Energies ascending; column n of vectors is the n-th eigenstate."""

    energies: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        if self.energies.ndim != 1 or self.vectors.shape != (
            self.energies.size,
            self.energies.size,
        ):
            raise ShapeError("eigendecomposition arrays have inconsistent shapes")
        if np.any(np.diff(self.energies) < 0):
            raise ValidationError("energies must be ascending")

    @property
    def dim(self) -> int:
        return int(self.energies.size)


def _normalize_eigenvectors(energies: np.ndarray, vectors: np.ndarray):
    """Deterministic gauge: within exactly-degenerate groups order columns
    by the index of their first significant component, then flip signs so
    that component is positive."""
    dim = energies.size
    first = (np.abs(vectors) >= 1e-10).argmax(axis=0)
    start = 0
    while start < dim:
        stop = start + 1
        while stop < dim and energies[stop] == energies[start]:
            stop += 1
        if stop - start > 1:
            order = np.argsort(first[start:stop], kind="stable") + start
            vectors[:, start:stop] = vectors[:, order]
            first[start:stop] = first[order]
        start = stop
    signs = np.where(vectors[first, np.arange(dim)] < 0, -1.0, 1.0)
    vectors *= signs


def diagonalize(
    ham: SparseHamiltonian | np.ndarray, dense_limit: int = DENSE_LIMIT
) -> EigenDecomposition:
    """Full symmetric eigendecomposition of the dense operator."""
    if isinstance(ham, SparseHamiltonian):
        dense = ham.to_dense(dense_limit)
    else:
        dense = np.asarray(ham, dtype=np.float64)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ShapeError("dense operator must be a square matrix")
    if dense.shape[0] > 8000:
        # the default divide-and-conquer driver needs ~2 n^2 doubles of
        # workspace; above this size switch to the in-place QR driver to
        # keep one matrix-sized buffer as the peak allocation
        from scipy.linalg import eigh as scipy_eigh

        energies, vectors = scipy_eigh(dense, driver="ev", overwrite_a=True)
    else:
        energies, vectors = np.linalg.eigh(dense)
    _normalize_eigenvectors(energies, vectors)
    energies.flags.writeable = False
    vectors.flags.writeable = False
    return EigenDecomposition(energies, vectors)


def evolve_exact(eig: EigenDecomposition, psi0: StateVector, t: float) -> StateVector:
    """psi(t) = V exp(-i E t) V^T psi0; exact at t=0."""
    if not np.isfinite(t):
        raise RangeError(f"time must be finite, got {t}")
    if t == 0.0:
        return psi0
    coeffs = eig.vectors.T @ psi0.amplitudes
    phased = np.exp(-1j * eig.energies * t) * coeffs
    return StateVector(psi0.basis, eig.vectors @ phased)


class ExactPropagator:
    """Reusable exact evolution of one initial state: caches the eigenbasis
    coefficients so each snapshot costs a single dense matvec."""

    def __init__(self, eig: EigenDecomposition, psi0: StateVector):
        if eig.dim != psi0.dim:
            raise ShapeError("eigendecomposition and state dimensions differ")
        self._eig = eig
        self._basis = psi0.basis
        self._psi0 = psi0
        self._coeffs = eig.vectors.T @ psi0.amplitudes

    def at(self, t: float) -> StateVector:
        if t == 0.0:
            return self._psi0
        phased = np.exp(-1j * self._eig.energies * t) * self._coeffs
        return StateVector(self._basis, self._eig.vectors @ phased)


def _expm_from_tridiagonal(
    alpha: np.ndarray, beta: np.ndarray, h: float
) -> tuple[np.ndarray, np.ndarray]:
    """exp(-i h T) e1 for the k-dim tridiagonal T; returns (u, eigvals)."""
    k = alpha.size
    if k == 1:
        return np.exp(-1j * h * alpha[:1]), alpha[:1]
    theta, S = eigh_tridiagonal(alpha, beta[: k - 1])
    u = S @ (np.exp(-1j * h * theta) * S[0])
    return u, theta


class _LanczosSubspace:
    """Lanczos factorization of H at a fixed start vector, grown on demand
    with full reorthogonalization against all previous basis vectors."""

    def __init__(self, ham: SparseHamiltonian, v0: np.ndarray, m: int):
        self._ham = ham
        self._m = m
        self.vecs = np.empty((m, v0.size), dtype=np.complex128)
        self.vecs[0] = v0
        self._vecs_conj = np.empty_like(self.vecs)
        np.conjugate(v0, out=self._vecs_conj[0])
        self.alpha = np.empty(m)
        self.beta = np.empty(m)
        self.k = 0
        self.breakdown = False

    def grow(self) -> bool:
        """Add one Lanczos vector; False when the subspace is exhausted."""
        if self.breakdown or self.k >= self._m:
            return False
        j = self.k
        w = self._ham.matvec(self.vecs[j])
        self.alpha[j] = np.vdot(self.vecs[j], w).real
        w -= self.alpha[j] * self.vecs[j]
        if j > 0:
            w -= self.beta[j - 1] * self.vecs[j - 1]
        # one full reorthogonalization pass against the whole subspace
        overlaps_ = self._vecs_conj[: j + 1] @ w
        w -= self.vecs[: j + 1].T @ overlaps_
        b = float(np.linalg.norm(w))
        self.beta[j] = b
        self.k = j + 1
        if b < _BREAKDOWN_TOL:
            self.breakdown = True
        elif self.k < self._m:
            self.vecs[self.k] = w / b
            np.conjugate(self.vecs[self.k], out=self._vecs_conj[self.k])
        return True

    def apply_exp(self, h: float) -> tuple[np.ndarray, float]:
        """(exp(-i h H) v0 approximation, error estimate) at current size."""
        k = self.k
        u, _ = _expm_from_tridiagonal(self.alpha[:k], self.beta[:k], h)
        err = 0.0 if self.breakdown else float(self.beta[k - 1] * abs(u[-1]))
        return u @ self.vecs[:k], err


def _krylov_step(
    ham: SparseHamiltonian, v: np.ndarray, dt: float, m: int, tol: float
) -> np.ndarray:
    """Advance v by exp(-i H dt) within tolerance tol, sub-stepping as needed."""
    remaining = dt
    h = dt
    while remaining > dt * 1e-15:
        h = min(h, remaining)
        space = _LanczosSubspace(ham, v, m)
        result = None
        while space.grow():
            if space.k < 2 and not space.breakdown:
                continue
            result, err = space.apply_exp(h)
            if err <= tol * (h / dt) or space.breakdown:
                break
            result = None
        if result is None:
            # subspace exhausted at m: shrink h, reusing the same subspace
            while h > dt * _MIN_SUBSTEP_FRACTION:
                h = min(h / 2, remaining)
                result, err = space.apply_exp(h)
                if err <= tol * (h / dt):
                    break
                result = None
            if result is None:
                raise NumericalError(
                    f"Krylov step failed to reach tol={tol} at minimum sub-step "
                    f"(m={m}, dt={dt})"
                )
        v = result
        remaining -= h
        h = min(dt, 2 * h)
    return v


def evolve_krylov(
    ham: SparseHamiltonian,
    psi0: StateVector,
    grid: TimeGrid,
    m: int = KRYLOV_DIM_DEFAULT,
    tol: float = KRYLOV_TOL_DEFAULT,
) -> Iterator[StateVector]:
    """Yield snapshots at every grid time, starting with psi0 at t=0."""
    if m < 2:
        raise RangeError(f"Krylov dimension must be >= 2, got {m}")
    if not tol > 0:
        raise RangeError(f"tolerance must be positive, got {tol}")
    if ham.dim != psi0.dim:
        raise ShapeError("operator and state dimensions differ")
    yield psi0
    v = np.array(psi0.amplitudes)
    prev_norm = float(np.linalg.norm(v))
    for _ in range(grid.n_steps):
        v = _krylov_step(ham, v, grid.dt, m, tol)
        norm = float(np.linalg.norm(v))
        if abs(norm - prev_norm) > STEP_NORM_DRIFT_TOL:
            raise NumericalError(
                f"norm drift {abs(norm - prev_norm):.3e} in one step exceeds "
                f"{STEP_NORM_DRIFT_TOL}"
            )
        prev_norm = norm
        yield StateVector(psi0.basis, v)


def extremal_eigenpair(
    ham: SparseHamiltonian, which: str = "highest", tol: float = 1e-8
) -> tuple[float, StateVector]:
    """Extremal eigenvalue and eigenvector with residual check."""
    if which not in ("highest", "lowest"):
        raise ValidationError(f"which must be 'highest' or 'lowest', got {which!r}")
    if not tol > 0:
        raise RangeError(f"tolerance must be positive, got {tol}")
    dim = ham.dim
    if dim <= 16:
        eig = diagonalize(ham)
        idx = -1 if which == "highest" else 0
        energy = float(eig.energies[idx])
        vec = eig.vectors[:, idx].astype(np.complex128)
    else:
        op = LinearOperator((dim, dim), matvec=ham.matvec, dtype=np.float64)
        v0 = np.full(dim, 1.0 / np.sqrt(dim))
        try:
            vals, vecs = eigsh(
                op,
                k=1,
                which="LA" if which == "highest" else "SA",
                v0=v0,
                tol=tol * 1e-2,
            )
        except Exception as exc:
            raise NumericalError(f"extremal eigensolver failed: {exc}") from exc
        energy = float(vals[0])
        vec = vecs[:, 0]
        first = int((np.abs(vec) >= 1e-10).argmax())
        if vec[first] < 0:
            vec = -vec
        vec = vec.astype(np.complex128)
    residual = float(np.linalg.norm(ham.matvec(vec) - energy * vec))
    if residual >= tol:
        raise NumericalError(
            f"extremal eigenpair residual {residual:.3e} exceeds tol {tol}"
        )
    return energy, StateVector(ham.basis, vec)
