"""PXP operator restricted to the blockaded basis, open boundaries.

H = coupling * (X_1 P_2 + sum_{1<j<L} P_{j-1} X_j P_{j+1} + P_{L-1} X_L)
    + detuning * sum_j n_j

with coupling playing the role of the half-Rabi frequency: every allowed
flip has matrix element equal to coupling, and times are measured in units
of 1 / coupling (default coupling = 1).  Within the blockaded basis the
kinetic term reduces to an adjacency structure: pattern s connects to
s XOR (1 << (j-1)) exactly when all existing neighbours of site j are
empty in s.  The detuning enters only on the diagonal as
detuning * (number of excited sites).
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix

from .basis import BlockadedBasis
from .errors import CapacityError, ShapeError, ValidationError

# Largest dimension this build will densify: fib(L+2) <= 7000 covers L <= 17.
DENSE_LIMIT = 7000


class SparseHamiltonian:
    """CSR-structured PXP operator on a fixed blockaded basis.

    The off-diagonal structure stores connected ordinals only (every stored
    element equals the uniform coupling); the diagonal is kept as a separate
    vector.  Instances are immutable after construction.
    """

    def __init__(self, basis: BlockadedBasis, coupling: float, detuning: float):
        if not np.isfinite(coupling) or not np.isfinite(detuning):
            raise ValidationError("coupling and detuning must be finite")
        if coupling == 0.0:
            raise ValidationError("coupling must be nonzero")
        self.basis = basis
        self.coupling = float(coupling)
        self.detuning = float(detuning)
        indptr, indices = _adjacency(basis)
        self.indptr = indptr
        self.indices = indices
        occupancy = np.bitwise_count(basis.states.view(np.uint64)).astype(np.float64)
        diagonal = self.detuning * occupancy
        diagonal.flags.writeable = False
        self.diagonal = diagonal
        data = np.full(indices.size, self.coupling)
        self._kinetic = csr_matrix(
            (data, indices, indptr), shape=(basis.dim, basis.dim)
        )

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def nnz(self) -> int:
        """Stored entries: off-diagonal couplings plus nonzero diagonal."""
        off = int(self.indices.size)
        if self.detuning != 0.0:
            off += int(np.count_nonzero(self.diagonal))
        return off

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        """Apply H to a raw amplitude vector (real or complex)."""
        vec = np.asarray(vec)
        if vec.shape != (self.dim,):
            raise ShapeError(
                f"vector shape {vec.shape} does not match dimension {self.dim}"
            )
        out = self._kinetic.dot(vec)
        if self.detuning != 0.0:
            out = out + self.diagonal * vec
        return out

    def to_dense(self, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
        """Dense symmetric matrix; refuses above dense_limit."""
        if self.dim > dense_limit:
            raise CapacityError(
                f"dense form of dimension {self.dim} exceeds limit {dense_limit}"
            )
        dense = self._kinetic.toarray()
        if self.detuning != 0.0:
            dense[np.diag_indices(self.dim)] += self.diagonal
        return dense

    def iter_triplets(self):
        """Yield (row, col, value) for every stored entry, row-major with
        ascending columns, diagonal entry last in its row."""
        for row in range(self.dim):
            for col in self.indices[self.indptr[row]:self.indptr[row + 1]]:
                yield row, int(col), self.coupling
            if self.detuning != 0.0 and self.diagonal[row] != 0.0:
                yield row, row, float(self.diagonal[row])


def _adjacency(basis: BlockadedBasis) -> tuple[np.ndarray, np.ndarray]:
    """CSR (indptr, indices) of single-site flips allowed by the blockade."""
    rows = []
    cols = []
    for j in range(1, basis.L + 1):
        partner = basis.site_flip_partner(j)
        valid = np.flatnonzero(partner >= 0)
        rows.append(valid)
        cols.append(partner[valid])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    order = np.lexsort((cols, rows))
    rows = rows[order]
    cols = cols[order]
    counts = np.bincount(rows, minlength=basis.dim)
    indptr = np.zeros(basis.dim + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = cols.astype(np.int32 if basis.dim < 2**31 else np.int64)
    indptr.flags.writeable = False
    indices.flags.writeable = False
    return indptr, indices


def build_pxp(
    basis: BlockadedBasis, coupling: float = 1.0, detuning: float = 0.0
) -> SparseHamiltonian:
    """PXP operator with open boundaries on the given basis."""
    return SparseHamiltonian(basis, coupling, detuning)
