"""Enumeration and indexing of the nearest-neighbour-blockaded configuration space.

A chain of L two-level sites is restricted to bit patterns with no two
adjacent 1s.  Site j lives on bit j-1, so site 1 is the least significant
bit and a pattern prints with site L on the left.  The number of allowed
patterns on L sites is fib(L + 2) with fib(1) = fib(2) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError, ShapeError, ValidationError

# fib(93) overflows a signed 64-bit integer.
MAX_FIB_INDEX = 92

# Enumeration guard: fib(32) = 2178309 patterns is the largest chain this
# build will materialize (int64 state table ~ 17 MB).
MAX_SITES = 30


def fib(n: int) -> int:
    """Fibonacci number with fib(1) = fib(2) = 1, exact in int arithmetic."""
    if not 1 <= n <= MAX_FIB_INDEX:
        raise RangeError(f"fibonacci index must be in [1, {MAX_FIB_INDEX}], got {n}")
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return b


def is_blockade_free(pattern: int) -> bool:
    """True when the bit pattern has no two adjacent 1s."""
    return pattern & (pattern >> 1) == 0


class BlockadedBasis:
    """Immutable table of blockade-free patterns on L sites, ascending order.

    Instances are produced by :func:`enumerate_basis`.  Lookup tables used
    by operator construction and reduced density matrices are built lazily
    and cached per site.
    """

    def __init__(self, L: int, states: np.ndarray):
        self.L = int(L)
        states = np.ascontiguousarray(states, dtype=np.int64)
        states.flags.writeable = False
        self.states = states
        self.dim = int(states.size)
        self._site_masks: dict[int, np.ndarray] = {}
        self._flip_partners: dict[int, np.ndarray] = {}
        self._coherence_pairs: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._bipartitions: dict[int, BipartitionMap] = {}

    def __repr__(self) -> str:
        return f"BlockadedBasis(L={self.L}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, BlockadedBasis)
            and self.L == other.L
            and self.dim == other.dim
        )

    def __hash__(self):
        return hash((self.L, self.dim))

    def _check_site(self, j: int) -> int:
        if not 1 <= j <= self.L:
            raise RangeError(f"site index must be in [1, {self.L}], got {j}")
        return int(j)

    def index(self, pattern: int) -> int:
        """Ordinal of a pattern in the ascending state table."""
        pattern = int(pattern)
        pos = int(np.searchsorted(self.states, pattern))
        if pos == self.dim or int(self.states[pos]) != pattern:
            raise ValidationError(
                f"pattern {pattern:#x} is not in the blockaded basis for L={self.L}"
            )
        return pos

    def index_many(self, patterns: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`index`; every input pattern must be present."""
        patterns = np.asarray(patterns, dtype=np.int64)
        pos = np.searchsorted(self.states, patterns)
        if np.any(pos == self.dim) or not np.array_equal(self.states[pos], patterns):
            raise ValidationError("one or more patterns are not in the basis")
        return pos.astype(np.int64)

    def site_mask(self, j: int) -> np.ndarray:
        """Boolean array: pattern has site j excited."""
        j = self._check_site(j)
        cached = self._site_masks.get(j)
        if cached is None:
            cached = (self.states >> (j - 1)) & 1 == 1
            cached.flags.writeable = False
            self._site_masks[j] = cached
        return cached

    def site_flip_partner(self, j: int) -> np.ndarray:
        """Ordinal reached by flipping site j, or -1 when the flip leaves
        the blockaded space (an existing neighbour is excited)."""
        j = self._check_site(j)
        cached = self._flip_partners.get(j)
        if cached is None:
            bit = np.int64(1) << (j - 1)
            neighbours = np.int64(0)
            if j > 1:
                neighbours |= np.int64(1) << (j - 2)
            if j < self.L:
                neighbours |= np.int64(1) << j
            allowed = (self.states & neighbours) == 0
            flipped = self.states ^ bit
            partner = np.full(self.dim, -1, dtype=np.int64)
            # flips of allowed rows stay blockade-free, so lookup cannot miss
            partner[allowed] = self.index_many(flipped[allowed])
            partner.flags.writeable = False
            cached = partner
            self._flip_partners[j] = cached
        return cached

    def site_coherence_pairs(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """Ordinal pairs (s with site j empty, same s with site j excited)
        connected by a blockade-respecting flip.  Used for off-diagonal
        reduced-density-matrix elements."""
        j = self._check_site(j)
        cached = self._coherence_pairs.get(j)
        if cached is None:
            partner = self.site_flip_partner(j)
            src = np.flatnonzero(~self.site_mask(j) & (partner >= 0))
            dst = partner[src]
            src.flags.writeable = False
            dst.flags.writeable = False
            cached = (src, dst)
            self._coherence_pairs[j] = cached
        return cached

    def bipartition(self, ell: int) -> "BipartitionMap":
        """Cached left/right factorization at the cut after site ell."""
        if not 1 <= ell < self.L:
            raise RangeError(
                f"cut position must be in [1, {self.L - 1}], got {ell}"
            )
        ell = int(ell)
        cached = self._bipartitions.get(ell)
        if cached is None:
            cached = _build_bipartition(self, ell)
            self._bipartitions[ell] = cached
        return cached


@dataclass(frozen=True)
class BipartitionMap:
    """Factorization of the chain into sites 1..ell and ell+1..L.

    A parent pattern splits into (left, right) sub-patterns that are each
    blockade-free; the constraint across the cut is that left site ell and
    right site ell+1 are not both excited.  left_index/right_index give the
    sub-basis ordinals of every parent ordinal.
    """

    ell: int
    left: BlockadedBasis
    right: BlockadedBasis
    left_index: np.ndarray
    right_index: np.ndarray

    def __post_init__(self):
        if self.left_index.shape != self.right_index.shape:
            raise ShapeError("bipartition index tables must have equal length")


def _build_bipartition(basis: BlockadedBasis, ell: int) -> BipartitionMap:
    left = enumerate_basis(ell)
    right = enumerate_basis(basis.L - ell)
    mask = (np.int64(1) << ell) - 1
    left_index = left.index_many(basis.states & mask)
    right_index = right.index_many(basis.states >> ell)
    left_index.flags.writeable = False
    right_index.flags.writeable = False
    return BipartitionMap(ell, left, right, left_index, right_index)


def enumerate_basis(L: int) -> BlockadedBasis:
    """All blockade-free patterns on L sites in ascending integer order.

    Built by the two-term recurrence: patterns on n sites are the patterns
    on n-1 sites (site n empty) followed by patterns on n-2 sites with
    site n excited and site n-1 forced empty.  Both blocks are internally
    ascending and the second block starts at 2**(n-1), so the concatenation
    is ascending without a sort and never scans the full 2**L space.
    """
    if not 1 <= L <= MAX_SITES:
        raise RangeError(f"chain length must be in [1, {MAX_SITES}], got {L}")
    prev2 = np.array([0], dtype=np.int64)          # L = 0: empty pattern only
    prev1 = np.array([0, 1], dtype=np.int64)       # L = 1
    if L == 1:
        return BlockadedBasis(1, prev1)
    for n in range(2, L + 1):
        top = np.int64(1) << (n - 1)
        states = np.concatenate([prev1, prev2 + top])
        prev2, prev1 = prev1, states
    return BlockadedBasis(L, prev1)
