"""Initial-state constructions on the blockaded basis.

All states are built in closed form directly on the constrained basis
(powers of sin/cos on the allowed support), never by projecting a full
2**L vector.  Construction verifies unit norm; a violation is a hard
numerical error, not a silent renormalization.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .basis import BlockadedBasis, fib
from .errors import (
    NumericalError,
    RangeError,
    ShapeError,
    UnsupportedConfigurationError,
    ValidationError,
)

STATE_KINDS = (
    "homogeneous",
    "neel",
    "neel_prime",
    "theta_plus",
    "theta_plus_prime",
    "theta_symm",
    "blockaded",
)

_THETA_KINDS = frozenset({"theta_plus", "theta_plus_prime", "theta_symm"})

NORM_TOL = 1e-12


@dataclass(frozen=True)
class StateSpec:
    """Named initial state; theta is only read by the theta_* kinds."""

    kind: str
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValidationError(
                f"unknown state kind {self.kind!r}; expected one of {STATE_KINDS}"
            )
        if not math.isfinite(self.theta):
            raise RangeError("theta must be finite")


class StateVector:
    """Unit-norm amplitude vector over a fixed blockaded basis."""

    def __init__(self, basis: BlockadedBasis, amplitudes: np.ndarray):
        amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (basis.dim,):
            raise ShapeError(
                f"amplitude shape {amplitudes.shape} does not match basis dim {basis.dim}"
            )
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise NumericalError(
                f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}"
            )
        amplitudes.flags.writeable = False
        self.basis = basis
        self.amplitudes = amplitudes

    @property
    def dim(self) -> int:
        return self.basis.dim

    def __repr__(self) -> str:
        return f"StateVector(L={self.basis.L}, dim={self.dim})"


def _sublattice_mask(L: int, parity: int) -> int:
    """Bit mask of the odd-site (parity=0: bits 0,2,...) or even-site
    sublattice (parity=1: bits 1,3,...)."""
    mask = 0
    for b in range(parity, L, 2):
        mask |= 1 << b
    return mask


def _neel_pattern(L: int, prime: bool) -> int:
    """|Z2> excites the odd sites (site 1, 3, ...); the primed partner
    excites the even sites."""
    return _sublattice_mask(L, 1 if prime else 0)


def _product_amplitudes(basis: BlockadedBasis, theta: float, parity: int) -> np.ndarray:
    """Amplitudes of the staggered product state: sin(theta)^|A| *
    cos(theta)^(L/2 - |A|) on the pattern with excitation set A inside one
    sublattice, zero off that sublattice."""
    L = basis.L
    allowed = np.int64(_sublattice_mask(L, parity))
    states = basis.states
    support = (states & ~allowed) == 0
    k = np.bitwise_count((states[support] & allowed).view(np.uint64)).astype(np.int64)
    amps = np.zeros(basis.dim)
    amps[support] = np.sin(theta) ** k * np.cos(theta) ** (L // 2 - k)
    return amps


def make_state(basis: BlockadedBasis, spec: StateSpec) -> StateVector:
    """Construct a named state on the given basis.

    theta kinds require an even number of sites; the staggered product
    states are only defined when the two sublattices have L/2 sites each.
    """
    L = basis.L
    kind = spec.kind
    if kind in _THETA_KINDS and L % 2 != 0:
        raise UnsupportedConfigurationError(
            f"state kind {kind!r} requires an even number of sites, got L={L}"
        )
    if kind == "homogeneous":
        amps = np.zeros(basis.dim)
        amps[basis.index(0)] = 1.0
    elif kind == "neel":
        amps = np.zeros(basis.dim)
        amps[basis.index(_neel_pattern(L, prime=False))] = 1.0
    elif kind == "neel_prime":
        amps = np.zeros(basis.dim)
        amps[basis.index(_neel_pattern(L, prime=True))] = 1.0
    elif kind == "theta_plus":
        amps = _product_amplitudes(basis, spec.theta, parity=0)
    elif kind == "theta_plus_prime":
        amps = _product_amplitudes(basis, spec.theta, parity=1)
    elif kind == "theta_symm":
        plus = _product_amplitudes(basis, spec.theta, parity=0)
        prime = _product_amplitudes(basis, spec.theta, parity=1)
        scale = math.sqrt(2.0 * (1.0 + math.cos(spec.theta) ** L))
        amps = (plus + prime) / scale
    elif kind == "blockaded":
        amps = np.full(basis.dim, 1.0 / math.sqrt(fib(L + 2)))
    else:  # pragma: no cover - StateSpec already validates the kind
        raise ValidationError(f"unknown state kind {kind!r}")
    return StateVector(basis, amps)


def overlap(u: StateVector, v: StateVector) -> complex:
    """<u|v> with the conjugate on the first argument."""
    if u.basis != v.basis:
        raise ValidationError("overlap requires states on the same basis")
    return complex(np.vdot(u.amplitudes, v.amplitudes))


_PI_LITERAL = re.compile(
    r"^\s*(?P<num>\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE,
)


def parse_theta(text: str) -> float:
    """Angle from a command-line token.

    Accepts plain decimals and exact multiples of pi written as 'pi',
    'pi/4', '3pi/8' or '3*pi/8', evaluated symbolically so 'pi/4' lands on
    the nearest float to pi/4 rather than on a decimal approximation.
    """
    match = _PI_LITERAL.match(text)
    if match:
        num = float(match.group("num")) if match.group("num") else 1.0
        den = float(match.group("den")) if match.group("den") else 1.0
        if den == 0.0:
            raise ValidationError(f"zero denominator in angle literal {text!r}")
        return num * math.pi / den
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise RangeError(f"angle must be finite, got {text!r}")
    return value
