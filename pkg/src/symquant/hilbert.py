"""Amplitude vectors over orthonormal base states.

Base states are component indices (0-based).  Components are pairs under
Elliptic (complex) arithmetic, stored as a complex128 array.  Batch helpers
operate on (draws, n) complex arrays for Monte Carlo work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._sampling import check_seed
from .errors import DimensionError, DomainError, NonUnitaryError, SymquantError
from .pairs import TWO_PI, Pair

UNITARY_TOL = 1e-9


class AmplitudeVector:
    """Immutable n-component vector of pairs."""

    __slots__ = ("_z",)

    def __init__(self, components):
        if _is_pair_list(components):
            z = np.array([p.to_complex() for p in components])
        else:
            arr = np.asarray(components)
            # A real (n, 2) array is read as n pairs.
            if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
                z = arr[:, 0] + 1j * arr[:, 1]
            else:
                z = arr.astype(np.complex128)
        if z.ndim != 1 or z.size == 0:
            raise DimensionError(f"amplitude vector needs shape (n,), got {z.shape}")
        if not np.all(np.isfinite(z)):
            raise SymquantError("amplitude components must be finite")
        z.flags.writeable = False
        self._z = z

    @property
    def n(self) -> int:
        return self._z.size

    @property
    def array(self) -> np.ndarray:
        """Read-only complex view."""
        return self._z

    @property
    def pairs(self) -> list[Pair]:
        return [Pair.from_complex(c) for c in self._z]

    def norm2(self) -> float:
        return float(np.sum(self._z.real ** 2 + self._z.imag ** 2))

    def born(self) -> np.ndarray:
        """Per-component Born rates."""
        return self._z.real ** 2 + self._z.imag ** 2

    def __add__(self, other):
        if not isinstance(other, AmplitudeVector):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"cannot add vectors of length {self.n} and {other.n}")
        return AmplitudeVector(self._z + other._z)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"AmplitudeVector({self._z.tolist()})"

    def allclose(self, other, rtol=1e-9, atol=1e-12) -> bool:
        return other.n == self.n and bool(np.allclose(self._z, other._z, rtol=rtol, atol=atol))


def _is_pair_list(obj):
    return isinstance(obj, (list, tuple)) and len(obj) > 0 and all(isinstance(p, Pair) for p in obj)


@dataclass(frozen=True)
class Selection:
    """Subset S of base-state indices of an n-state space."""

    indices: frozenset
    n: int

    def __init__(self, indices: Iterable[int], n: int):
        idx = frozenset(int(i) for i in indices)
        if n < 1:
            raise DimensionError(f"space dimension must be >= 1, got {n}")
        bad = sorted(i for i in idx if not 0 <= i < n)
        if bad:
            raise DimensionError(f"indices {bad} outside 0..{n - 1}")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "n", n)

    def complement(self) -> "Selection":
        return Selection(set(range(self.n)) - self.indices, self.n)

    def __and__(self, other: "Selection") -> "Selection":
        if other.n != self.n:
            raise DimensionError("selections belong to different spaces")
        return Selection(self.indices & other.indices, self.n)

    def __len__(self):
        return len(self.indices)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.indices)] = True
        return m

    def matrix(self) -> np.ndarray:
        """Projector as an n x n diagonal 0/1 matrix."""
        return np.diag(self.mask().astype(float))


def _check_dims(x: AmplitudeVector, S: Selection):
    if x.n != S.n:
        raise DimensionError(f"selection is over {S.n} states, vector has {x.n}")


def sample_objects(n: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` draws of an n-state object, shape (count, n), complex.

    Each component is circular complex Gaussian with unit mean Born rate.
    """
    if n < 1 or count < 1:
        raise SymquantError("n and count must be >= 1")
    rng = np.random.default_rng(check_seed(seed))
    xy = rng.normal(0.0, math.sqrt(0.5), size=(count, n, 2))
    return xy[..., 0] + 1j * xy[..., 1]


def sample_object(n: int, seed: int = 0) -> AmplitudeVector:
    return AmplitudeVector(sample_objects(n, 1, seed)[0])


def composite_amplitude(x: AmplitudeVector, S: Selection) -> Pair:
    """Amplitude of the composite state covering the base states in S."""
    _check_dims(x, S)
    if not S.indices:
        raise SymquantError("composite amplitude needs a non-empty selection")
    total = 0j
    for k in sorted(S.indices):
        total += x.array[k]
    return Pair.from_complex(total)


def composite_amplitudes(X: np.ndarray, S: Selection) -> np.ndarray:
    """Row-wise composite amplitudes for a (draws, n) batch."""
    if not S.indices:
        raise SymquantError("composite amplitude needs a non-empty selection")
    return np.asarray(X)[:, S.mask()].sum(axis=1)


def project(x: AmplitudeVector, S: Selection) -> AmplitudeVector:
    """Keep the components in S, zero the rest."""
    _check_dims(x, S)
    return AmplitudeVector(np.where(S.mask(), x.array, 0j))


def unitary_deviation(U) -> float:
    U = np.asarray(U, dtype=np.complex128)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def rotate(x: AmplitudeVector, U, tol: float = UNITARY_TOL) -> AmplitudeVector:
    """Express ``x`` in a rotated orthonormal basis: ``U @ x``."""
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (x.n, x.n):
        raise DimensionError(f"rotation has shape {U.shape}, vector has {x.n} components")
    dev = unitary_deviation(U)
    if dev > tol:
        raise NonUnitaryError(f"matrix is not unitary: max |U^H U - I| = {dev:.3g}", dev)
    return AmplitudeVector(U @ x.array)


def random_unitary(n: int, seed: int = 0, steps: int | None = None) -> np.ndarray:
    """Unitary built from random two-index rotations and phase multipliers."""
    rng = np.random.default_rng(check_seed(seed))
    U = np.diag(np.exp(1j * rng.uniform(0.0, TWO_PI, n)))
    if n == 1:
        return U
    for _ in range(steps if steps is not None else 3 * n * n):
        i, j = rng.choice(n, size=2, replace=False)
        theta = rng.uniform(0.0, TWO_PI)
        phi = rng.uniform(0.0, TWO_PI)
        c, s = math.cos(theta), math.sin(theta)
        G = np.eye(n, dtype=np.complex128)
        G[i, i], G[i, j] = c, -np.exp(-1j * phi) * s
        G[j, i], G[j, j] = np.exp(1j * phi) * s, c
        U = G @ U
    return U


def normalize_single_object(x: AmplitudeVector) -> AmplitudeVector:
    """Scale onto the unit sphere: the wave function of one confirmed object."""
    norm2 = x.norm2()
    if not norm2 > 0:
        raise DomainError("cannot normalise the zero vector")
    return AmplitudeVector(x.array / math.sqrt(norm2))


def normalize_rows(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X)
    norms = np.sqrt(np.sum(X.real ** 2 + X.imag ** 2, axis=1, keepdims=True))
    if np.any(norms == 0):
        raise DomainError("cannot normalise a zero vector")
    return X / norms


def block_rates(X: np.ndarray, blocks: Sequence[Selection]) -> np.ndarray:
    """Mean Born rate of each block's composite amplitude over a batch."""
    return np.array([np.mean(np.abs(composite_amplitudes(X, b)) ** 2) for b in blocks])
