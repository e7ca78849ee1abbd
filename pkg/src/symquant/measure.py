"""Scalar and n-tuple measures with the combination operator.

A :class:`Measure` is an immutable tuple of real components.  Combination of
disjoint objects is the component-wise sum; the only freedom that preserves
it is a non-singular linear shear.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, SingularTransformError, SymquantError

DEFAULT_REL_TOL = 1e-9
DET_TOL = 1e-12


@dataclass(frozen=True)
class Measure:
    """Real n-tuple representing an object under combination.

    ``single_signed`` marks a measure in the strict sense (mass-like): all
    components must be non-negative.  Charge-like quantities leave it False.
    """

    components: tuple[float, ...]
    unit_labels: Optional[tuple[str, ...]] = None
    single_signed: bool = False

    def __post_init__(self):
        comps = tuple(float(c) for c in np.atleast_1d(self.components))
        if not comps:
            raise SymquantError("a measure needs at least one component")
        if not all(math.isfinite(c) for c in comps):
            raise SymquantError(f"non-finite component in {comps}")
        object.__setattr__(self, "components", comps)
        if self.unit_labels is not None:
            labels = tuple(str(u) for u in self.unit_labels)
            if len(labels) != len(comps):
                raise DimensionError(
                    f"{len(labels)} unit labels given for {len(comps)} components"
                )
            object.__setattr__(self, "unit_labels", labels)
        if self.single_signed and any(c < 0 for c in comps):
            raise SymquantError(f"single-signed measure has a negative component: {comps}")

    @classmethod
    def scalar(cls, value: float, unit: Optional[str] = None, single_signed: bool = False) -> "Measure":
        return cls((value,), None if unit is None else (unit,), single_signed)

    @property
    def n(self) -> int:
        return len(self.components)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return combine(self, other)

    def as_array(self) -> np.ndarray:
        return np.array(self.components)


def combine(a: Measure, b: Measure) -> Measure:
    """Combine two disjoint objects: the component-wise sum."""
    if a.n != b.n:
        raise DimensionError(f"cannot combine a {a.n}-component measure with a {b.n}-component measure")
    if a.unit_labels != b.unit_labels:
        raise DimensionError(f"unit labels differ: {a.unit_labels} vs {b.unit_labels}")
    return Measure(
        tuple(x + y for x, y in zip(a.components, b.components)),
        a.unit_labels,
        a.single_signed and b.single_signed,
    )


def repeat(a: Measure, k: int) -> Measure:
    """``kA``: k equivalent but disjoint copies of ``a`` combined in sequence."""
    if k < 1:
        raise SymquantError(f"repeat count must be >= 1, got {k}")
    out = a
    for _ in range(k - 1):
        out = combine(out, a)
    return out


def shear(a: Measure, T: Sequence[Sequence[float]], det_tol: float = DET_TOL) -> Measure:
    """Apply the linear regrading ``T @ a``.

    Unit labels are dropped since a general shear mixes dimensions, and the
    result is never flagged single-signed.
    """
    T = np.asarray(T, dtype=float)
    if T.shape != (a.n, a.n):
        raise DimensionError(f"shear matrix has shape {T.shape}, measure has {a.n} components")
    det = np.linalg.det(T)
    if not abs(det) > det_tol:
        raise SingularTransformError(f"shear matrix is singular (|det| = {abs(det):.3g} <= {det_tol:g})")
    return Measure(tuple(T @ a.as_array()))


def commensurable(x: Measure, y: Measure, m: int, n: int, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """True if m copies of ``x`` are equivalent to n copies of ``y``.

    Equivalence is a practical judgement; here it means agreement to
    ``rel_tol`` relative to the larger side.
    """
    if x.n != 1 or y.n != 1:
        raise DimensionError("commensurability is defined for scalar measures")
    if m < 1 or n < 1:
        raise SymquantError(f"multiplicities must be positive integers, got m={m}, n={n}")
    return math.isclose(m * x[0], n * y[0], rel_tol=rel_tol, abs_tol=0.0)
