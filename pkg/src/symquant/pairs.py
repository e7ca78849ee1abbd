"""Two-dimensional pair calculus.

Pairs are ordered couples of reals.  A general product of pairs is bilinear,
``(u.v)_i = sum_jk gamma[i, j, k] u_j v_k``, fixed by eight coefficients.
Requiring associativity leaves three classes up to shear (complex, dual and
split-complex multiplication) plus two degenerate forms in which one factor
acts only as a scalar.  This module evaluates such products, decides
associativity and degeneracy numerically, and classifies a given tensor.

Index convention: ``gamma`` is stored 0-based with shape (2, 2, 2); the flat
8-value form is ``gamma111, gamma112, gamma121, gamma122, gamma211, gamma212,
gamma221, gamma222`` (C order of the 1-based indices).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import ClassificationError, DomainError, SingularTransformError, SymquantError

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = 256


@dataclass(frozen=True, slots=True)
class Pair:
    c1: float
    c2: float

    def __post_init__(self):
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "c2", float(self.c2))
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise SymquantError(f"pair components must be finite, got ({self.c1}, {self.c2})")

    def __iter__(self):
        yield self.c1
        yield self.c2

    def __add__(self, other):
        if not isinstance(other, Pair):
            return NotImplemented
        return pair_sum(self, other)

    @classmethod
    def from_complex(cls, z: complex) -> "Pair":
        return cls(z.real, z.imag)

    def to_complex(self) -> complex:
        return complex(self.c1, self.c2)


def pair_sum(u: Pair, v: Pair) -> Pair:
    """Combination of pairs: component-wise addition."""
    return Pair(u.c1 + v.c1, u.c2 + v.c2)


class Kind(enum.Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"
    DEGENERATE = "Degenerate"
    NONASSOCIATIVE = "NonAssociative"

    @property
    def mu(self):
        return {"Elliptic": -1, "Parabolic": 0, "Hyperbolic": 1}.get(self.value)

    @classmethod
    def parse(cls, text):
        if isinstance(text, Kind):
            return text
        for k in cls:
            if k.value.lower() == str(text).lower():
                return k
        raise SymquantError(f"unknown product class {text!r}")


ELLIPTIC, PARABOLIC, HYPERBOLIC = Kind.ELLIPTIC, Kind.PARABOLIC, Kind.HYPERBOLIC
NORMAL_KINDS = (ELLIPTIC, PARABOLIC, HYPERBOLIC)


@dataclass(frozen=True)
class ProductClass:
    tag: Kind
    assoc_residual: float = 0.0

    @property
    def mu(self):
        return self.tag.mu

    def __str__(self):
        if self.mu is None:
            return self.tag.value
        return f"{self.tag.value} (mu = {self.mu})"


@dataclass(frozen=True)
class AssociativityReport:
    associative: bool
    max_residual: float

    def __bool__(self):
        return self.associative


class BilinearProduct:
    """A candidate pair product given by its 2x2x2 coefficient tensor."""

    __slots__ = ("gamma",)

    def __init__(self, gamma):
        g = np.array(gamma, dtype=np.float64)
        if g.size != 8:
            raise SymquantError(f"gamma needs 8 coefficients, got {g.size}")
        g = g.reshape(2, 2, 2)
        if not np.all(np.isfinite(g)):
            raise SymquantError("gamma coefficients must be finite")
        g.flags.writeable = False
        self.gamma = g

    @classmethod
    def from_flat(cls, values: Sequence[float]) -> "BilinearProduct":
        return cls(np.asarray(values, dtype=float))

    @classmethod
    def normal_form(cls, kind) -> "BilinearProduct":
        return cls.from_flat(NORMAL_FORMS[Kind.parse(kind)])

    @property
    def flat(self) -> tuple[float, ...]:
        return tuple(self.gamma.ravel().tolist())

    def __call__(self, u: Pair, v: Pair) -> Pair:
        return general_product(self, u, v)

    def apply(self, u, v):
        """Row-wise product of two (n, 2) arrays."""
        return np.einsum("ijk,nj,nk->ni", self.gamma, np.asarray(u, float), np.asarray(v, float))

    def left_matrix(self, u) -> np.ndarray:
        """Matrix of ``v -> u.v``."""
        return np.einsum("ijk,j->ik", self.gamma, np.asarray(u, float))

    def sheared(self, T) -> "BilinearProduct":
        """The same product expressed in coordinates ``x' = T x``."""
        T = np.asarray(T, dtype=float)
        det = np.linalg.det(T)
        if not abs(det) > 1e-12:
            raise SingularTransformError(f"shear is singular (det = {det:.3g})")
        Ti = np.linalg.inv(T)
        return BilinearProduct(np.einsum("ia,abc,bj,ck->ijk", T, self.gamma, Ti, Ti))

    def __eq__(self, other):
        return isinstance(other, BilinearProduct) and np.array_equal(self.gamma, other.gamma)

    def __hash__(self):
        return hash(self.flat)

    def __repr__(self):
        return f"BilinearProduct({list(self.flat)})"


NORMAL_FORMS = {
    ELLIPTIC: (1, 0, 0, -1, 0, 1, 1, 0),    # (u1v1 - u2v2, u1v2 + u2v1)
    PARABOLIC: (1, 0, 0, 0, 0, 1, 1, 0),    # (u1v1, u1v2 + u2v1)
    HYPERBOLIC: (1, 0, 0, 1, 0, 1, 1, 0),   # (u1v1 + u2v2, u1v2 + u2v1)
}
# One factor present through a single component.
DEGENERATE_FORMS = {
    "right-scalar": (1, 0, 0, 0, 0, 0, 1, 0),  # (u1v1, u2v1)
    "left-scalar": (1, 0, 0, 0, 0, 1, 0, 0),   # (u1v1, u1v2)
}


def product(kind, u: Pair, v: Pair) -> Pair:
    """Multiply in one of the three normal forms."""
    kind = Kind.parse(kind)
    a = u.c1 * v.c1
    b = u.c2 * v.c2
    second = u.c1 * v.c2 + u.c2 * v.c1
    if kind is ELLIPTIC:
        return Pair(a - b, second)
    if kind is PARABOLIC:
        return Pair(a, second)
    if kind is HYPERBOLIC:
        return Pair(a + b, second)
    raise SymquantError(f"{kind.value} has no normal-form product")


def general_product(B: BilinearProduct, u: Pair, v: Pair) -> Pair:
    out = np.einsum("ijk,j,k->i", B.gamma, np.array(tuple(u)), np.array(tuple(v)))
    return Pair(out[0], out[1])


def _unit_ball(rng, n):
    r = np.sqrt(rng.random(n))
    t = rng.uniform(0.0, TWO_PI, n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def is_associative(B: BilinearProduct, n_samples: int = DEFAULT_SAMPLES,
                   tol: float = DEFAULT_TOL, seed: int = 0) -> AssociativityReport:
    """Check ``(u.v).w == u.(v.w)`` on seeded samples from the unit disc."""
    if n_samples < 1:
        raise SymquantError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    u, v, w = (_unit_ball(rng, n_samples) for _ in range(3))
    res = kernels.assoc_residual(B.gamma, u, v, w)
    return AssociativityReport(bool(res <= tol), float(res))


def _second_singular_ratio(m):
    s = np.linalg.svd(m, compute_uv=False)
    return 0.0 if s[0] == 0 else s[1] / s[0]


def is_degenerate(B: BilinearProduct, tol: float = DEFAULT_TOL) -> bool:
    """True if either factor enters only through one linear functional.

    Flattening gamma over the v index (rows (i, j)) or the u index
    (rows (i, k)) gives a 4x2 matrix whose rank is the number of independent
    functionals of that factor in the product.
    """
    g = B.gamma
    over_v = g.reshape(4, 2)
    over_u = g.transpose(0, 2, 1).reshape(4, 2)
    return min(_second_singular_ratio(over_v), _second_singular_ratio(over_u)) <= tol


def identity_element(B: BilinearProduct):
    """Least-squares two-sided identity ``e`` and its relative residual."""
    g = B.gamma
    # e.x = x: sum_j e_j g[i,j,k] = delta_ik ; x.e = x: sum_k e_k g[i,j,k] = delta_ij
    A = np.vstack([g.transpose(0, 2, 1).reshape(4, 2), g.reshape(4, 2)])
    b = np.concatenate([np.eye(2).ravel(), np.eye(2).ravel()])
    e, *_ = np.linalg.lstsq(A, b, rcond=None)
    return e, float(np.linalg.norm(A @ e - b) / np.linalg.norm(b))


def _generic_element(B, e, tol):
    basis = np.eye(2)
    cross = [abs(e[0] * b[1] - e[1] * b[0]) for b in basis]
    order = np.argsort(cross)[::-1]
    for w in (basis[order[0]], basis[order[1]], basis[order[0]] + 0.5 * basis[order[1]]):
        u = e + w
        L = B.left_matrix(u)
        if np.linalg.norm(L - 0.5 * np.trace(L) * np.eye(2)) > tol * np.linalg.norm(L):
            return u, L
    raise ClassificationError("every trial element multiplies as a scalar", 0.0)


def classify(B: BilinearProduct, tol: float = DEFAULT_TOL, n_samples: int = DEFAULT_SAMPLES,
             seed: int = 0, assoc_tol: float | None = None) -> ProductClass:
    """Assign a product tensor to its class, invariant under shear.

    Non-associative and degenerate tensors are reported as such.  Otherwise
    the sign of the discriminant of a generic element's left-multiplication
    matrix gives the class: negative Elliptic, zero Parabolic, positive
    Hyperbolic.
    """
    report = is_associative(B, n_samples, tol if assoc_tol is None else assoc_tol, seed)
    if not report:
        return ProductClass(Kind.NONASSOCIATIVE, report.max_residual)
    if is_degenerate(B, tol):
        return ProductClass(Kind.DEGENERATE, report.max_residual)
    e, residual = identity_element(B)
    if residual > tol:
        raise ClassificationError(
            f"associative, non-degenerate product has no two-sided identity (residual {residual:.3g})",
            residual,
        )
    _, L = _generic_element(B, e, tol)
    disc = np.trace(L) ** 2 - 4.0 * np.linalg.det(L)
    scale = float(np.sum(L * L))
    if disc < -tol * scale:
        tag = ELLIPTIC
    elif disc > tol * scale:
        tag = HYPERBOLIC
    else:
        tag = PARABOLIC
    return ProductClass(tag, report.max_residual)


def polar(kind, x: Pair) -> tuple[float, float]:
    """Modulus and phase in the class's own polar coordinates.

    Elliptic phases are wrapped to [0, 2 pi).  Phases add and moduli multiply
    under the class product (for Parabolic on the half-plane ``x1 > 0``).
    """
    kind = Kind.parse(kind)
    x1, x2 = x.c1, x.c2
    if kind is ELLIPTIC:
        if x1 == 0 and x2 == 0:
            raise DomainError("Elliptic polar form needs x != (0, 0)")
        return math.hypot(x1, x2), wrap_phase(math.atan2(x2, x1))
    if kind is PARABOLIC:
        if x1 == 0:
            raise DomainError("Parabolic polar form needs x1 != 0")
        return abs(x1), x2 / abs(x1)
    if kind is HYPERBOLIC:
        if not x1 * x1 > x2 * x2:
            raise DomainError("Hyperbolic polar form needs x1**2 > x2**2")
        return math.sqrt((x1 - x2) * (x1 + x2)), math.atanh(x2 / x1)
    raise DomainError(f"{kind.value} has no polar form")


def wrap_phase(theta: float) -> float:
    t = theta % TWO_PI
    return 0.0 if t >= TWO_PI else t


def _elliptic_log_polar(x: Pair):
    if x.c1 == 0 and x.c2 == 0:
        raise DomainError("valuation of the zero pair is undefined")
    return math.log(math.hypot(x.c1, x.c2)), wrap_phase(math.atan2(x.c2, x.c1))


def log_valuation(x: Pair, alpha: float, beta: float) -> float:
    """``alpha * log|x| + beta * arg x`` (complex modulus, phase in [0, 2 pi))."""
    logmod, phase = _elliptic_log_polar(x)
    return alpha * logmod + beta * phase


def conjugate_variable(x: Pair, alpha: float, beta: float) -> float:
    """``beta * log|x| - alpha * arg x``: the part of x that rates do not constrain."""
    logmod, phase = _elliptic_log_polar(x)
    return beta * logmod - alpha * phase
