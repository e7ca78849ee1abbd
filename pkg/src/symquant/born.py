"""Born exponent, Born rule, Gaussian amplitude prior and Poisson streams.

Two independently sourced unit inputs, ``exp(i theta)`` and ``exp(i phi)``
with uniform random phases, combine to a pair whose valuation ``|x|**alpha``
has mean ``Gamma(alpha + 1) / Gamma(alpha/2 + 1)**2``.  Rates add, so that
mean must be 2, which fixes ``alpha = 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._sampling import Moments, check_seed, run_chunks
from .errors import DomainError, SymquantError
from .pairs import TWO_PI, Pair

ALPHA_BRACKET = (0.0, 8.0)
_GAMMA_DIRECT_MAX = 150.0


@dataclass(frozen=True)
class RateModel:
    """Mean Poisson rate ``r`` of a target stream."""

    r: float

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise DomainError(f"rate must be positive and finite, got {self.r!r}")


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    n: int


def mean_rate_closed(alpha: float) -> float:
    """Mean of ``|exp(i theta) + exp(i phi)|**alpha`` over uniform phases."""
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1 (Gamma pole), got {alpha!r}")
    if alpha <= _GAMMA_DIRECT_MAX:
        # math.gamma is exact at small integers, so alpha = 2 gives exactly 2.
        return math.gamma(alpha + 1.0) / math.gamma(0.5 * alpha + 1.0) ** 2
    return math.exp(math.lgamma(alpha + 1.0) - 2.0 * math.lgamma(0.5 * alpha + 1.0))


def _check_monotone():
    grid = np.linspace(*ALPHA_BRACKET, 801)
    vals = [mean_rate_closed(a) for a in grid]
    if not all(b > a for a, b in zip(vals, vals[1:])):
        raise RuntimeError("mean_rate_closed is not increasing on the bisection bracket")


_check_monotone()


def mean_rate_mc(alpha: float, n_samples: int, seed: int = 0, threads: int = 1) -> MCEstimate:
    """Monte Carlo estimate of :func:`mean_rate_closed` with its standard error.

    Uses ``|exp(i theta) + exp(i phi)|**alpha == (2 + 2 cos(theta - phi))**(alpha/2)``.
    """

    def chunk(rng, size):
        theta = rng.uniform(0.0, TWO_PI, size)
        phi = rng.uniform(0.0, TWO_PI, size)
        return kernels.rate_moments(theta - phi, float(alpha))

    m = run_chunks(chunk, seed, n_samples, threads)
    return MCEstimate(m.mean, float(m.std_error), m.n)


def solve_alpha(target: float = 2.0, tol: float = 1e-10) -> float:
    """Exponent whose two-source mean rate equals ``target`` (bisection)."""
    lo, hi = ALPHA_BRACKET
    f_lo, f_hi = mean_rate_closed(lo) - target, mean_rate_closed(hi) - target
    if abs(f_lo) <= tol:
        return lo
    if abs(f_hi) <= tol:
        return hi
    if f_lo > 0 or f_hi < 0:
        raise DomainError(
            f"target {target!r} outside [{mean_rate_closed(lo)}, {mean_rate_closed(hi)}] "
            f"reachable for alpha in {ALPHA_BRACKET}"
        )
    while True:
        mid = 0.5 * (lo + hi)
        f_mid = mean_rate_closed(mid) - target
        if abs(f_mid) <= tol or not lo < mid < hi:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid


def born(x) -> float:
    """Observable rate of a pair: ``x1**2 + x2**2``."""
    c1, c2 = x
    return c1 * c1 + c2 * c2


def born_array(xy):
    """Row-wise :func:`born` for an (n, 2) array or complex array."""
    xy = np.asarray(xy)
    if np.iscomplexobj(xy):
        return xy.real ** 2 + xy.imag ** 2
    return xy[..., 0] ** 2 + xy[..., 1] ** 2


def sample_prior(r: float, n: int, seed: int = 0) -> np.ndarray:
    """Draw ``n`` pairs from the Gaussian prior of a rate-``r`` stream.

    Components are independent normals with variance ``r / 2``; the Born
    rate of each draw is exponential with mean ``r`` and its phase is
    uniform.  Rows of the returned (n, 2) array are pairs; use
    :func:`as_pairs` for a list of :class:`Pair`.
    """
    RateModel(r)
    if n < 1:
        raise SymquantError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(check_seed(seed))
    return rng.normal(0.0, math.sqrt(0.5 * r), size=(n, 2))


def prior_moments(r: float, n: int, seed: int = 0, threads: int = 1) -> Moments:
    """Moments of the Born rate over ``n`` prior draws, without materialising them."""
    RateModel(r)
    sd = math.sqrt(0.5 * r)

    def chunk(rng, size):
        return kernels.born_moments(rng.normal(0.0, sd, size=(size, 2)))

    return run_chunks(chunk, seed, n, threads)


def as_pairs(xy) -> list[Pair]:
    return [Pair(a, b) for a, b in np.asarray(xy)]


def phases(xy) -> np.ndarray:
    """Phase of each row in [0, 2 pi)."""
    xy = np.asarray(xy)
    return np.mod(np.arctan2(xy[:, 1], xy[:, 0]), TWO_PI)


def two_source_rates(n: int, seed: int = 0) -> np.ndarray:
    """Born rate of ``exp(i theta) + exp(i phi)`` for ``n`` random phase draws."""
    rng = np.random.default_rng(check_seed(seed))
    theta = rng.uniform(0.0, TWO_PI, n)
    phi = rng.uniform(0.0, TWO_PI, n)
    x = np.column_stack([np.cos(theta) + np.cos(phi), np.sin(theta) + np.sin(phi)])
    return born_array(x)


def poisson_stream(r: float, duration: float, seed: int = 0) -> np.ndarray:
    """Event times of a rate-``r`` Poisson process on ``[0, duration)``.

    Built by accumulating exponential inter-arrival gaps.
    """
    RateModel(r)
    if not duration > 0:
        raise DomainError(f"duration must be positive, got {duration!r}")
    rng = np.random.default_rng(check_seed(seed))
    expected = r * duration
    block = max(16, int(expected + 6.0 * math.sqrt(expected) + 16))
    times = np.cumsum(rng.exponential(1.0 / r, block))
    while times[-1] < duration:
        more = times[-1] + np.cumsum(rng.exponential(1.0 / r, block))
        times = np.concatenate([times, more])
    return times[: np.searchsorted(times, duration, side="left")]
