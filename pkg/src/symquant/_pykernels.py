"""Pure-numpy implementations of the hot kernels.

Mirrors the API of the compiled ``_kernels`` extension exactly; used when the
extension is not built or ``SYMQUANT_PURE_PYTHON`` is set.  Random draws are
always made by the caller, so both backends see identical inputs.
"""
import numpy as np

NAME = "python"


def _mean_m2(values, axis=0):
    mean = values.mean(axis=axis)
    dev = values - mean
    return mean, np.einsum("i...,i...->...", dev, dev)


def rate_moments(delta, alpha):
    """Mean and sum of squared deviations of ``(2 + 2 cos delta) ** (alpha / 2)``."""
    f = np.power(2.0 + 2.0 * np.cos(delta), 0.5 * alpha)
    mean, m2 = _mean_m2(f)
    return float(mean), float(m2)


def born_moments(xy):
    """Moments of ``x1**2 + x2**2`` over the rows of an (n, 2) array."""
    xy = np.asarray(xy, dtype=np.float64)
    p = xy[:, 0] * xy[:, 0] + xy[:, 1] * xy[:, 1]
    mean, m2 = _mean_m2(p)
    return float(mean), float(m2)


def assoc_residual(gamma, u, v, w):
    """Max over rows of |(u.v).w - u.(v.w)| / (1 + |u||v||w|)."""
    g = np.asarray(gamma, dtype=np.float64).reshape(2, 2, 2)

    def mul(a, b):
        return np.einsum("ijk,nj,nk->ni", g, a, b)

    diff = mul(mul(u, v), w) - mul(u, mul(v, w))
    num = np.hypot(diff[:, 0], diff[:, 1])
    den = 1.0 + np.hypot(u[:, 0], u[:, 1]) * np.hypot(v[:, 0], v[:, 1]) * np.hypot(w[:, 0], w[:, 1])
    return float(np.max(num / den))


def propagate(init, ops_out, ops_in, ops_coef, rot):
    """Edge amplitudes after one topological sweep, vectorised over trials.

    ``rot`` has shape (trials, n_edges): the phase factor applied to each
    edge's amplitude when it is read downstream.
    """
    amp = np.broadcast_to(init, rot.shape).astype(np.complex128)
    for o, i, c in zip(ops_out, ops_in, ops_coef):
        amp[:, o] += c * rot[:, i] * amp[:, i]
    return amp * rot


def network_moments(init, ops_out, ops_in, ops_coef, rand_edges, phases, det_ptr, det_edges):
    """Per-detector moments of the Born rate over trials.

    ``phases`` has shape (trials, len(rand_edges)) and gives the random phase
    angle of each randomised edge for each trial.
    """
    n_trials = phases.shape[0]
    rot = np.ones((n_trials, len(init)), dtype=np.complex128)
    if len(rand_edges):
        rot[:, rand_edges] = np.exp(1j * phases)
    amp = propagate(init, ops_out, ops_in, ops_coef, rot)
    n_det = len(det_ptr) - 1
    born = np.empty((n_trials, n_det))
    for d in range(n_det):
        total = amp[:, det_edges[det_ptr[d]:det_ptr[d + 1]]].sum(axis=1)
        born[:, d] = total.real ** 2 + total.imag ** 2
    return _mean_m2(born)
