"""Split/merge path networks evaluated with classical or amplitude rules.

Three modes:

``scalar``
    Rates propagate: splitters multiply by squared-magnitude branch weights,
    combiners add, detectors report the arriving rate.
``pair``
    Amplitudes propagate: a source emits ``sqrt(rate) * exp(i phase)``,
    splitters and phase elements multiply by complex coefficients, combiners
    add pairs, detectors report the Born rate ``|amplitude|**2``.
``stochastic``
    Pair evaluation repeated over trials with uniformly random phases, rates
    averaged.  By default every independently fed branch is randomised: each
    source output and each output port of a multi-output element.  With
    ``decohere="sources"`` only source phases are drawn.

Splitter convention when no ``matrix`` is given: transmission ``1/sqrt(2)``,
reflection ``i/sqrt(2)``; a 1-in/2-out splitter uses ``[[t], [r]]`` and a
2-in/2-out splitter ``[[t, r], [r, t]]`` (rows are outputs, columns inputs,
both in edge-list order).  An optional ``attenuation`` in (0, 1] scales
an element's output amplitudes (rates by its square).
"""
from __future__ import annotations

import copy
import graphlib
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import schema
from ._backend import kernels
from ._pykernels import propagate
from ._sampling import check_seed, run_chunks
from .errors import NetworkError, SymquantError
from .pairs import TWO_PI, Pair

KINDS = ("source", "splitter", "phase", "combiner", "detector")
MODES = ("scalar", "pair", "stochastic")
DEFAULT_TRIALS = 100_000
WEIGHT_TOL = 1e-9
T_COEF = 1.0 / math.sqrt(2.0)
R_COEF = 1j / math.sqrt(2.0)


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    params: dict = field(default_factory=dict)


@dataclass
class NetworkSpec:
    elements: list[Element]
    edges: list[tuple[str, str]]

    @classmethod
    def from_dict(cls, doc: dict) -> "NetworkSpec":
        schema.validate(doc, "network")
        spec = cls(
            [Element(e["id"], e["kind"], dict(e.get("params", {}))) for e in doc["elements"]],
            [tuple(e) for e in doc["edges"]],
        )
        spec.compile()
        return spec

    @classmethod
    def load(cls, path) -> "NetworkSpec":
        return cls.from_dict(schema.read_json(path))

    def to_dict(self) -> dict:
        return {
            "elements": [{"id": e.id, "kind": e.kind, "params": dict(e.params)} for e in self.elements],
            "edges": [list(e) for e in self.edges],
        }

    def with_params(self, overrides: dict) -> "NetworkSpec":
        """Copy with ``{element_id: {param: value}}`` merged into the params."""
        ids = {e.id for e in self.elements}
        unknown = set(overrides) - ids
        if unknown:
            raise NetworkError(f"unknown element(s) {sorted(unknown)}")
        doc = self.to_dict()
        for e in doc["elements"]:
            e["params"].update(copy.deepcopy(overrides.get(e["id"], {})))
        return NetworkSpec.from_dict(doc)

    def compile(self) -> "_Compiled":
        return _compile(self)


def mach_zehnder(delta: float = 0.0) -> NetworkSpec:
    """The bundled Mach-Zehnder interferometer with internal phase ``delta``."""
    doc = schema.bundled("mach_zehnder.json")
    for e in doc["elements"]:
        if e["id"] == "arm":
            e["params"]["delta"] = float(delta)
    return NetworkSpec.from_dict(doc)


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass
class _Compiled:
    n_edges: int
    init: np.ndarray            # source amplitude on each source output edge
    init_rate: np.ndarray       # source rate on the same edges
    ops_out: np.ndarray
    ops_in: np.ndarray
    ops_coef: np.ndarray
    detectors: list[str]
    det_ptr: np.ndarray
    det_edges: np.ndarray
    source_edges: np.ndarray
    branch_edges: np.ndarray    # outputs of multi-output elements


def _compile(spec: NetworkSpec) -> _Compiled:
    by_id: dict[str, Element] = {}
    for el in spec.elements:
        if el.kind not in KINDS:
            raise NetworkError(f"element {el.id!r} has unknown kind {el.kind!r}")
        if el.id in by_id:
            raise NetworkError(f"duplicate element id {el.id!r}")
        by_id[el.id] = el
    inputs = {k: [] for k in by_id}
    outputs = {k: [] for k in by_id}
    seen = set()
    for idx, (a, b) in enumerate(spec.edges):
        for end in (a, b):
            if end not in by_id:
                raise NetworkError(f"edge {idx} refers to unknown element {end!r}")
        if (a, b) in seen:
            raise NetworkError(f"duplicate edge {a!r} -> {b!r}")
        seen.add((a, b))
        outputs[a].append(idx)
        inputs[b].append(idx)

    sorter = graphlib.TopologicalSorter()
    for el in spec.elements:
        sorter.add(el.id, *[spec.edges[i][0] for i in inputs[el.id]])
    try:
        order = list(sorter.static_order())
    except graphlib.CycleError as exc:
        raise NetworkError(f"cycle detected: {' -> '.join(exc.args[1])}") from None

    n_edges = len(spec.edges)
    init = np.zeros(n_edges, dtype=np.complex128)
    init_rate = np.zeros(n_edges)
    ops_out, ops_in, ops_coef = [], [], []
    detectors, det_ptr, det_edges = [], [0], []
    source_edges, branch_edges = [], []

    for eid in order:
        el = by_id[eid]
        ins, outs, p = inputs[eid], outputs[eid], el.params
        n_in, n_out = len(ins), len(outs)
        att = float(p.get("attenuation", 1.0))
        if not 0 < att <= 1:
            raise NetworkError(f"{eid}: attenuation must be in (0, 1], got {att}")
        if n_out >= 2:
            branch_edges.extend(outs)
        if el.kind == "source":
            _arity(el, n_in, n_out, (0, 0), (1, 1))
            rate = float(p.get("rate", 1.0))
            if not rate > 0:
                raise NetworkError(f"{eid}: rate must be positive")
            init[outs[0]] = math.sqrt(rate) * np.exp(1j * float(p.get("phase", 0.0)))
            init_rate[outs[0]] = rate
            source_edges.append(outs[0])
        elif el.kind == "phase":
            _arity(el, n_in, n_out, (1, 1), (1, 1))
            _op(ops_out, ops_in, ops_coef, outs[0], ins[0], att * np.exp(1j * float(p.get("delta", 0.0))))
        elif el.kind == "combiner":
            _arity(el, n_in, n_out, (2, None), (1, 1))
            for i in ins:
                _op(ops_out, ops_in, ops_coef, outs[0], i, att)
        elif el.kind == "splitter":
            _arity(el, n_in, n_out, (1, None), (2, None))
            M = _splitter_matrix(el, n_in, n_out)
            for o in range(n_out):
                for i in range(n_in):
                    if M[o, i] != 0:
                        _op(ops_out, ops_in, ops_coef, outs[o], ins[i], att * M[o, i])
        else:  # detector
            _arity(el, n_in, n_out, (1, None), (0, 0))
            detectors.append(eid)
            det_edges.extend(ins)
            det_ptr.append(len(det_edges))
    if not detectors:
        raise NetworkError("network has no detector")
    as_int = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
    return _Compiled(
        n_edges, init, init_rate, as_int(ops_out), as_int(ops_in), np.array(ops_coef, dtype=np.complex128),
        detectors, as_int(det_ptr), as_int(det_edges), as_int(source_edges), as_int(sorted(branch_edges)),
    )


def _op(outs, ins, coefs, o, i, c):
    outs.append(o)
    ins.append(i)
    coefs.append(complex(c))


def _arity(el, n_in, n_out, in_range, out_range):
    for label, n, (lo, hi) in (("inputs", n_in, in_range), ("outputs", n_out, out_range)):
        if n < lo or (hi is not None and n > hi):
            want = f"{lo}" if lo == hi else (f">= {lo}" if hi is None else f"{lo}..{hi}")
            raise NetworkError(f"{el.kind} {el.id!r} has {n} {label}, needs {want}")


def _splitter_matrix(el, n_in, n_out):
    if "matrix" in el.params:
        M = np.array([[_complex(v) for v in row] for row in el.params["matrix"]])
        if M.shape != (n_out, n_in):
            raise NetworkError(f"splitter {el.id!r}: matrix is {M.shape[0]}x{M.shape[1]}, "
                               f"ports are {n_out} out x {n_in} in")
    elif (n_out, n_in) == (2, 1):
        M = np.array([[T_COEF], [R_COEF]])
    elif (n_out, n_in) == (2, 2):
        M = np.array([[T_COEF, R_COEF], [R_COEF, T_COEF]])
    else:
        raise NetworkError(f"splitter {el.id!r} with {n_in} in / {n_out} out needs an explicit matrix")
    weights = np.sum(np.abs(M) ** 2, axis=0)
    if np.any(np.abs(weights - 1.0) > WEIGHT_TOL):
        raise NetworkError(f"splitter {el.id!r}: branch weights per input sum to {weights.tolist()}, not 1")
    return M


@dataclass(frozen=True)
class SimResult:
    mode: str
    detector_rates: dict[str, float]
    std_error: Optional[dict[str, float]] = None
    amplitudes: Optional[dict[str, Pair]] = None
    n_trials: Optional[int] = None


def _scalar(c: _Compiled):
    rate = c.init_rate.copy()
    weights = np.abs(c.ops_coef) ** 2
    for o, i, w in zip(c.ops_out, c.ops_in, weights):
        rate[o] += w * rate[i]
    return {d: float(rate[c.det_edges[c.det_ptr[k]:c.det_ptr[k + 1]]].sum()) for k, d in enumerate(c.detectors)}


def _pair(c: _Compiled):
    amp = propagate(c.init, c.ops_out, c.ops_in, c.ops_coef, np.ones((1, c.n_edges), dtype=np.complex128))[0]
    return {d: complex(amp[c.det_edges[c.det_ptr[k]:c.det_ptr[k + 1]]].sum()) for k, d in enumerate(c.detectors)}


def simulate(spec: NetworkSpec, mode: str, seed: Optional[int] = None, n_trials: int = DEFAULT_TRIALS,
             decohere: str = "branches", threads: int = 1) -> SimResult:
    """Evaluate ``spec`` in one of the three modes (see module docstring)."""
    c = spec.compile()
    if mode == "scalar":
        return SimResult("scalar", _scalar(c))
    if mode == "pair":
        amps = _pair(c)
        return SimResult(
            "pair",
            {d: a.real ** 2 + a.imag ** 2 for d, a in amps.items()},
            amplitudes={d: Pair.from_complex(a) for d, a in amps.items()},
        )
    if mode != "stochastic":
        raise SymquantError(f"mode must be one of {MODES}, got {mode!r}")
    if seed is None:
        raise SymquantError("stochastic mode requires a seed")
    check_seed(seed)
    if decohere == "branches":
        rand_edges = np.union1d(c.source_edges, c.branch_edges).astype(np.int64)
    elif decohere == "sources":
        rand_edges = np.sort(c.source_edges).astype(np.int64)
    else:
        raise SymquantError(f"decohere must be 'branches' or 'sources', got {decohere!r}")

    def chunk(rng, size):
        phases = rng.uniform(0.0, TWO_PI, size=(size, len(rand_edges)))
        return kernels.network_moments(c.init, c.ops_out, c.ops_in, c.ops_coef, rand_edges,
                                       phases, c.det_ptr, c.det_edges)

    m = run_chunks(chunk, seed, n_trials, threads)
    mean, se = np.atleast_1d(m.mean), np.atleast_1d(m.std_error)
    return SimResult(
        "stochastic",
        {d: float(mean[k]) for k, d in enumerate(c.detectors)},
        std_error={d: float(se[k]) for k, d in enumerate(c.detectors)},
        n_trials=m.n,
    )


@dataclass(frozen=True)
class DetectorComparison:
    detector: str
    scalar: float
    pair: float
    stochastic: float
    std_error: float

    @property
    def interference(self) -> float:
        """Coherent minus classical rate."""
        return self.pair - self.scalar

    @property
    def decoherent_agrees(self) -> bool:
        """Stochastic rate within 4 standard errors of the classical rate."""
        return abs(self.stochastic - self.scalar) <= 4.0 * self.std_error + 1e-12 * max(1.0, abs(self.scalar))


@dataclass(frozen=True)
class ModeComparison:
    rows: list[DetectorComparison]
    n_trials: int

    @property
    def agrees(self) -> bool:
        return all(r.decoherent_agrees for r in self.rows)


def compare_modes(spec: NetworkSpec, seed: int, n_trials: int = DEFAULT_TRIALS, threads: int = 1) -> ModeComparison:
    """Run all three modes and line up the per-detector rates."""
    s = simulate(spec, "scalar")
    p = simulate(spec, "pair")
    st = simulate(spec, "stochastic", seed=seed, n_trials=n_trials, threads=threads)
    rows = [
        DetectorComparison(d, s.detector_rates[d], p.detector_rates[d], st.detector_rates[d], st.std_error[d])
        for d in s.detector_rates
    ]
    return ModeComparison(rows, st.n_trials)
