import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symquant import _backend, _pykernels
from symquant._sampling import Moments, merge, run_chunks
from symquant.errors import SymquantError
from symquant.network import mach_zehnder
from symquant.pairs import NORMAL_KINDS, BilinearProduct

needs_compiled = pytest.mark.skipif(_backend.compiled is None, reason="compiled extension not built")
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class TestBackendSelection:
    def test_name(self):
        assert _backend.BACKEND in ("cython", "python")

    def test_env_forces_fallback(self):
        code = "from symquant import _backend; print(_backend.BACKEND)"
        env = dict(os.environ, SYMQUANT_PURE_PYTHON="1")
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"


@needs_compiled
class TestEquivalence:
    c = _backend.compiled

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0, 3.7])
    def test_rate_moments(self, rng, alpha):
        delta = rng.uniform(-7, 7, 10_001)
        np.testing.assert_allclose(self.c.rate_moments(delta, alpha), _pykernels.rate_moments(delta, alpha),
                                   rtol=1e-11)

    def test_born_moments(self, rng):
        xy = rng.normal(size=(5000, 2))
        np.testing.assert_allclose(self.c.born_moments(xy), _pykernels.born_moments(xy), rtol=1e-11)

    @pytest.mark.parametrize("kind", NORMAL_KINDS)
    def test_assoc_residual(self, rng, kind):
        g = BilinearProduct.normal_form(kind).gamma + 1e-3 * rng.normal(size=(2, 2, 2))
        u, v, w = (rng.normal(size=(300, 2)) for _ in range(3))
        assert self.c.assoc_residual(g, u, v, w) == pytest.approx(_pykernels.assoc_residual(g, u, v, w), rel=1e-12)

    def test_network_moments(self, rng):
        cmp = mach_zehnder(0.4).compile()
        edges = np.union1d(cmp.source_edges, cmp.branch_edges).astype(np.int64)
        phases = rng.uniform(0, 2 * np.pi, size=(4000, len(edges)))
        args = (cmp.init, cmp.ops_out, cmp.ops_in, cmp.ops_coef, edges, phases, cmp.det_ptr, cmp.det_edges)
        for a, b in zip(self.c.network_moments(*args), _pykernels.network_moments(*args)):
            np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-14)


class TestMerge:
    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(1, 40), min_size=1, max_size=8), st.integers(0, 2**32))
    def test_matches_single_pass(self, sizes, seed):
        x = np.random.default_rng(seed).normal(size=sum(sizes))
        parts, start = [], 0
        for s in sizes:
            seg = x[start:start + s]
            parts.append((s, seg.mean(), ((seg - seg.mean()) ** 2).sum()))
            start += s
        m = merge(parts)
        assert m.n == x.size
        assert m.mean == pytest.approx(x.mean(), abs=1e-12)
        if x.size > 1:
            assert m.var == pytest.approx(x.var(ddof=1), rel=1e-9, abs=1e-12)

    def test_std_error(self):
        m = Moments(4, 1.0, 12.0)
        assert m.var == 4.0 and m.std_error == pytest.approx(1.0)


class TestRunChunks:
    @staticmethod
    def fn(rng, size):
        return _pykernels.born_moments(rng.normal(size=(size, 2)))

    @pytest.mark.parametrize("threads", [2, 4])
    def test_thread_invariant(self, threads):
        assert run_chunks(self.fn, 9, 300_001, 1) == run_chunks(self.fn, 9, 300_001, threads)

    def test_seed_changes_result(self):
        assert run_chunks(self.fn, 1, 1000).mean != run_chunks(self.fn, 2, 1000).mean

    @pytest.mark.parametrize("seed", [None, -1, 2**64])
    def test_bad_seed(self, seed):
        with pytest.raises(SymquantError):
            run_chunks(self.fn, seed, 10)

    def test_bad_count(self):
        with pytest.raises(SymquantError):
            run_chunks(self.fn, 0, 0)


def test_benchmark_smoke():
    out = subprocess.run([sys.executable, os.path.join(ROOT, "benchmarks", "bench_kernels.py"), "--quick"],
                         capture_output=True, text=True, check=True)
    lines = [ln for ln in out.stdout.splitlines() if ln and not ln.startswith("#")]
    assert lines[0].split(",")[0] == "kernel"
    assert len(lines) >= 4
