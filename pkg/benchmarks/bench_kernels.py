"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--quick] [--repeat N]
"""
import argparse
import timeit

import numpy as np

from symquant import _backend, _pykernels
from symquant.network import mach_zehnder
from symquant.pairs import BilinearProduct, Kind


def cases(n):
    rng = np.random.default_rng(0)
    delta = rng.uniform(-np.pi, np.pi, n)
    xy = rng.normal(size=(n, 2))
    g = BilinearProduct.normal_form(Kind.ELLIPTIC).gamma
    u, v, w = (rng.normal(size=(n // 8, 2)) for _ in range(3))
    c = mach_zehnder(0.3).compile()
    edges = np.union1d(c.source_edges, c.branch_edges).astype(np.int64)
    phases = rng.uniform(0, 2 * np.pi, size=(n // 4, len(edges)))
    net = (c.init, c.ops_out, c.ops_in, c.ops_coef, edges, phases, c.det_ptr, c.det_edges)
    return {
        "rate_moments": lambda k: k.rate_moments(delta, 2.0),
        "born_moments": lambda k: k.born_moments(xy),
        "assoc_residual": lambda k: k.assoc_residual(g, u, v, w),
        "network_moments": lambda k: k.network_moments(*net),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small inputs, one repeat")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    n = 1 << 12 if args.quick else 1 << 20
    repeat = 1 if args.quick else args.repeat
    backends = [_pykernels] + ([_backend.compiled] if _backend.compiled is not None else [])
    print(f"# n = {n}, best of {repeat}")
    print("kernel,backend,seconds,speedup")
    for name, call in cases(n).items():
        base = None
        for k in backends:
            t = min(timeit.repeat(lambda: call(k), number=1, repeat=repeat))
            base = base or t
            print(f"{name},{k.NAME},{t:.6f},{base / t:.2f}")


if __name__ == "__main__":
    main()
