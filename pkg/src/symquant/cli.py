"""Batch command-line front end.

Every subcommand prints a ``# seed = N`` header, then either an aligned
text table or CSV (``--csv``).  Exit status is 0 on success and 2 on any
input validation failure, with the diagnostic on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import hilbert, network, pairs, schema, tree
from .born import mean_rate_closed, mean_rate_mc, poisson_stream, sample_prior, solve_alpha
from ._backend import BACKEND
from .errors import SymquantError

DEFAULT_ALPHAS = "0,0.5,1,2,3,4"


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _count(text):
    value = int(float(text))
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def fmt(x) -> str:
    return f"{x:.10g}"


class Output:
    """Collects rows and renders them as a table or CSV."""

    def __init__(self, args):
        self.csv = args.csv
        self.seed = args.seed
        self.blocks = []

    def table(self, header, rows):
        self.blocks.append(("table", header, [[str(c) for c in r] for r in rows]))

    def line(self, text):
        self.blocks.append(("line", text, None))

    def render(self) -> str:
        buf = io.StringIO()
        buf.write(f"# seed = {self.seed}\n")
        for kind, a, b in self.blocks:
            if kind == "line":
                buf.write(("# " if self.csv else "") + a + "\n")
            elif self.csv:
                w = csv.writer(buf, lineterminator="\n")
                w.writerow(a)
                w.writerows(b)
            else:
                widths = [max(len(str(x)) for x in col) for col in zip(a, *b)]
                for row in [a, *b]:
                    buf.write("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
        return buf.getvalue()


def cmd_tree(args, out):
    t = tree.PartitionTree.load(args.file)
    if not args.node and not args.path:
        args.node = t.nodes
    rows = [["node", n, fmt(t.node_value(n))] for n in args.node]
    rows += [["path", p, fmt(t.path_value(tree.TreePath.parse(p)))] for p in args.path]
    out.table(["query", "target", "value"], rows)


def cmd_bayes(args, out):
    if args.file:
        doc = schema.read_json(args.file)
        if not isinstance(doc, dict) or "prior" not in doc or "likelihood" not in doc:
            raise SymquantError("$: bayes file needs 'prior' and 'likelihood' arrays")
        prior, like = doc["prior"], doc["likelihood"]
    else:
        if args.prior is None or args.likelihood is None:
            raise SymquantError("give --prior and --likelihood, or --file")
        prior, like = args.prior, args.likelihood
    post, evidence = tree.bayes(prior, like, tol=args.tol)
    out.table(["hypothesis", "prior", "likelihood", "posterior"],
              [[k, fmt(p), fmt(l), fmt(q)] for k, (p, l, q) in enumerate(zip(prior, like, post))])
    out.line(f"evidence = {fmt(evidence)}")


def cmd_classify(args, out):
    if args.file:
        doc = schema.read_json(args.file)
        gamma = doc.get("gamma") if isinstance(doc, dict) else None
        if gamma is None:
            raise SymquantError("$.gamma: missing")
    elif args.gamma is not None:
        gamma = args.gamma
    else:
        raise SymquantError("give --gamma or --file")
    if len(gamma) != 8:
        raise SymquantError(f"$.gamma: expected 8 values (g111,g112,g121,g122,g211,g212,g221,g222), got {len(gamma)}")
    result = pairs.classify(pairs.BilinearProduct.from_flat(gamma), tol=args.tol,
                            n_samples=args.samples, seed=args.seed)
    if out.csv:
        out.table(["class", "mu", "assoc_residual"],
                  [[result.tag.value, "" if result.mu is None else result.mu, f"{result.assoc_residual:.3e}"]])
    else:
        out.line(str(result))
        out.line(f"max associativity residual = {result.assoc_residual:.3e}")


def cmd_born_alpha(args, out):
    rows = []
    for k, a in enumerate(args.alphas):
        mc = mean_rate_mc(a, args.samples, seed=args.seed + k, threads=args.threads)
        rows.append([fmt(a), fmt(mean_rate_closed(a)), f"{mc.estimate:.8f}", f"{mc.std_error:.3e}"])
    out.table(["alpha", "closed_form", "mc_mean", "std_error"], rows)
    out.line(f"solved alpha = {solve_alpha(args.target, tol=args.tol):.10f} (target {fmt(args.target)})")


def cmd_sample(args, out):
    if args.kind == "poisson":
        times = poisson_stream(args.rate, args.duration, seed=args.seed)
        out.table(["event", "time"], [[k, fmt(t)] for k, t in enumerate(times)])
        out.csv = True
        return
    if args.kind == "prior":
        xy = sample_prior(args.rate, args.count, seed=args.seed)
        X = (xy[:, 0] + 1j * xy[:, 1])[:, None]
    else:
        X = hilbert.sample_objects(args.n, args.count, seed=args.seed)
    if args.normalize:
        X = hilbert.normalize_rows(X)
    header = ["draw"] + [f"{part}_{k}" for k in range(X.shape[1]) for part in ("re", "im")]
    rows = [[d] + [fmt(v) for z in row for v in (z.real, z.imag)] for d, row in enumerate(X)]
    out.table(header, rows)
    out.csv = True


def _parse_overrides(items):
    overrides = {}
    for item in items:
        key, sep, value = item.partition("=")
        eid, dot, param = key.partition(".")
        if not sep or not dot:
            raise SymquantError(f"--set expects ID.PARAM=VALUE, got {item!r}")
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            raise SymquantError(f"--set value must be JSON, got {value!r}") from None
        overrides.setdefault(eid, {})[param] = parsed
    return overrides


def _network(args):
    spec = network.NetworkSpec.load(args.file)
    return spec.with_params(_parse_overrides(args.set)) if args.set else spec


def cmd_simulate(args, out):
    res = network.simulate(_network(args), args.mode, seed=args.seed, n_trials=args.trials,
                           decohere=args.decohere, threads=args.threads)
    if res.std_error is None:
        out.table(["detector", "rate"], [[d, fmt(r)] for d, r in res.detector_rates.items()])
    else:
        out.table(["detector", "rate", "std_error"],
                  [[d, f"{r:.8f}", f"{res.std_error[d]:.3e}"] for d, r in res.detector_rates.items()])
    out.line(f"mode = {res.mode}" + (f", trials = {res.n_trials}" if res.n_trials else ""))


def cmd_compare(args, out):
    rep = network.compare_modes(_network(args), seed=args.seed, n_trials=args.trials, threads=args.threads)
    out.table(
        ["detector", "scalar", "pair", "stochastic", "std_error", "interference", "agrees"],
        [[r.detector, fmt(r.scalar), fmt(r.pair), f"{r.stochastic:.8f}", f"{r.std_error:.3e}",
          fmt(r.interference), "yes" if r.decoherent_agrees else "no"] for r in rep.rows],
    )
    out.line(f"stochastic agrees with scalar: {'yes' if rep.agrees else 'no'} (trials = {rep.n_trials})")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="RNG seed, unsigned 64-bit (default 0)")
    common.add_argument("--csv", action="store_true", help="emit CSV instead of a text table")
    common.add_argument("--threads", type=_count, default=1, help="worker threads for sampling (default 1)")

    parser = argparse.ArgumentParser(prog="symquant", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("tree", parents=[common], help="node and path values of a partition tree")
    p.add_argument("--file", required=True, help="tree JSON: {nodes: [{id, children | weight}], root}")
    p.add_argument("--node", action="append", default=[], help="node id (repeatable)")
    p.add_argument("--path", action="append", default=[], help="DEST:SOURCE path (repeatable)")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("bayes", parents=[common], help="posterior and evidence for a discrete model")
    p.add_argument("--prior", type=_floats)
    p.add_argument("--likelihood", type=_floats)
    p.add_argument("--file", help="JSON {prior: [...], likelihood: [...]}")
    p.add_argument("--tol", type=float, default=tree.PROB_SUM_TOL, help="prior normalisation tolerance (default 1e-9)")
    p.set_defaults(func=cmd_bayes)

    p = sub.add_parser("classify", parents=[common], help="class of a bilinear pair product",
                       description="gamma is 8 values in the order g111,g112,g121,g122,g211,g212,g221,g222 "
                                   "where (u.v)_i = sum_jk g_ijk u_j v_k.")
    p.add_argument("--gamma", type=_floats, help="8 comma-separated coefficients")
    p.add_argument("--file", help="JSON {gamma: [8 values]}")
    p.add_argument("--tol", type=float, default=pairs.DEFAULT_TOL, help="numerical tolerance (default 1e-9)")
    p.add_argument("--samples", type=_count, default=pairs.DEFAULT_SAMPLES,
                   help="associativity sample triples (default 256)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("born-alpha", parents=[common], help="two-source mean rate vs exponent, solved exponent")
    p.add_argument("--target", type=float, default=2.0, help="required mean rate (default 2)")
    p.add_argument("--alphas", type=_floats, default=_floats(DEFAULT_ALPHAS), help=f"default {DEFAULT_ALPHAS}")
    p.add_argument("--samples", type=_count, default=1_000_000, help="MC samples per alpha (default 1e6)")
    p.add_argument("--tol", type=float, default=1e-10, help="root-finding tolerance (default 1e-10)")
    p.set_defaults(func=cmd_born_alpha)

    p = sub.add_parser("sample", parents=[common], help="CSV draws of objects, prior pairs or Poisson events")
    p.add_argument("--kind", choices=["object", "prior", "poisson"], default="object")
    p.add_argument("--n", type=_count, default=1, help="base states per object (default 1)")
    p.add_argument("--count", type=_count, default=10, help="number of draws (default 10)")
    p.add_argument("--rate", type=float, default=1.0, help="prior / Poisson rate (default 1)")
    p.add_argument("--duration", type=float, default=10.0, help="Poisson window length (default 10)")
    p.add_argument("--normalize", action="store_true", help="scale each draw onto the unit sphere")
    p.set_defaults(func=cmd_sample)

    for name, func, helptext in (("simulate", cmd_simulate, "evaluate a path network in one mode"),
                                 ("compare", cmd_compare, "scalar vs pair vs stochastic evaluation")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--file", required=True, help="network JSON: {elements: [...], edges: [[a, b], ...]}")
        p.add_argument("--trials", type=_count, default=network.DEFAULT_TRIALS,
                       help="stochastic trials (default 100000)")
        p.add_argument("--set", action="append", default=[], metavar="ID.PARAM=VALUE",
                       help="override an element parameter (JSON value; repeatable)")
        if name == "simulate":
            p.add_argument("--mode", choices=network.MODES, default="pair")
            p.add_argument("--decohere", choices=["branches", "sources"], default="branches",
                           help="which phases stochastic mode randomises (default branches)")
        p.set_defaults(func=func)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args)
    try:
        args.func(args, out)
    except SymquantError as exc:
        print(f"symquant {args.command}: error: {exc}", file=stderr)
        return 2
    stdout.write(out.render())
    return 0


def main():
    sys.exit(run())
