"""Partition trees: sum rule at nodes, ratios along paths, and Bayes.

Node values are fixed at construction (trees are immutable), so every query
is a lookup.  Path values are ratios ``value(destination) / value(source)``
and chain multiplicatively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import schema
from .errors import EmptyConditionError, InvalidTreeError, SymquantError

PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class TreePath:
    """Source-to-destination path; the destination lies in the source's subtree."""

    source: str
    destination: str

    @classmethod
    def parse(cls, text: str) -> "TreePath":
        """Parse ``"DEST:SOURCE"`` (destination first, like the path bracket)."""
        dest, sep, src = text.partition(":")
        if not sep or not dest or not src:
            raise SymquantError(f"path must look like DEST:SOURCE, got {text!r}")
        return cls(source=src, destination=dest)


class PartitionTree:
    """A rooted tree of valued nodes.

    Parameters
    ----------
    children : mapping of node id to list of child ids
        Internal nodes only.
    root : str
    weights : mapping of leaf id to non-negative weight, optional
        Leaves not listed get weight 1 (a-priori-equivalent base states).
    """

    def __init__(self, children: Mapping[str, Sequence[str]], root: str,
                 weights: Optional[Mapping[str, float]] = None):
        self._children = {k: tuple(v) for k, v in children.items()}
        self.root = root
        weights = dict(weights or {})
        parent: dict[str, str] = {}
        for node, kids in self._children.items():
            if not kids:
                raise InvalidTreeError(f"internal node {node!r} has no children")
            for kid in kids:
                if kid in parent:
                    raise InvalidTreeError(f"node {kid!r} has two parents ({parent[kid]!r}, {node!r})")
                parent[kid] = node
        if root in parent:
            raise InvalidTreeError(f"root {root!r} has a parent")
        self._parent = parent

        # Walk from the root; anything not reached is detached or part of a cycle.
        order, stack, seen = [], [root], {root}
        while stack:
            node = stack.pop()
            order.append(node)
            for kid in reversed(self._children.get(node, ())):
                if kid in seen:
                    raise InvalidTreeError(f"cycle through {kid!r}")
                seen.add(kid)
                stack.append(kid)
        known = set(self._children) | set(parent) | set(weights)
        stray = known - seen
        if stray:
            raise InvalidTreeError(f"nodes not reachable from root {root!r}: {sorted(stray)}")
        for node, w in weights.items():
            if node in self._children:
                raise InvalidTreeError(f"internal node {node!r} cannot carry a weight")
            if not (w >= 0 and math.isfinite(w)):
                raise InvalidTreeError(f"leaf {node!r} has invalid weight {w!r}")

        values: dict[str, float] = {}
        for node in reversed(order):
            kids = self._children.get(node)
            values[node] = float(weights.get(node, 1.0)) if kids is None else sum(values[k] for k in kids)
        self._values = values
        self._order = order
        self._depth = {root: 0}
        for node in order[1:]:
            self._depth[node] = self._depth[parent[node]] + 1

    @classmethod
    def from_dict(cls, doc: dict) -> "PartitionTree":
        schema.validate(doc, "tree")
        children, weights, ids = {}, {}, set()
        for i, node in enumerate(doc["nodes"]):
            nid = node["id"]
            if nid in ids:
                raise schema.SchemaError(f"duplicate node id {nid!r}", f"$.nodes[{i}].id")
            ids.add(nid)
            if "children" in node:
                children[nid] = node["children"]
            elif "weight" in node:
                weights[nid] = node["weight"]
        for nid, kids in children.items():
            for kid in kids:
                if kid not in ids:
                    raise InvalidTreeError(f"node {nid!r} lists unknown child {kid!r}")
        if doc["root"] not in ids:
            raise InvalidTreeError(f"root {doc['root']!r} is not a listed node")
        tree = cls(children, doc["root"], weights)
        stray = ids - set(tree.nodes)
        if stray:
            raise InvalidTreeError(f"nodes not reachable from root {doc['root']!r}: {sorted(stray)}")
        return tree

    @classmethod
    def load(cls, path) -> "PartitionTree":
        return cls.from_dict(schema.read_json(path))

    @classmethod
    def worked_example(cls) -> "PartitionTree":
        """Nine unit leaves: O = A + D, A = B + C with B, C, D over 2, 4, 3 leaves."""
        return cls.from_dict(schema.bundled("worked_tree.json"))

    @property
    def nodes(self) -> list[str]:
        """Node ids, root first (depth-first)."""
        return list(self._order)

    def children(self, node_id: str) -> tuple[str, ...]:
        self._check(node_id)
        return self._children.get(node_id, ())

    def is_leaf(self, node_id: str) -> bool:
        return not self.children(node_id)

    def _check(self, node_id):
        if node_id not in self._values:
            raise SymquantError(f"unknown node {node_id!r}")

    def node_value(self, node_id: str) -> float:
        self._check(node_id)
        return self._values[node_id]

    def ancestors(self, node_id: str) -> list[str]:
        """Chain from ``node_id`` up to the root, inclusive."""
        self._check(node_id)
        out = [node_id]
        while out[-1] in self._parent:
            out.append(self._parent[out[-1]])
        return out

    def covers(self, source: str, destination: str) -> bool:
        """True if ``destination`` is ``source`` or one of its descendants."""
        self._check(source)
        return source in self.ancestors(destination)

    def path_value(self, path: TreePath) -> float:
        if not self.covers(path.source, path.destination):
            raise SymquantError(f"{path.destination!r} is not inside {path.source!r}")
        src = self._values[path.source]
        if src == 0:
            raise EmptyConditionError(f"source {path.source!r} has zero value: empty conditioning event")
        if path.source == path.destination:
            return 1.0
        return self._values[path.destination] / src

    def sibling_path_sum(self, paths: Iterable[TreePath]) -> float:
        """Value of the combination of disjoint destinations under one source."""
        paths = list(paths)
        if not paths:
            raise SymquantError("need at least one path")
        sources = {p.source for p in paths}
        if len(sources) != 1:
            raise SymquantError(f"paths do not share a source: {sorted(sources)}")
        dests = [p.destination for p in paths]
        for i, a in enumerate(dests):
            for b in dests[i + 1:]:
                if self.covers(a, b) or self.covers(b, a):
                    raise SymquantError(f"destinations {a!r} and {b!r} overlap")
        return sum(self.path_value(p) for p in paths)


def chain(p1: float, p2: float) -> float:
    """Value of a concatenated path (scale fixed so the coefficient is 1)."""
    return p1 * p2


def bayes(prior, likelihood, tol: float = PROB_SUM_TOL):
    """Posterior over K exclusive hypotheses, and the evidence.

    Returns
    -------
    posterior : ndarray
    evidence : float
        ``sum(prior * likelihood)``; prior * likelihood == evidence * posterior.
    """
    prior = np.asarray(prior, dtype=float)
    likelihood = np.asarray(likelihood, dtype=float)
    if prior.ndim != 1 or prior.size == 0:
        raise SymquantError("prior must be a non-empty vector")
    if likelihood.shape != prior.shape:
        raise SymquantError(f"prior has {prior.size} entries, likelihood has {likelihood.size}")
    if not (np.all(np.isfinite(prior)) and np.all(np.isfinite(likelihood))):
        raise SymquantError("prior and likelihood must be finite")
    if np.any(prior < 0) or np.any(likelihood < 0):
        raise SymquantError("prior and likelihood must be non-negative")
    if abs(prior.sum() - 1.0) > tol:
        raise SymquantError(f"prior sums to {prior.sum()!r}, not 1")
    joint = prior * likelihood
    evidence = float(joint.sum())
    if evidence <= 0:
        raise EmptyConditionError("zero evidence: the data are impossible under the model")
    return joint / evidence, evidence
