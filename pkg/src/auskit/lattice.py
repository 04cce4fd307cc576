# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Finite lattices of invariant subspaces: enumeration, order queries, shapes and export."""

import itertools
import json
import logging
from collections import Counter
from dataclasses import dataclass
from enum import StrEnum, auto
from typing import TYPE_CHECKING, Any, Literal

import galois
import networkx as nx
import numpy as np
from graphviz import Digraph

from .config import Caps
from .errors import CapExceededError, PreconditionError
from .ffmat import (
    Mat,
    Subspace,
    block_diag,
    enumerate_subspaces,
    gaussian_binomial,
    intersect,
    invariant_closure,
    is_prime,
    normalize_rows,
    projective_points,
    subspace_count,
    subspace_sum,
    zeros,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence

    from .determine import GammaModule
    from .rep import Rep

logger = logging.getLogger(__name__)

type Method = Literal["auto", "closure", "filter"]

FILTER_LIMIT = 6
MODULAR_EXHAUSTIVE_LIMIT = 60
ISOMORPHISM_LIMIT = 150


def invariant_subspaces(
    n: int,
    p: int,
    action: "Sequence[Mat]",
    *,
    method: Method = "auto",
    max_nodes: int = 20000,
    max_subspaces: int = 10**6,
) -> list[Subspace]:
    """Every subspace of F_p^n stable under `action`, sorted by dimension and RREF.

    "closure" grows the set from zero by adjoining one vector at a time and
    closing under the action. "filter" tests every subspace of F_p^n. "auto"
    filters when n is at most FILTER_LIMIT.
    """
    if method == "filter" or (method == "auto" and n <= FILTER_LIMIT):
        found = [s for s in enumerate_subspaces(n, p, max_subspaces) if _stable(s, action)]
    else:
        found = _grow(n, p, action, max_nodes)
    if len(found) > max_nodes:
        raise CapExceededError("lattice nodes", len(found), max_nodes)
    logger.debug("%d invariant subspaces of F_%d^%d", len(found), p, n)
    return sorted(found, key=lambda s: (s.dim, s.basis.tobytes()))


def _stable(space: Subspace, action: "Sequence[Mat]") -> bool:
    return all(space.is_invariant(m) for m in action)


def _grow(n: int, p: int, action: "Sequence[Mat]", max_nodes: int) -> list[Subspace]:
    points = np.array(list(projective_points(n, p)), dtype=np.int64).reshape(-1, n)
    bottom = Subspace.zero(n, p)
    seen = {bottom}
    frontier = [bottom]
    while frontier:
        following: list[Subspace] = []
        for u in frontier:
            residues = normalize_rows(u.residual(points), p)
            residues = residues[residues.any(axis=1)]
            for r in np.unique(residues, axis=0):
                w = invariant_closure(np.vstack([u.basis, r]), action, n, p)
                if w not in seen:
                    seen.add(w)
                    following.append(w)
            if len(seen) > max_nodes:
                raise CapExceededError("lattice nodes", len(seen), max_nodes)
        frontier = following
    return list(seen)


@dataclass(frozen=True, eq=False)
class Node:
    index: int
    space: Subspace
    composition: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.composition)


class FiniteLattice:
    """A lattice of subspaces closed under sum and intersection, graded by composition length.

    `graph` holds the Hasse diagram with edges pointing from a node to the
    nodes covering it.
    """

    def __init__(
        self,
        spaces: "Sequence[Subspace]",
        compositions: "Sequence[tuple[int, ...]]",
        labels: "Sequence[str]",
        p: int,
    ) -> None:
        self.p = p
        self.labels = tuple(labels)
        self.nodes = tuple(
            Node(i, s, tuple(c)) for i, (s, c) in enumerate(zip(spaces, compositions, strict=True))
        )
        self._index = {node.space: node.index for node in self.nodes}
        self._meets: dict[tuple[int, int], int] = {}
        self._joins: dict[tuple[int, int], int] = {}
        self.graph = nx.DiGraph()
        for node in self.nodes:
            self.graph.add_node(node.index, height=node.height)
        levels: dict[int, list[Node]] = {}
        for node in self.nodes:
            levels.setdefault(node.height, []).append(node)
        for h, lower in levels.items():
            for a in lower:
                for b in levels.get(h + 1, []):
                    if a.space <= b.space:
                        self.graph.add_edge(a.index, b.index)
        self.bottom = min(self.nodes, key=lambda node: node.space.dim).index
        self.top = max(self.nodes, key=lambda node: node.space.dim).index

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"<FiniteLattice: {len(self)} nodes, height {self.height}>"

    @property
    def height(self) -> int:
        return self.nodes[self.top].height

    @property
    def ambient_dim(self) -> int:
        return self.nodes[0].space.ambient_dim

    @property
    def covers(self) -> list[tuple[int, int]]:
        return sorted(self.graph.edges)

    def find(self, space: Subspace) -> int:
        try:
            return self._index[space]
        except KeyError:
            msg = f"{space!r} is not an element of the lattice"
            raise PreconditionError(msg) from None

    def leq(self, i: int, j: int) -> bool:
        return self.nodes[i].space <= self.nodes[j].space

    def meet(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._meets:
            self._meets[key] = self.find(intersect(self.nodes[i].space, self.nodes[j].space))
        return self._meets[key]

    def join(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._joins:
            self._joins[key] = self.find(subspace_sum(self.nodes[i].space, self.nodes[j].space))
        return self._joins[key]

    def order_meet(self, i: int, j: int) -> int:
        """Greatest common lower bound read off the Hasse diagram alone."""
        common = (nx.ancestors(self.graph, i) | {i}) & (nx.ancestors(self.graph, j) | {j})
        return self._extreme(common, nx.ancestors)

    def order_join(self, i: int, j: int) -> int:
        common = (nx.descendants(self.graph, i) | {i}) & (nx.descendants(self.graph, j) | {j})
        return self._extreme(common, nx.descendants)

    def _extreme(self, common: set[int], below: "Callable[[nx.DiGraph, int], set[int]]") -> int:
        for candidate in common:
            if common - {candidate} <= below(self.graph, candidate):
                return candidate
        msg = "Bounds have no extreme element; the order is not a lattice"
        raise PreconditionError(msg)

    def total(self) -> tuple[int, ...]:
        return self.nodes[self.top].composition

    def quotient_dimvec(self, i: int) -> tuple[int, ...]:
        return tuple(t - c for t, c in zip(self.total(), self.nodes[i].composition, strict=True))

    def jordan_holder(self, i: int, j: int) -> dict[str, int]:
        """Composition factors of node j over node i."""
        if not self.leq(i, j):
            msg = f"Node {i} is not below node {j}"
            raise PreconditionError(msg)
        lower, upper = self.nodes[i].composition, self.nodes[j].composition
        return {label: u - v for label, u, v in zip(self.labels, upper, lower, strict=True)}

    def maximal_chain(self, rng: np.random.Generator | None = None) -> list[int]:
        chain = [self.bottom]
        while chain[-1] != self.top:
            ups = sorted(self.graph.successors(chain[-1]))
            chain.append(ups[int(rng.integers(len(ups)))] if rng is not None else ups[0])
        return chain

    def chain_factors(self, chain: "Sequence[int]") -> Counter[str]:
        """Labels of the simple factors met along a chain of covers."""
        out: Counter[str] = Counter()
        for a, b in itertools.pairwise(chain):
            step = self.jordan_holder(a, b)
            simple = [label for label, n in step.items() if n]
            if len(simple) != 1 or step[simple[0]] != 1:
                msg = f"Step {a} -> {b} is not a cover"
                raise PreconditionError(msg)
            out[simple[0]] += 1
        return out


def submodule_lattice(
    gm: "GammaModule", caps: Caps | None = None, method: Method = "auto"
) -> FiniteLattice:
    """All Gamma-submodules of Hom(C, Y)."""
    caps = caps or Caps()
    cap = caps.hom_dim_cap(gm.p)
    if gm.dim > cap:
        bound = subspace_count(gm.dim, gm.p)
        msg = f"Hom(C, Y) of dimension {gm.dim} (up to {bound} subspaces)"
        raise CapExceededError(msg, gm.dim, cap)
    spaces = invariant_subspaces(
        gm.dim,
        gm.p,
        gm.action,
        method=method,
        max_nodes=caps.max_nodes,
        max_subspaces=caps.max_subspaces,
    )
    return FiniteLattice(spaces, [gm.composition(s) for s in spaces], gm.label_names(), gm.p)


def module_lattice(y: "Rep", caps: Caps | None = None, method: Method = "auto") -> FiniteLattice:
    """All Lambda-submodules of y, as graded subspaces of its total space."""
    caps = caps or Caps()
    action = [*y.global_arrows, *y.vertex_projections]
    spaces = invariant_subspaces(
        y.dim,
        y.p,
        action,
        method=method,
        max_nodes=caps.max_nodes,
        max_subspaces=caps.max_subspaces,
    )
    compositions = [tuple(s.dim for s in y.graded_subspaces(space)) for space in spaces]
    return FiniteLattice(spaces, compositions, y.algebra.vertices, y.p)


class ShapeKind(StrEnum):
    chain = auto()
    geometry = auto()
    other = auto()


@dataclass(frozen=True)
class ShapeClass:
    """I(d), G(d) over F_q, or neither. I(0) = G(0) and I(1) = G(1) for every q."""

    kind: ShapeKind
    d: int
    q: int | None = None

    def __str__(self) -> str:
        match self.kind:
            case ShapeKind.chain:
                return f"I({self.d})"
            case ShapeKind.geometry:
                return f"G({self.d}) over F_{self.q}"
            case ShapeKind.other:
                return f"other (height {self.d})"

    def matches(self, kind: ShapeKind, d: int, q: int | None = None) -> bool:
        if self.d != d:
            return False
        if d <= 1 and kind is not ShapeKind.other:
            return self.kind is not ShapeKind.other
        return self.kind is kind and (q is None or self.q is None or self.q == q)


def _prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return None


def reference_geometry(d: int, q: int) -> FiniteLattice:
    """Subspaces of F_q^d, built as F_p-subspaces of F_p^(dk) stable under F_q."""
    pk = _prime_power(q)
    if pk is None:
        msg = f"{q} is not a prime power"
        raise PreconditionError(msg)
    p, k = pk
    if k == 1:
        spaces = list(enumerate_subspaces(d, p))
        return FiniteLattice(spaces, [(s.dim,) for s in spaces], ("k",), p)
    poly = galois.irreducible_poly(p, k)
    # coefficients come highest degree first; companion matrix of the monic polynomial
    coeffs = [int(c) for c in poly.coeffs][::-1]
    companion = zeros(k, k)
    companion[1:, :-1] = np.eye(k - 1, dtype=np.int64)
    companion[:, -1] = [(-c) % p for c in coeffs[:k]]
    action = [block_diag([companion] * d)]
    spaces = invariant_subspaces(d * k, p, action, method="closure")
    return FiniteLattice(spaces, [(s.dim // k,) for s in spaces], ("k",), p)


def classify_shape(lattice: FiniteLattice, q: int | None = None) -> ShapeClass:
    n, h = len(lattice), lattice.height
    if n == h + 1:
        return ShapeClass(ShapeKind.chain, h)
    candidates = [q] if q is not None else _geometry_fields(lattice.p, h, n)
    for field in candidates:
        if subspace_count(h, field) != n:
            continue
        if n > ISOMORPHISM_LIMIT:
            logger.warning("lattice with %d nodes: shape G(%d) decided by counts only", n, h)
            if _level_counts(lattice) == _geometry_levels(h, field):
                return ShapeClass(ShapeKind.geometry, h, field)
            continue
        reference = reference_geometry(h, field)
        if nx.is_isomorphic(
            lattice.graph,
            reference.graph,
            node_match=_same_height,
        ):
            return ShapeClass(ShapeKind.geometry, h, field)
    return ShapeClass(ShapeKind.other, h)


def _same_height(a: dict[str, int], b: dict[str, int]) -> bool:
    return a["height"] == b["height"]


def _geometry_fields(p: int, h: int, n: int) -> list[int]:
    out: list[int] = []
    q = p
    while h >= 2 and subspace_count(h, q) <= n:
        out.append(q)
        q *= p
    return out


def _level_counts(lattice: FiniteLattice) -> list[int]:
    counts = Counter(node.height for node in lattice.nodes)
    return [counts[i] for i in range(lattice.height + 1)]


def _geometry_levels(d: int, q: int) -> list[int]:
    return [gaussian_binomial(d, k, q) for k in range(d + 1)]


def strata_counts(lattice: FiniteLattice) -> Counter[tuple[int, ...]]:
    """Node counts per dimension vector of the quotient by the node."""
    return Counter(lattice.quotient_dimvec(node.index) for node in lattice.nodes)


def check_modular(
    lattice: FiniteLattice, rng: np.random.Generator | None = None, samples: int = 2000
) -> list[tuple[int, int, int]]:
    """Triples a <= c, b with (a v b) ^ c != a v (b ^ c)."""
    n = len(lattice)
    if n <= MODULAR_EXHAUSTIVE_LIMIT:
        triples = itertools.product(range(n), repeat=3)
    else:
        rng = rng or np.random.default_rng(0)
        triples = (tuple(int(x) for x in rng.integers(n, size=3)) for _ in range(samples))
    bad: list[tuple[int, int, int]] = []
    for a, b, c in triples:
        if not lattice.leq(a, c):
            continue
        if lattice.meet(lattice.join(a, b), c) != lattice.join(a, lattice.meet(b, c)):
            bad.append((a, b, c))
    return bad


def _dimvec_label(lattice: FiniteLattice, node: Node) -> str:
    parts = zip(lattice.labels, node.composition, strict=True)
    return " ".join(f"{n}{label}" for label, n in parts if n) or "0"


def export_dot(
    lattice: FiniteLattice, labeler: "Callable[[Node], str] | None" = None, name: str = "lattice"
) -> str:
    dot = Digraph(name, graph_attr={"rankdir": "BT"}, node_attr={"shape": "box"})
    for node in lattice.nodes:
        label = labeler(node) if labeler is not None else _dimvec_label(lattice, node)
        dot.node(str(node.index), label)
    for a, b in lattice.covers:
        dot.edge(str(a), str(b))
    return dot.source


def export_json(
    lattice: FiniteLattice, flags: "Mapping[int, Mapping[str, bool]] | None" = None
) -> str:
    data: dict[str, Any] = {
        "field": lattice.p,
        "ambient_dim": lattice.ambient_dim,
        "labels": list(lattice.labels),
        "nodes": [
            {
                "id": node.index,
                "basis": node.space.basis.tolist(),
                "height": node.height,
                "quotient_dimvec": dict(
                    zip(lattice.labels, lattice.quotient_dimvec(node.index), strict=True)
                ),
                "flags": dict((flags or {}).get(node.index, {})),
            }
            for node in lattice.nodes
        ],
        "covers": [list(edge) for edge in lattice.covers],
        "top": lattice.top,
        "bottom": lattice.bottom,
    }
    return json.dumps(data, indent=2)


def lattice_from_json(text: str) -> FiniteLattice:
    data = json.loads(text)
    p, n = int(data["field"]), int(data["ambient_dim"])
    labels = [str(label) for label in data["labels"]]
    nodes = sorted(data["nodes"], key=lambda node: int(node["id"]))
    bottom = next(node for node in nodes if int(node["id"]) == int(data["bottom"]))
    full = [int(bottom["quotient_dimvec"][label]) for label in labels]
    spaces = [Subspace.span(np.array(node["basis"], dtype=np.int64), n, p) for node in nodes]
    compositions = [
        tuple(full[i] - int(node["quotient_dimvec"][label]) for i, label in enumerate(labels))
        for node in nodes
    ]
    return FiniteLattice(spaces, compositions, labels, p)
