"""Loaded trees and their correspondence with tree monomials.

A loaded tree is a tree whose vertices carry (possibly empty) label sets that
partition ``N`` and whose edges carry positive multiplicities, subject to
``deg(v) + |h(v)| >= 3`` at every vertex.  Every edge induces a cut of ``N``;
the monomial of the tree is the product of those cuts raised to the edge
multiplicities.

Vertex ids are plain integers ``0 .. V-1``.  Two trees compare equal when
their canonical monomials do (isomorphism is never computed directly).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Literal, Sequence

from .errors import (
    EmptyMonomialBadN,
    InvalidTree,
    NoCorrespondingMonomial,
    NotATreeMonomial,
)
from .keel import Cut, LabelSet, Monomial, is_tree_monomial

__all__ = [
    "LoadedTree",
    "WeightedTree",
    "Cluster",
    "monomial_to_tree",
    "tree_to_monomial",
    "clusters",
    "weighted_tree",
    "is_proper",
    "tree_to_dot",
    "tree_to_json",
    "tree_from_json",
]


class LoadedTree:
    """A tree with vertex label sets and edge multiplicities.

    ``vertex_labels[v]`` is the label set ``h(v)``; ``edges[i]`` joins two
    vertex ids and has multiplicity ``multiplicities[i]``.
    """

    __slots__ = ("label_set", "vertex_labels", "edges", "multiplicities", "__dict__")

    def __init__(
        self,
        label_set: LabelSet,
        vertex_labels: Sequence[Iterable[int]],
        edges: Sequence[tuple[int, int]],
        multiplicities: Sequence[int],
    ):
        self.label_set = label_set
        self.vertex_labels: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(h)) for h in vertex_labels)
        self.edges: tuple[tuple[int, int], ...] = tuple((min(u, v), max(u, v)) for u, v in edges)
        self.multiplicities: tuple[int, ...] = tuple(multiplicities)
        self._validate()

    def _validate(self) -> None:
        nv = len(self.vertex_labels)
        if nv == 0:
            raise InvalidTree("a loaded tree needs at least one vertex")
        if len(self.edges) != nv - 1:
            raise InvalidTree(f"{nv} vertices need {nv - 1} edges, got {len(self.edges)}")
        if len(self.multiplicities) != len(self.edges):
            raise InvalidTree("one multiplicity per edge is required")
        for m in self.multiplicities:
            if not isinstance(m, int) or m < 1:
                raise InvalidTree(f"edge multiplicities must be positive integers, got {m!r}")
        for u, v in self.edges:
            if not (0 <= u < nv and 0 <= v < nv) or u == v:
                raise InvalidTree(f"bad edge {(u, v)}")
        seen: set[int] = set()
        for h in self.vertex_labels:
            for x in h:
                if x in seen:
                    raise InvalidTree(f"label {x} appears on two vertices")
                seen.add(x)
        if seen != set(self.label_set.labels):
            raise InvalidTree(f"vertex labels {sorted(seen)} do not partition {self.label_set}")
        # connectivity
        adj = self.adjacency
        reached = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in reached:
                    reached.add(y)
                    stack.append(y)
        if len(reached) != nv:
            raise InvalidTree("the underlying graph is not connected")
        for v in range(nv):
            if len(adj[v]) + len(self.vertex_labels[v]) < 3:
                raise InvalidTree(f"vertex {v} violates deg(v) + |h(v)| >= 3")

    # -- structure -------------------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adjacency[v]`` lists ``(neighbour, edge index)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertex_labels]
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        return tuple(tuple(a) for a in adj)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def n(self) -> int:
        return self.label_set.n

    @property
    def fringes(self) -> int:
        return sum(self.multiplicities)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertex_weight(self, v: int) -> int:
        return len(self.adjacency[v]) + len(self.vertex_labels[v]) - 3

    def edge_weight(self, i: int) -> int:
        return self.multiplicities[i] - 1

    @cached_property
    def vertex_masks(self) -> tuple[int, ...]:
        return tuple(self.label_set.mask(h) for h in self.vertex_labels)

    @cached_property
    def _rooted(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Per edge: the endpoint away from vertex 0 and the label mask behind it."""
        nv = self.num_vertices
        parent_edge = [-1] * nv
        order = [0]
        seen = [False] * nv
        seen[0] = True
        for x in order:
            for y, i in self.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    parent_edge[y] = i
                    order.append(y)
        sub = list(self.vertex_masks)
        below = [0] * len(self.edges)
        below_mask = [0] * len(self.edges)
        for x in reversed(order):
            i = parent_edge[x]
            if i >= 0:
                below[i] = x
                below_mask[i] = sub[x]
                u, v = self.edges[i]
                sub[u if v == x else v] |= sub[x]
        return tuple(below), tuple(below_mask)

    def side_mask(self, i: int, v: int) -> int:
        """Labels in the component containing endpoint ``v`` once edge ``i`` is removed."""
        below, masks = self._rooted
        if v not in self.edges[i]:
            raise ValueError(f"vertex {v} is not an endpoint of edge {i}")
        return masks[i] if below[i] == v else self.label_set.full ^ masks[i]

    def side_vertices(self, i: int, v: int) -> list[int]:
        """Vertices in the component of ``v`` once edge ``i`` is removed."""
        u = self.edges[i][0] if self.edges[i][1] == v else self.edges[i][1]
        out = [v]
        seen = {v, u}
        for x in out:
            for y, _ in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out

    @cached_property
    def edge_cuts(self) -> tuple[Cut, ...]:
        return tuple(Cut(self.label_set, m) for m in self._rooted[1])

    def edge_between(self, u: int, v: int) -> int:
        for y, i in self.adjacency[u]:
            if y == v:
                return i
        raise ValueError(f"no edge between {u} and {v}")

    def edge_of_cut(self, cut: Cut) -> int:
        for i, c in enumerate(self.edge_cuts):
            if c == cut:
                return i
        raise ValueError(f"{cut!r} is not an edge of this tree")

    def vertex_of_label(self, label: int) -> int:
        for v, h in enumerate(self.vertex_labels):
            if label in h:
                return v
        raise ValueError(f"label {label} not in tree")

    @property
    def is_proper(self) -> bool:
        return self.n == self.fringes + 3

    @cached_property
    def canonical_key(self) -> tuple:
        pairs = sorted(zip((c.mask for c in self.edge_cuts), self.multiplicities))
        return (self.label_set, tuple(pairs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LoadedTree):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self) -> int:
        return hash(self.canonical_key)

    def __repr__(self) -> str:
        verts = ", ".join("{" + ",".join(map(str, h)) + "}" for h in self.vertex_labels)
        edges = ", ".join(f"{u}-{v}" + (f"x{m}" if m > 1 else "") for (u, v), m in zip(self.edges, self.multiplicities))
        return f"LoadedTree([{verts}]; [{edges}])"

    def relabeled(self, mapping: dict[int, int]) -> LoadedTree:
        """Same shape with every label ``x`` replaced by ``mapping.get(x, x)``."""
        new = [[mapping.get(x, x) for x in h] for h in self.vertex_labels]
        return LoadedTree(LabelSet(x for h in new for x in h), new, self.edges, self.multiplicities)


@dataclass(frozen=True)
class WeightedTree:
    """The tree of a loaded tree with ``w(v) = deg(v)+|h(v)|-3`` and ``w(e) = m(e)-1``."""

    tree: LoadedTree
    vertex_weights: tuple[int, ...]
    edge_weights: tuple[int, ...]

    @property
    def vertex_weight_sum(self) -> int:
        return sum(self.vertex_weights)

    @property
    def edge_weight_sum(self) -> int:
        return sum(self.edge_weights)

    def satisfies_weight_identity(self) -> bool:
        return self.vertex_weight_sum == self.edge_weight_sum


@dataclass(frozen=True)
class Cluster:
    owner: int
    labels: tuple[int, ...]
    kind: Literal["singleton", "proper"]


def weighted_tree(t: LoadedTree) -> WeightedTree:
    return WeightedTree(
        t,
        tuple(t.vertex_weight(v) for v in range(t.num_vertices)),
        tuple(m - 1 for m in t.multiplicities),
    )


def is_proper(t: LoadedTree) -> bool:
    return t.is_proper


def clusters(t: LoadedTree, v: int) -> list[Cluster]:
    """Singletons of ``h(v)`` followed by the label sets of the components of ``T - v``."""
    out = [Cluster(v, (x,), "singleton") for x in t.vertex_labels[v]]
    for y, i in t.adjacency[v]:
        out.append(Cluster(v, t.label_set.unmask(t.side_mask(i, y)), "proper"))
    return out


def monomial_to_tree(m: Monomial, check: bool = True) -> LoadedTree:
    """The unique loaded tree whose monomial is ``m`` (Hasse diagram of the cut parts).

    The pivot cut is the canonically smallest factor.
    """
    ls = m.label_set
    if m.is_empty:
        if ls.n != 3:
            raise EmptyMonomialBadN(f"the empty monomial over {ls} has no loaded tree")
        return LoadedTree(ls, [ls.labels], [], [])
    if check and not is_tree_monomial(m):
        raise NotATreeMonomial(f"{m.compact()} has two factors killed by the quadratic relation")
    full = ls.full
    (pivot, pivot_exp), *rest = m.factors
    I = pivot.mask
    J = full ^ I
    parts = [I, J]
    exps = [pivot_exp, pivot_exp]
    for c, e in rest:
        p = c.mask
        if p & ~I == 0 or p & ~J == 0:
            parts.append(p)
        else:
            parts.append(full ^ p)
        exps.append(e)

    order = sorted(range(len(parts)), key=lambda i: parts[i].bit_count())
    parent = [-1] * len(parts)
    for pos, i in enumerate(order):
        if i < 2:
            continue
        p = parts[i]
        for j in order[pos + 1:]:
            if p & ~parts[j] == 0:
                parent[i] = j
                break
        else:  # pragma: no cover - laminarity guarantees a parent
            raise NotATreeMonomial(f"{m.compact()} does not form a laminar family")

    child_union = [0] * len(parts)
    for i in range(2, len(parts)):
        child_union[parent[i]] |= parts[i]
    labels = [ls.unmask(parts[i] & ~child_union[i]) for i in range(len(parts))]
    edges = [(0, 1)] + [(i, parent[i]) for i in range(2, len(parts))]
    mults = [exps[0]] + exps[2:]
    return LoadedTree(ls, labels, edges, mults)


def tree_to_monomial(t: LoadedTree) -> Monomial:
    if not t.edges:
        if t.n != 3:
            raise NoCorrespondingMonomial(f"a single vertex with {t.n} labels has no monomial")
        return Monomial.empty(t.label_set)
    return Monomial(t.label_set, zip(t.edge_cuts, t.multiplicities))


# -- export --------------------------------------------------------------------

def _fmt(labels: Iterable[int]) -> str:
    return "{" + ",".join(map(str, labels)) + "}"


def tree_to_dot(t: LoadedTree, name: str = "loaded_tree") -> str:
    lines = [f"graph {name} {{"]
    for v, h in enumerate(t.vertex_labels):
        lines.append(f'  v{v} [label="{_fmt(h)}"];')
    for (u, v), m in zip(t.edges, t.multiplicities):
        lines.append(f'  v{u} -- v{v} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_json(t: LoadedTree) -> dict:
    return {
        "labels": list(t.label_set.labels),
        "vertices": [{"id": v, "labels": list(h)} for v, h in enumerate(t.vertex_labels)],
        "edges": [
            {"u": u, "v": v, "multiplicity": m} for (u, v), m in zip(t.edges, t.multiplicities)
        ],
    }


def tree_from_json(data: dict | str) -> LoadedTree:
    if isinstance(data, str):
        data = json.loads(data)
    verts = sorted(data["vertices"], key=lambda d: d["id"])
    if [d["id"] for d in verts] != list(range(len(verts))):
        raise InvalidTree("vertex ids must be 0..V-1")
    return LoadedTree(
        LabelSet(data["labels"]),
        [d["labels"] for d in verts],
        [(e["u"], e["v"]) for e in data["edges"]],
        [e["multiplicity"] for e in data["edges"]],
    )
