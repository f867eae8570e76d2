"""The forest algorithm: redundancy forests, the recursive binomial formula and
the end-to-end integral value of a monomial."""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from math import comb, factorial, prod
from typing import Literal, Sequence

from .errors import NotProper
from .keel import Monomial, find_quadratic_pair, is_clever
from .loaded_tree import LoadedTree, monomial_to_tree

__all__ = [
    "RedundancyForest",
    "IntegralValue",
    "redundancy_forest",
    "forest_value",
    "integral_value",
    "tree_value",
    "tree_sign",
    "sun_like_value",
    "forest_to_dot",
]

Origin = tuple[Literal["vertex", "edge"], int]
Classification = Literal["zero-by-quadratic", "improper-degree", "clever", "general"]


@dataclass(frozen=True)
class RedundancyForest:
    """Vertex-weighted forest; node ``i`` has weight ``weights[i]``.

    ``origins[i]`` records which vertex or edge of the source loaded tree the
    node came from (``None`` for hand-built forests).
    """

    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()
    origins: tuple[Origin, ...] | None = None

    def __post_init__(self):
        nv = len(self.weights)
        if any(w < 0 for w in self.weights):
            raise ValueError("redundancy forest weights must be nonnegative")
        if len(self.edges) >= max(nv, 1):
            raise ValueError("too many edges for a forest")
        for a, b in self.edges:
            if not (0 <= a < nv and 0 <= b < nv) or a == b:
                raise ValueError(f"bad forest edge {(a, b)}")
        if self.origins is not None and len(self.origins) != nv:
            raise ValueError("one origin per node is required")
        # acyclicity: a forest has exactly nv - components edges
        if len(self.edges) != nv - len(self.trees):
            raise ValueError("edges contain a cycle")

    @property
    def num_nodes(self) -> int:
        return len(self.weights)

    @property
    def is_empty(self) -> bool:
        return not self.weights

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.weights]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    @property
    def trees(self) -> list[list[int]]:
        """Node ids of each connected component."""
        adj = self.adjacency()
        seen = [False] * len(self.weights)
        out = []
        for s in range(len(self.weights)):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            for x in comp:
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
            out.append(sorted(comp))
        return out


@dataclass(frozen=True)
class IntegralValue:
    value: int
    sign: int
    magnitude: int
    proper: bool
    classification: Classification
    timings: dict[str, float] = field(default_factory=dict, compare=False, repr=False)

    def __int__(self) -> int:
        return self.value


def redundancy_forest(t: LoadedTree, delete_zero: bool = True) -> RedundancyForest:
    """Subdivide every edge of ``t`` and drop weight-zero nodes.

    With ``delete_zero=False`` the full redundancy tree is returned.
    """
    nv = t.num_vertices
    weights = [t.vertex_weight(v) for v in range(nv)] + [m - 1 for m in t.multiplicities]
    origins: list[Origin] = [("vertex", v) for v in range(nv)] + [("edge", i) for i in range(len(t.edges))]
    edges = []
    for i, (u, v) in enumerate(t.edges):
        edges.append((u, nv + i))
        edges.append((v, nv + i))
    if not delete_zero:
        return RedundancyForest(tuple(weights), tuple(edges), tuple(origins))
    keep = [i for i, w in enumerate(weights) if w]
    new_id = {old: new for new, old in enumerate(keep)}
    kept_edges = tuple((new_id[a], new_id[b]) for a, b in edges if a in new_id and b in new_id)
    return RedundancyForest(tuple(weights[i] for i in keep), kept_edges, tuple(origins[i] for i in keep))


def forest_value(f: RedundancyForest, rng: random.Random | None = None) -> int:
    """Absolute value of a redundancy forest by leaf elimination.

    Leaves go smallest id first unless ``rng`` is given, in which case each
    step picks a uniformly random current leaf.
    """
    w = list(f.weights)
    adj = f.adjacency()
    alive = [True] * len(w)
    result = 1

    def pop_leaf_sorted(heap: list[int]) -> int | None:
        while heap:
            x = heapq.heappop(heap)
            if alive[x] and len(adj[x]) == 1:
                return x
        return None

    heap = [x for x in range(len(w)) if len(adj[x]) == 1]
    heapq.heapify(heap)
    while True:
        if rng is None:
            leaf = pop_leaf_sorted(heap)
        else:
            leaves = [x for x in range(len(w)) if alive[x] and len(adj[x]) == 1]
            leaf = rng.choice(leaves) if leaves else None
        if leaf is None:
            break
        (p,) = adj[leaf]
        if w[leaf] > w[p]:
            return 0
        result *= comb(w[p], w[leaf])
        w[p] -= w[leaf]
        alive[leaf] = False
        adj[leaf].clear()
        adj[p].discard(leaf)
        if rng is None and len(adj[p]) == 1:
            heapq.heappush(heap, p)
    for x in range(len(w)):
        if alive[x] and w[x]:
            return 0
    return result


def tree_sign(t: LoadedTree) -> int:
    return -1 if (t.fringes - len(t.edges)) % 2 else 1


def tree_value(t: LoadedTree, rng: random.Random | None = None) -> int:
    """Signed integral value of a loaded tree (0 unless proper)."""
    if not t.is_proper:
        return 0
    mag = forest_value(redundancy_forest(t), rng)
    return tree_sign(t) * mag


def integral_value(m: Monomial) -> IntegralValue:
    """Value of ``m`` through degree check, quadratic filter, tree and forest."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    if not m.is_proper:
        timings["degree"] = time.perf_counter() - t0
        return IntegralValue(0, 1, 0, False, "improper-degree", timings)
    t1 = time.perf_counter()
    timings["degree"] = t1 - t0
    if find_quadratic_pair(m) is not None:
        timings["quadratic"] = time.perf_counter() - t1
        return IntegralValue(0, 1, 0, True, "zero-by-quadratic", timings)
    t2 = time.perf_counter()
    timings["quadratic"] = t2 - t1
    # clever monomials still go through the forest; the value 1 is a check, not a shortcut
    kind: Classification = "clever" if all(e == 1 for _, e in m.factors) else "general"
    tree = monomial_to_tree(m, check=False)
    t3 = time.perf_counter()
    timings["tree"] = t3 - t2
    forest = redundancy_forest(tree)
    mag = forest_value(forest)
    timings["forest"] = time.perf_counter() - t3
    sign = tree_sign(tree)
    return IntegralValue(sign * mag, sign, mag, True, kind, timings)


def sun_like_value(k: int, weights: Sequence[int]) -> int:
    """Closed form ``(-1)^k k! / prod(w_i!)`` for a sun-like tree."""
    if any(w < 1 for w in weights):
        raise ValueError(f"sun-like edge weights must be positive, got {list(weights)}")
    if k != sum(weights):
        raise NotProper(f"center weight {k} differs from the edge weight sum {sum(weights)}")
    return (-1) ** k * factorial(k) // prod(factorial(w) for w in weights)


def forest_to_dot(f: RedundancyForest, name: str = "redundancy_forest") -> str:
    lines = [f"graph {name} {{"]
    for i, w in enumerate(f.weights):
        shape = "box" if f.origins is not None and f.origins[i][0] == "edge" else "ellipse"
        lines.append(f'  n{i} [label="{w}", shape={shape}];')
    for a, b in f.edges:
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
