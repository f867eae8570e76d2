"""Random and exhaustive sources of loaded trees and monomials."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator, Sequence

from .forest import RedundancyForest
from .keel import Cut, LabelSet, Monomial
from .loaded_tree import LoadedTree

__all__ = [
    "random_tree_edges",
    "random_proper_tree",
    "random_clever_tree",
    "random_multi_edge_tree",
    "sun_like_tree",
    "caterpillar_monomial",
    "caterpillar_tree",
    "all_proper_tree_monomials",
    "random_forest",
]


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniformly random ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        return []
    bars = sorted(rng.sample(range(total + parts - 1), parts - 1))
    out, prev = [], -1
    for b in bars + [total + parts - 1]:
        out.append(b - prev - 1)
        prev = b
    return out


def random_tree_edges(rng: random.Random, nv: int, max_degree: int | None = None) -> list[tuple[int, int]]:
    """Random tree on ``0..nv-1`` grown by attaching each vertex to an earlier one."""
    deg = [0] * nv
    edges = []
    for v in range(1, nv):
        choices = [u for u in range(v) if max_degree is None or deg[u] < max_degree]
        u = rng.choice(choices)
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    return edges


def _loaded(rng: random.Random, nv: int, edges: list[tuple[int, int]], n: int, mults: list[int], shuffle: bool) -> LoadedTree | None:
    deg = [0] * nv
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    need = [max(0, 3 - d) for d in deg]
    spare = n - sum(need)
    if spare < 0:
        return None
    counts = [a + b for a, b in zip(need, _composition(rng, spare, nv))]
    labels = list(range(1, n + 1))
    if shuffle:
        rng.shuffle(labels)
    h, pos = [], 0
    for c in counts:
        h.append(labels[pos:pos + c])
        pos += c
    return LoadedTree(LabelSet.standard(n), h, edges, mults)


def random_proper_tree(rng: random.Random, n: int, nv: int | None = None, shuffle: bool = True) -> LoadedTree:
    """Random proper loaded tree on labels ``1..n``.

    ``nv`` fixes the number of vertices (at most ``n - 2``); otherwise it is
    drawn uniformly.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if n == 3:
        return LoadedTree(LabelSet.standard(3), [[1, 2, 3]], [], [])
    while True:
        v = nv if nv is not None else rng.randint(2, n - 2)
        edges = random_tree_edges(rng, v)
        extra = (n - 3) - (v - 1)
        mults = [1 + x for x in _composition(rng, extra, v - 1)]
        t = _loaded(rng, v, edges, n, mults, shuffle)
        if t is not None:
            return t


def random_clever_tree(rng: random.Random, n: int, shuffle: bool = True) -> LoadedTree:
    """Random tree with ``n - 3`` single edges and every vertex of weight zero."""
    if n == 3:
        return LoadedTree(LabelSet.standard(3), [[1, 2, 3]], [], [])
    nv = n - 2
    edges = random_tree_edges(rng, nv, max_degree=3)
    t = _loaded(rng, nv, edges, n, [1] * (nv - 1), shuffle)
    assert t is not None
    return t


def random_multi_edge_tree(rng: random.Random, n: int) -> LoadedTree:
    """Random proper tree with at least one edge of multiplicity two or more."""
    if n < 5:
        raise ValueError("a proper tree with a multi-edge needs n >= 5")
    while True:
        t = random_proper_tree(rng, n, nv=rng.randint(2, n - 3))
        if any(m >= 2 for m in t.multiplicities):
            return t


def sun_like_tree(weights: Sequence[int]) -> LoadedTree:
    """Center with ``k - r + 3`` labels and ``r`` two-label leaves on edges of multiplicity ``w_i + 1``."""
    r, k = len(weights), sum(weights)
    if any(w < 1 for w in weights):
        raise ValueError("sun-like edge weights must be positive")
    center = k - r + 3
    n = center + 2 * r
    labels = [list(range(1, center + 1))]
    for i in range(r):
        labels.append([center + 2 * i + 1, center + 2 * i + 2])
    edges = [(0, i + 1) for i in range(r)]
    return LoadedTree(LabelSet.standard(n), labels, edges, [w + 1 for w in weights])


def caterpillar_monomial(n: int) -> Monomial:
    """Clever monomial ``prod_{i=2}^{n-2} d{1..i | i+1..n}``."""
    ls = LabelSet.standard(n)
    return Monomial(ls, [(Cut(ls, (1 << i) - 1), 1) for i in range(2, n - 1)])


def caterpillar_tree(n: int) -> LoadedTree:
    """Path of ``n - 2`` vertices; the ends carry two labels, inner vertices one."""
    if n == 3:
        return LoadedTree(LabelSet.standard(3), [[1, 2, 3]], [], [])
    nv = n - 2
    labels = [[1, 2]] + [[i + 2] for i in range(1, nv - 1)] + [[n - 1, n]]
    return LoadedTree(LabelSet.standard(n), labels, [(i, i + 1) for i in range(nv - 1)], [1] * (nv - 1))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Positive compositions of ``total`` into ``parts`` summands."""
    for bars in combinations(range(1, total), parts - 1):
        yield tuple(b - a for a, b in zip((0, *bars), (*bars, total)))


def all_proper_tree_monomials(n: int) -> Iterator[Monomial]:
    """Every tree monomial of degree ``n - 3`` over ``{1..n}``, each exactly once."""
    ls = LabelSet.standard(n)
    full = ls.full
    cuts = sorted(Cut(ls, m) for m in range(1, full, 2) if 2 <= m.bit_count() <= n - 2)
    masks = [c.mask for c in cuts]
    d_max = n - 3
    if d_max == 0:
        yield Monomial.empty(ls)
        return

    def compatible(a: int, b: int) -> bool:
        return not (a & ~b and b & ~a and (a | b) != full)

    def rec(start: int, chosen: list[int]) -> Iterator[list[int]]:
        if chosen:
            yield chosen
        if len(chosen) == d_max:
            return
        for i in range(start, len(cuts)):
            if all(compatible(masks[i], masks[j]) for j in chosen):
                chosen.append(i)
                yield from rec(i + 1, chosen)
                chosen.pop()

    for chosen in rec(0, []):
        for exps in _compositions(d_max, len(chosen)):
            yield Monomial(ls, [(cuts[i], e) for i, e in zip(chosen, exps)])


def random_forest(rng: random.Random, max_nodes: int = 12, max_weight: int = 5) -> RedundancyForest:
    """Random vertex-weighted forest with weights in ``1..max_weight``."""
    nv = rng.randint(0, max_nodes)
    edges = []
    for v in range(1, nv):
        if rng.random() < 0.8:
            edges.append((rng.randrange(v), v))
    weights = tuple(rng.randint(1, max_weight) for _ in range(nv))
    return RedundancyForest(weights, tuple(edges))
