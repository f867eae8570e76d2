"""Keel's linear relation as an independent evaluator, plus the tree-side
operations (vertex splitting, edge cutting, star-cuts) used to check the
forest algorithm.

The oracle never looks at redundancy forests: it rewrites a monomial with the
linear relation until only clever monomials (value 1) remain.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapExceeded,
    DuplicateLabels,
    ExponentTooLow,
    ImproperQuadruple,
    InvalidChoice,
    LabelError,
    MismatchedLabelSets,
    NotATreeMonomial,
    NotMultiEdge,
    NotSingleEdge,
    TooSmall,
)
from .keel import Cut, LabelSet, Monomial, find_quadratic_pair, is_tree_monomial
from .loaded_tree import LoadedTree, tree_to_monomial

__all__ = [
    "SignedSum",
    "Quadruple",
    "SplitChoice",
    "EdgeCutResult",
    "DEFAULT_ORACLE_CAP",
    "epsilon_sum",
    "proper_quadruples",
    "is_proper_quadruple",
    "linear_reduction_step",
    "reduce_to_clever",
    "oracle_value",
    "split_choices",
    "vertex_split",
    "tree_reduction",
    "cut_single_edge",
    "cut_multi_edge",
    "cut_edge",
    "is_balanced",
    "find_star_cut",
]

DEFAULT_ORACLE_CAP = 9


class SignedSum:
    """Integer combination of monomials over one label set; zero terms are dropped."""

    __slots__ = ("label_set", "_terms")

    def __init__(self, label_set: LabelSet, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        self.label_set = label_set
        acc: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            if m.label_set != label_set:
                raise MismatchedLabelSets(f"{m!r} is not over {label_set}")
            acc[m] = acc.get(m, 0) + c
        self._terms = {m: c for m, c in acc.items() if c}

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        return iter(sorted(self._terms.items()))

    def support(self) -> frozenset[Monomial]:
        return frozenset(self._terms)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def total(self) -> int:
        """Sum of coefficients, i.e. the value when every term is clever."""
        return sum(self._terms.values())

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __neg__(self) -> SignedSum:
        return SignedSum(self.label_set, {m: -c for m, c in self._terms.items()})

    def __add__(self, other: SignedSum) -> SignedSum:
        return SignedSum(self.label_set, [*self._terms.items(), *other._terms.items()])

    def scaled(self, c: int) -> SignedSum:
        return SignedSum(self.label_set, {m: c * v for m, v in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedSum):
            return NotImplemented
        return self.label_set == other.label_set and self._terms == other._terms

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.items():
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            out.append(f"{sign} {mag}{m.compact()}")
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self) -> str:
        return f"SignedSum({self})"


@dataclass(frozen=True)
class Quadruple:
    """Labels ``i, j | k, l`` of Keel's linear relation ``eps_{ij|kl}``."""

    i: int
    j: int
    k: int
    l: int

    def __post_init__(self):
        if len({self.i, self.j, self.k, self.l}) != 4:
            raise DuplicateLabels(f"quadruple labels must be distinct: {self.as_tuple()}")

    @classmethod
    def coerce(cls, q: Quadruple | Iterable[int]) -> Quadruple:
        return q if isinstance(q, Quadruple) else cls(*q)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.i, self.j, self.k, self.l)

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(self.as_tuple())

    def __str__(self) -> str:
        return f"({self.i},{self.j}|{self.k},{self.l})"


def _check_cap(n: int, cap: int | None) -> int:
    if cap is None:
        cap = int(os.environ.get("CHOWDEG_ORACLE_CAP", DEFAULT_ORACLE_CAP))
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the oracle cap {cap}")
    return cap


# -- algebraic side ------------------------------------------------------------

def epsilon_sum(label_set: LabelSet, q: Quadruple | Iterable[int]) -> SignedSum:
    """``eps_{ij|kl}``: every cut with ``i, j`` on one side and ``k, l`` on the other."""
    q = Quadruple.coerce(q)
    for x in q.as_tuple():
        if x not in label_set:
            raise LabelError(f"label {x} is not in {label_set}")
    base = label_set.mask((q.i, q.j))
    fixed = base | label_set.mask((q.k, q.l))
    rest = [1 << b for b in range(label_set.n) if not fixed >> b & 1]
    terms = []
    for r in range(len(rest) + 1):
        for sub in combinations(rest, r):
            terms.append((Monomial(label_set, [(Cut(label_set, base | sum(sub)), 1)]), 1))
    return SignedSum(label_set, terms)


def _inner_parts(m: Monomial, cut: Cut) -> tuple[list[int], list[int]]:
    """Factor parts strictly inside ``I`` and strictly inside ``J`` of ``cut``."""
    full = m.label_set.full
    I, J = cut.mask, cut.complement_mask
    in_i, in_j = [], []
    for c, _ in m.factors:
        if c == cut:
            continue
        for p in (c.mask, full ^ c.mask):
            if p & ~I == 0:
                in_i.append(p)
            elif p & ~J == 0:
                in_j.append(p)
    return in_i, in_j


def _separated(pair: int, parts: list[int]) -> bool:
    # two labels lie in distinct clusters iff no smaller part holds both
    return all(p & pair != pair for p in parts)


def _orient(m: Monomial, cut: Cut, q: Quadruple) -> tuple[int, int]:
    """Masks of the ``I``-side and ``J``-side pairs of ``q``; raise if ``q`` is not proper."""
    ls = m.label_set
    for x in q.as_tuple():
        if x not in ls:
            raise ImproperQuadruple(f"label {x} of {q} is not in {ls}")
    p1, p2 = ls.mask((q.i, q.j)), ls.mask((q.k, q.l))
    I, J = cut.mask, cut.complement_mask
    if p1 & ~I == 0 and p2 & ~J == 0:
        pi, pj = p1, p2
    elif p1 & ~J == 0 and p2 & ~I == 0:
        pi, pj = p2, p1
    else:
        raise ImproperQuadruple(f"{q} does not split as two labels on each side of {cut.render()}")
    in_i, in_j = _inner_parts(m, cut)
    if not (_separated(pi, in_i) and _separated(pj, in_j)):
        raise ImproperQuadruple(f"{q} has two labels in one cluster at an endpoint of {cut.render()}")
    return pi, pj


def _proper_pairs(ls: LabelSet, side: int, parts: list[int]) -> list[tuple[int, int]]:
    labs = ls.unmask(side)
    out = []
    for a, b in combinations(labs, 2):
        if _separated(ls.mask((a, b)), parts):
            out.append((a, b))
    return out


def _algebraic_proper_quadruples(m: Monomial, cut: Cut) -> list[Quadruple]:
    ls = m.label_set
    in_i, in_j = _inner_parts(m, cut)
    left = _proper_pairs(ls, cut.mask, in_i)
    right = _proper_pairs(ls, cut.complement_mask, in_j)
    return [Quadruple(i, j, k, l) for i, j in left for k, l in right]


def linear_reduction_step(m: Monomial, cut: Cut, q: Quadruple | Iterable[int]) -> SignedSum:
    """Rewrite one copy of ``cut`` with ``eps_{ij|kl} = eps_{ik|jl}`` and drop zero terms.

    Every surviving term has coefficient ``-1``.
    """
    q = Quadruple.coerce(q)
    if cut.label_set != m.label_set:
        raise MismatchedLabelSets(f"{cut!r} is not a cut of {m.label_set}")
    if m.exponent(cut) < 2:
        raise ExponentTooLow(f"{cut.render()} has exponent {m.exponent(cut)} in {m.compact()}")
    if not is_tree_monomial(m):
        raise NotATreeMonomial(f"{m.compact()} is not a tree monomial")
    pi, pj = _orient(m, cut, q)
    ls = m.label_set
    full = ls.full
    reduced = m.times(cut, -1)
    masks = [c.mask for c in m.cuts]
    rest = [1 << b for b in range(ls.n) if not (pi | pj) >> b & 1]
    out = []
    for r in range(len(rest) + 1):
        for sub in combinations(rest, r):
            a = pi | sum(sub)
            c = Cut(ls, a)
            if c == cut:
                continue
            a = c.mask
            if any(a & ~b and b & ~a and (a | b) != full for b in masks):
                continue
            out.append((reduced.times(c), -1))
    return SignedSum(ls, out)


def _choose(m: Monomial, rng: random.Random | None) -> tuple[Cut, Quadruple]:
    multi = [c for c, e in m.factors if e >= 2]
    cut = multi[0] if rng is None else rng.choice(multi)
    quads = _algebraic_proper_quadruples(m, cut)
    if not quads:  # pragma: no cover - a proper quadruple always exists
        raise ImproperQuadruple(f"no proper quadruple for {cut.render()} in {m.compact()}")
    return cut, (quads[0] if rng is None else rng.choice(quads))


def reduce_to_clever(
    m: Monomial,
    cap: int | None = None,
    filter_balanced: bool = False,
    rng: random.Random | None = None,
) -> SignedSum:
    """Signed sum of clever monomials equal to ``m`` (breadth first, merging each level).

    Returns the zero sum for monomials that are not proper tree monomials.
    ``rng`` randomizes the choice of cut and quadruple at every step.
    """
    _check_cap(m.n, cap)
    ls = m.label_set
    if not m.is_proper or find_quadratic_pair(m) is not None:
        return SignedSum(ls)
    done: dict[Monomial, int] = {}
    level: dict[Monomial, int] = {m: 1}
    while level:
        nxt: dict[Monomial, int] = {}
        for mono, coeff in level.items():
            if all(e == 1 for _, e in mono.factors):
                done[mono] = done.get(mono, 0) + coeff
                continue
            cut, q = _choose(mono, rng)
            for term, c in linear_reduction_step(mono, cut, q).items():
                if filter_balanced and not is_balanced(_tree(term)):
                    continue
                nxt[term] = nxt.get(term, 0) + coeff * c
        level = {k: v for k, v in nxt.items() if v}
    return SignedSum(ls, done)


def oracle_value(
    m: Monomial,
    cap: int | None = None,
    filter_balanced: bool = False,
    rng: random.Random | None = None,
) -> int:
    """Integral value of ``m`` by linear reduction alone.

    ``cap`` defaults to ``$CHOWDEG_ORACLE_CAP`` or 9; larger ``n`` raises
    :class:`CapExceeded`.
    """
    return reduce_to_clever(m, cap, filter_balanced, rng).total()


def _tree(m: Monomial) -> LoadedTree:
    from .loaded_tree import monomial_to_tree

    return monomial_to_tree(m, check=False)


# -- tree side -----------------------------------------------------------------

def _edge_index(t: LoadedTree, e: int | Cut) -> int:
    if isinstance(e, Cut):
        return t.edge_of_cut(e)
    if not 0 <= e < len(t.edges):
        raise IndexError(f"edge {e} out of range")
    return e


def _proper_pairs_at(t: LoadedTree, ei: int, v: int) -> list[tuple[int, int]]:
    """Label pairs on ``v``'s side of edge ``ei`` that lie in distinct clusters of ``v``."""
    owner: dict[int, int] = {}
    for x in t.vertex_labels[v]:
        owner[x] = -1 - x
    for y, i in t.adjacency[v]:
        if i == ei:
            continue
        for x in t.label_set.unmask(t.side_mask(i, y)):
            owner[x] = y
    labs = sorted(owner)
    return [(a, b) for a, b in combinations(labs, 2) if owner[a] != owner[b]]


def proper_quadruples(t: LoadedTree, e: int | Cut) -> list[Quadruple]:
    """All proper quadruples for edge ``e``, the first pair on the side holding ``min(N)``."""
    ei = _edge_index(t, e)
    cut = t.edge_cuts[ei]
    u, v = t.edges[ei]
    v1, v2 = (u, v) if t.side_mask(ei, u) == cut.mask else (v, u)
    left = _proper_pairs_at(t, ei, v1)
    right = _proper_pairs_at(t, ei, v2)
    return [Quadruple(i, j, k, l) for i, j in left for k, l in right]


def is_proper_quadruple(t: LoadedTree, e: int | Cut, q: Quadruple | Iterable[int]) -> bool:
    q = Quadruple.coerce(q)
    ei = _edge_index(t, e)
    try:
        _orient(tree_to_monomial(t), t.edge_cuts[ei], q)
    except ImproperQuadruple:
        return False
    return True


@dataclass(frozen=True)
class SplitChoice:
    """How to split endpoint ``vertex`` of the reduced edge.

    ``prime_labels`` go to ``v'``; the rest of ``h(vertex)`` goes to ``v''``.
    ``prime_branches`` lists the neighbours whose branches hang off ``v'``;
    every other branch (always including the reduced edge's) hangs off ``v''``.
    """

    vertex: int
    prime_labels: frozenset[int]
    prime_branches: frozenset[int]


def _split_context(t: LoadedTree, ei: int, v: int, q: Quadruple) -> tuple[int, set[int], set[int], list[int], list[int]]:
    """Forced and free labels/branches when splitting endpoint ``v`` of edge ``ei``."""
    other = t.edges[ei][0] if t.edges[ei][1] == v else t.edges[ei][1]
    side = t.side_mask(ei, v)
    ls = t.label_set
    q_side = {x for x in q.as_tuple() if side >> ls.index(x) & 1}
    forced_labels = q_side & set(t.vertex_labels[v])
    forced_branches = set()
    free_branches = []
    for y, i in t.adjacency[v]:
        if i == ei:
            continue
        bmask = t.side_mask(i, y)
        if any(bmask >> ls.index(x) & 1 for x in q_side):
            forced_branches.add(y)
        else:
            free_branches.append(y)
    free_labels = [x for x in t.vertex_labels[v] if x not in forced_labels]
    return other, forced_labels, forced_branches, free_labels, free_branches


def _checked_edge(t: LoadedTree, e: int | Cut, q: Quadruple | Iterable[int]) -> tuple[int, Quadruple]:
    q = Quadruple.coerce(q)
    ei = _edge_index(t, e)
    if t.multiplicities[ei] < 2:
        raise NotMultiEdge(f"edge {ei} has multiplicity {t.multiplicities[ei]}")
    if not is_proper_quadruple(t, ei, q):
        raise ImproperQuadruple(f"{q} is not proper for edge {ei}")
    return ei, q


def _build_split(t: LoadedTree, ei: int, choice: SplitChoice) -> LoadedTree:
    v = choice.vertex
    new = len(t.vertex_labels)
    labels = [list(h) for h in t.vertex_labels]
    labels[v] = sorted(choice.prime_labels)
    labels.append(sorted(set(t.vertex_labels[v]) - choice.prime_labels))
    edges, mults = [], []
    for i, ((a, b), m) in enumerate(zip(t.edges, t.multiplicities)):
        if v in (a, b):
            y = b if a == v else a
            end = v if y in choice.prime_branches else new
            edges.append((end, y))
            mults.append(m - 1 if i == ei else m)
        else:
            edges.append((a, b))
            mults.append(m)
    edges.append((v, new))
    mults.append(1)
    return LoadedTree(t.label_set, labels, edges, mults)


def split_choices(t: LoadedTree, e: int | Cut, q: Quadruple | Iterable[int], vertex: int) -> list[SplitChoice]:
    """Every admissible configuration for splitting ``vertex`` (possibly none)."""
    ei, q = _checked_edge(t, e, q)
    if vertex not in t.edges[ei]:
        raise InvalidChoice(f"vertex {vertex} is not an endpoint of edge {ei}")
    if t.vertex_weight(vertex) == 0:
        return []
    _, forced_l, forced_b, free_l, free_b = _split_context(t, ei, vertex, q)
    out = []
    for rl in range(len(free_l) + 1):
        for ls_ in combinations(free_l, rl):
            prime_labels = frozenset(forced_l | set(ls_))
            double_labels = len(t.vertex_labels[vertex]) - len(prime_labels)
            for rb in range(len(free_b) + 1):
                for bs in combinations(free_b, rb):
                    # v'' keeps the reduced edge, the new edge and the free branches not sent to v'
                    if 2 + (len(free_b) - rb) + double_labels < 3:
                        continue
                    out.append(SplitChoice(vertex, prime_labels, frozenset(forced_b | set(bs))))
    return out


def vertex_split(t: LoadedTree, e: int | Cut, q: Quadruple | Iterable[int], choice: SplitChoice) -> LoadedTree | None:
    """Split one endpoint of multi-edge ``e``; ``None`` when both endpoints have weight zero."""
    ei, q = _checked_edge(t, e, q)
    u, v = t.edges[ei]
    if t.vertex_weight(u) == 0 and t.vertex_weight(v) == 0:
        return None
    x = choice.vertex
    if x not in (u, v):
        raise InvalidChoice(f"vertex {x} is not an endpoint of edge {ei}")
    if t.vertex_weight(x) == 0:
        raise InvalidChoice(f"vertex {x} has weight zero and cannot be split")
    other, forced_l, forced_b, free_l, free_b = _split_context(t, ei, x, q)
    if not choice.prime_labels <= set(t.vertex_labels[x]):
        raise InvalidChoice(f"{sorted(choice.prime_labels)} are not all labels of vertex {x}")
    if not forced_l <= choice.prime_labels:
        raise InvalidChoice(f"labels {sorted(forced_l)} of the quadruple must stay on v'")
    if not forced_b <= choice.prime_branches:
        raise InvalidChoice("branches holding quadruple labels must hang off v'")
    if other in choice.prime_branches:
        raise InvalidChoice("the reduced edge's branch must hang off v''")
    if not choice.prime_branches <= forced_b | set(free_b):
        raise InvalidChoice(f"{sorted(choice.prime_branches)} are not all neighbours of vertex {x}")
    tree = _build_split(t, ei, choice)  # validates deg + |h| >= 3 at v' and v''
    return tree


def tree_reduction(t: LoadedTree, e: int | Cut, q: Quadruple | Iterable[int], filter_balanced: bool = False) -> set[LoadedTree]:
    """All trees from splitting either nonzero-weight endpoint of ``e`` in every admissible way."""
    ei, q = _checked_edge(t, e, q)
    out: set[LoadedTree] = set()
    for x in t.edges[ei]:
        for choice in split_choices(t, ei, q, x):
            tree = _build_split(t, ei, choice)
            if filter_balanced:
                new_edge = len(tree.edges) - 1
                if not is_balanced(tree, new_edge):
                    continue
            out.add(tree)
    return out


# -- edge cutting --------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCutResult:
    """Cut remainders of one edge; ``left`` holds the endpoint listed first in the tree.

    ``left``/``right`` are ``None`` when the multi-edge construction asks for a
    nonpositive multiplicity; the coefficient is then 0.
    """

    left: LoadedTree | None
    right: LoadedTree | None
    fresh_labels: tuple[int, int]
    coefficient: int

    def predicted(self, value) -> int:
        """``coefficient * value(left) * value(right)`` for an evaluator ``value``."""
        if self.coefficient == 0:
            return 0
        return self.coefficient * value(self.left) * value(self.right)


def _component(t: LoadedTree, ei: int, root: int, extra_labels: Iterable[int], leaf: tuple[tuple[int, ...], int] | None) -> LoadedTree:
    verts = t.side_vertices(ei, root)
    idx = {v: i for i, v in enumerate(verts)}
    labels = [list(t.vertex_labels[v]) for v in verts]
    labels[0].extend(extra_labels)
    edges, mults = [], []
    for i, ((a, b), m) in enumerate(zip(t.edges, t.multiplicities)):
        if i != ei and a in idx and b in idx:
            edges.append((idx[a], idx[b]))
            mults.append(m)
    if leaf is not None:
        leaf_labels, mult = leaf
        labels.append(list(leaf_labels))
        edges.append((0, len(labels) - 1))
        mults.append(mult)
    ls = LabelSet(x for h in labels for x in h)
    return LoadedTree(ls, labels, edges, mults)


def _fringes_on_side(t: LoadedTree, ei: int, root: int) -> int:
    verts = set(t.side_vertices(ei, root))
    return sum(m for i, ((a, b), m) in enumerate(zip(t.edges, t.multiplicities)) if i != ei and a in verts)


def cut_single_edge(t: LoadedTree, e: int | Cut) -> EdgeCutResult:
    """Remove single edge ``{u, v}``; ``u`` gains label ``max(N)+1`` and ``v`` gains ``max(N)+2``."""
    ei = _edge_index(t, e)
    if t.multiplicities[ei] != 1:
        raise NotSingleEdge(f"edge {ei} has multiplicity {t.multiplicities[ei]}")
    u, v = t.edges[ei]
    x, y = t.label_set.labels[-1] + 1, t.label_set.labels[-1] + 2
    return EdgeCutResult(_component(t, ei, u, [x], None), _component(t, ei, v, [y], None), (x, y), 1)


def cut_multi_edge(t: LoadedTree, e: int | Cut) -> EdgeCutResult:
    """Remove a multi-edge and hang a fresh leaf ``{a, b}`` off each endpoint."""
    ei = _edge_index(t, e)
    r = t.multiplicities[ei]
    if r < 2:
        raise NotMultiEdge(f"edge {ei} has multiplicity {r}")
    u, v = t.edges[ei]
    a, b = t.label_set.labels[-1] + 1, t.label_set.labels[-1] + 2
    trees = []
    sizes = []
    for end in (u, v):
        size = t.side_mask(ei, end).bit_count()
        s = _fringes_on_side(t, ei, end)
        sizes.append((size, s))
        mult = size - s - 1
        trees.append(_component(t, ei, end, [], ((a, b), mult)) if mult >= 1 else None)
    size1, s1 = sizes[0]
    low = size1 - s1 - 2
    coeff = comb(r - 1, low) if low >= 0 else 0
    if trees[0] is None or trees[1] is None:
        coeff = 0
    return EdgeCutResult(trees[0], trees[1], (a, b), coeff)


def cut_edge(t: LoadedTree, e: int | Cut) -> EdgeCutResult:
    ei = _edge_index(t, e)
    return cut_single_edge(t, ei) if t.multiplicities[ei] == 1 else cut_multi_edge(t, ei)


def is_balanced(t: LoadedTree, e: int | Cut | None = None) -> bool:
    """Both single-edge cut remainders are proper (for ``e``, or for every single edge)."""
    edges = range(len(t.edges)) if e is None else [_edge_index(t, e)]
    for i in edges:
        if t.multiplicities[i] != 1:
            continue
        res = cut_single_edge(t, i)
        if not (res.left.is_proper and res.right.is_proper):
            return False
    return True


def find_star_cut(t: LoadedTree | Iterable[tuple[int, int]]) -> int:
    """Index of an edge whose removal leaves a star on at least one side.

    Accepts a loaded tree or a plain edge list on vertices ``0..V-1``.
    """
    edges = list(t.edges) if isinstance(t, LoadedTree) else [tuple(e) for e in t]
    nv = len(edges) + 1
    if nv < 3:
        raise TooSmall(f"a star-cut needs at least 3 vertices, got {nv}")
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    if any(len(a) == nv - 1 for a in adj):
        return 0
    leaves = {v for v in range(nv) if len(adj[v]) == 1}
    for u in range(nv):
        if u in leaves:
            continue
        inner = [(y, i) for y, i in adj[u] if y not in leaves]
        if len(inner) == 1:
            return inner[0][1]
    raise AssertionError("pruned tree has no leaf")  # pragma: no cover

