"""Brute-force checks of the multinomial identities behind the sun-like formula.

Notation: ``m = (m_1, ..., m_r)`` positive, ``s = sum(m)``, indeterminates
``x_1..x_r`` are represented by their indices ``1..r``.  ``g(x_1) = m_1 - 1``
and ``g(x_i) = m_i`` otherwise; ``S(B)`` sums ``g`` over ``B`` and
``bracket(B) = S(B)! / prod g(x)!``.

A configuration ``(P_1, ..., P_r)`` partitions ``{1..s}`` with ``|P_i| = m_i``.
It is stored as an owner tuple: ``owner[y - 1]`` is the part holding ``y``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import factorial, prod
from operator import itemgetter
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, VariantPreconditionViolated

__all__ = [
    "IdentityInstance",
    "PartitionConfig",
    "IdentityResult",
    "binom",
    "multinomial",
    "configurations",
    "phi",
    "phi_owner",
    "phi_preimage",
    "fiber_counts",
    "fiber_formula",
    "count_fiber",
    "f_formula",
    "check_identity",
    "identity_sides",
    "pascal_multinomial",
    "DEFAULT_FIBER_CAP",
]

DEFAULT_FIBER_CAP = 10


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def multinomial(n: int, parts: Sequence[int]) -> int:
    """``n! / prod(p!)``; zero when a part is negative or the parts do not sum to ``n``."""
    if any(p < 0 for p in parts) or sum(parts) != n:
        return 0
    return factorial(n) // prod(factorial(p) for p in parts)


@dataclass(frozen=True)
class IdentityInstance:
    m: tuple[int, ...]

    def __init__(self, m: Iterable[int]):
        m = tuple(m)
        if not m:
            raise ValueError("an identity instance needs r >= 1 parts")
        if any(not isinstance(x, int) or x < 1 for x in m):
            raise ValueError(f"all m_i must be positive integers, got {m}")
        object.__setattr__(self, "m", m)

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def s(self) -> int:
        return sum(self.m)

    def g(self, i: int) -> int:
        return self.m[0] - 1 if i == 1 else self.m[i - 1]

    def S(self, B: Iterable[int]) -> int:
        return sum(self.g(i) for i in B)

    def bracket(self, B: Iterable[int]) -> int:
        B = list(B)
        return multinomial(self.S(B), [self.g(i) for i in B])

    @cached_property
    def multinomial(self) -> int:
        return multinomial(self.s, self.m)

    def subsets_with_x1(self) -> Iterator[tuple[frozenset[int], frozenset[int]]]:
        """Every bipartition ``(B1, B2)`` of ``{1..r}`` with ``1 in B1``."""
        rest = range(2, self.r + 1)
        for k in range(self.r):
            for extra in combinations(rest, k):
                b1 = frozenset((1, *extra))
                yield b1, frozenset(range(1, self.r + 1)) - b1


@dataclass(frozen=True)
class PartitionConfig:
    """Ordered partition ``(P_1, ..., P_r)`` of ``{1..s}``."""

    parts: tuple[frozenset[int], ...]

    def __init__(self, parts: Iterable[Iterable[int]]):
        parts = tuple(frozenset(p) for p in parts)
        union = set().union(*parts)
        if sum(len(p) for p in parts) != len(union) or union != set(range(1, len(union) + 1)):
            raise ValueError(f"parts must partition {{1..s}}: {[sorted(p) for p in parts]}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_owner(cls, owner: Sequence[int], r: int) -> PartitionConfig:
        return cls([{y + 1 for y, o in enumerate(owner) if o == i} for i in range(1, r + 1)])

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def owner(self) -> tuple[int, ...]:
        s = sum(self.sizes)
        own = [0] * s
        for i, p in enumerate(self.parts, 1):
            for y in p:
                own[y - 1] = i
        return tuple(own)


def _multiset_permutations(counts: list[int]) -> Iterator[tuple[int, ...]]:
    """Distinct sequences using value ``i + 1`` exactly ``counts[i]`` times, lexicographically."""
    total = sum(counts)
    seq = [0] * total

    def rec(pos: int) -> Iterator[tuple[int, ...]]:
        if pos == total:
            yield tuple(seq)
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                seq[pos] = i + 1
                yield from rec(pos + 1)
                counts[i] += 1

    yield from rec(0)


def configurations(inst: IdentityInstance, cap: int | None = DEFAULT_FIBER_CAP) -> Iterator[tuple[int, ...]]:
    """All configurations of ``inst`` as owner tuples."""
    if cap is not None and inst.s > cap:
        raise CapExceeded(f"s = {inst.s} exceeds the enumeration cap {cap}")
    return _multiset_permutations(list(inst.m))


def phi_owner(owner: Sequence[int], r: int) -> frozenset[int]:
    """The while loop of phi on an owner tuple; returns the indices in ``B``."""
    # specials[i] = L_r ∩ P_i, so L_r ∩ P_A is the union over A
    specials: list[list[int]] = [[] for _ in range(r + 1)]
    for y in range(2, r + 1):
        specials[owner[y - 1]].append(y)
    B = {1}
    A = specials[1]
    steps = 0
    while A:
        B.update(A)
        A = [y for a in A for y in specials[a]]
        steps += 1
        if steps > r:  # pragma: no cover - the A_i are pairwise disjoint
            raise AssertionError("phi did not terminate")
    return frozenset(B)


def phi(config: PartitionConfig) -> frozenset[int]:
    """``B`` as the set of indices ``i`` with ``x_i`` in ``B``; always contains 1."""
    return phi_owner(config.owner(), config.r)


def phi_preimage(inst: IdentityInstance, B: Iterable[int]) -> PartitionConfig:
    """A configuration of the right sizes with ``phi = B``.

    Specials of ``B`` are chained from ``P_1``; every other special ``i`` sits
    in its own part ``P_i``; non-special elements fill the remaining room.
    """
    B = set(B)
    r = inst.r
    if 1 not in B or not B <= set(range(1, r + 1)):
        raise ValueError(f"B must contain 1 and lie in 1..{r}: {sorted(B)}")
    parts: list[set[int]] = [set() for _ in range(r)]
    chain = sorted(B - {1})
    holder = 1
    for q in chain:
        parts[holder - 1].add(q)
        holder = q
    for i in range(2, r + 1):
        if i not in B:
            parts[i - 1].add(i)
    free = [1, *range(r + 1, inst.s + 1)]
    for i in range(r):
        while len(parts[i]) < inst.m[i]:
            parts[i].add(free.pop())
    return PartitionConfig(parts)


def fiber_counts(inst: IdentityInstance, cap: int | None = DEFAULT_FIBER_CAP) -> Counter:
    """``|phi^{-1}(B)|`` for every ``B`` by exhaustive enumeration."""
    r = inst.r
    # phi only reads which parts hold the specials 2..r, so tally those first
    by_specials = Counter(map(itemgetter(slice(1, r)), configurations(inst, cap)))
    out: Counter = Counter()
    for sp, c in by_specials.items():
        out[phi_owner((0, *sp), r)] += c
    return out


def fiber_formula(inst: IdentityInstance, B1: Iterable[int]) -> int:
    """Closed form ``C(s-r+1, S(B2)-|B2|) * bracket(B1) * bracket(B2)``."""
    B1 = frozenset(B1)
    B2 = frozenset(range(1, inst.r + 1)) - B1
    return binom(inst.s - inst.r + 1, inst.S(B2) - len(B2)) * inst.bracket(B1) * inst.bracket(B2)


def count_fiber(inst: IdentityInstance, cap: int | None = DEFAULT_FIBER_CAP) -> int:
    """``f_k(m)``: configurations mapped onto all of ``X``."""
    return fiber_counts(inst, cap)[frozenset(range(1, inst.r + 1))]


def f_formula(inst: IdentityInstance) -> int:
    return multinomial(inst.s - 1, [inst.m[0] - 1, *inst.m[1:]])


@dataclass(frozen=True)
class IdentityResult:
    variant: int
    m: tuple[int, ...]
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def __bool__(self) -> bool:
        return self.holds


_MIN_R = {1: 1, 2: 2, 3: 3}


def identity_sides(variant: int, inst: IdentityInstance) -> tuple[int, int]:
    """``(C(s; m), sum over the variant's bipartitions)``."""
    if variant not in _MIN_R:
        raise ValueError(f"variant must be 1, 2 or 3, got {variant}")
    if inst.r < _MIN_R[variant]:
        raise VariantPreconditionViolated(f"variant {variant} needs r >= {_MIN_R[variant]}, got r = {inst.r}")
    forced = {1: (), 2: (2,), 3: (2, 3)}[variant]
    shift = variant - 1
    rhs = 0
    for B1, B2 in inst.subsets_with_x1():
        if not all(x in B2 for x in forced):
            continue
        rhs += (
            binom(inst.s - inst.r + 1 + shift, inst.S(B2) - len(B2) + shift)
            * inst.bracket(B1)
            * inst.bracket(B2)
        )
    return inst.multinomial, rhs


def check_identity(variant: int, inst: IdentityInstance | Sequence[int]) -> IdentityResult:
    if not isinstance(inst, IdentityInstance):
        inst = IdentityInstance(inst)
    lhs, rhs = identity_sides(variant, inst)
    return IdentityResult(variant, inst.m, lhs, rhs)


def pascal_multinomial(s: int, m: Sequence[int]) -> IdentityResult:
    """``C(s; m) = sum_i C(s-1; m with m_i - 1)``; needs at least two parts."""
    m = tuple(m)
    if len(m) < 2:
        raise VariantPreconditionViolated(f"the recurrence needs k >= 2 parts, got {m}")
    if s < 1 or sum(m) != s or any(x < 0 for x in m):
        raise ValueError(f"parts {m} must be nonnegative and sum to s = {s} >= 1")
    rhs = sum(multinomial(s - 1, [x - (j == i) for j, x in enumerate(m)]) for i in range(len(m)))
    return IdentityResult(0, m, multinomial(s, m), rhs)
