"""Label sets, cuts and monomials in Keel's boundary generators.

A cut ``{I, J}`` of a label set ``N`` is stored as a bit mask over the dense
index of ``N`` (bit ``i`` stands for the ``i``-th smallest label).  The stored
mask is always the part containing ``min(N)``, so equal cuts have equal masks
and every pairwise test reduces to a handful of integer operations.
"""

from __future__ import annotations

import re
from operator import itemgetter, or_
from functools import reduce
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import InvalidCut, LabelError, MismatchedLabelSets, ParseError

__all__ = [
    "LabelSet",
    "Cut",
    "Monomial",
    "parse_monomial",
    "render_monomial",
    "fulfills_quadratic_relation",
    "find_quadratic_pair",
    "is_tree_monomial",
    "is_clever",
]


class LabelSet:
    """An immutable set of positive integer labels with a dense bit index."""

    __slots__ = ("labels", "full", "_index", "_hash")

    def __init__(self, labels: Iterable[int]):
        labs = sorted(set(labels))
        if len(labs) < 3:
            raise LabelError(f"a label set needs at least 3 labels, got {labs}")
        for x in labs:
            if not isinstance(x, int) or isinstance(x, bool) or x < 1:
                raise LabelError(f"labels must be positive integers, got {x!r}")
        self.labels: tuple[int, ...] = tuple(labs)
        self.full: int = (1 << len(labs)) - 1
        self._index = {x: i for i, x in enumerate(labs)}
        self._hash = hash(self.labels)

    @classmethod
    def standard(cls, n: int) -> LabelSet:
        """The default label set ``{1, ..., n}``."""
        return cls(range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def is_standard(self) -> bool:
        return self.labels[0] == 1 and self.labels[-1] == len(self.labels)

    def index(self, label: int) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise LabelError(f"label {label} is not in {self}") from None

    def mask(self, labels: Iterable[int]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def unmask(self, mask: int) -> tuple[int, ...]:
        out = []
        labs = self.labels
        while mask:
            low = mask & -mask
            out.append(labs[low.bit_length() - 1])
            mask ^= low
        return tuple(out)

    def extended(self, *extra: int) -> LabelSet:
        return LabelSet(self.labels + extra)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, LabelSet):
            return NotImplemented
        return self._hash == other._hash and self.labels == other.labels

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.is_standard:
            return f"LabelSet.standard({self.n})"
        return f"LabelSet({list(self.labels)})"


@dataclass(frozen=True)
class Cut:
    """A bipartition of ``label_set`` into two parts of size at least two.

    ``mask`` is the part containing the smallest label; use :meth:`of` to build
    a cut from label collections.
    """

    label_set: LabelSet
    mask: int

    def __post_init__(self):
        full = self.label_set.full
        mask = self.mask
        if mask & ~full or mask == 0 or mask == full:
            raise InvalidCut(f"mask {mask:#x} is not a proper subset of {self.label_set}")
        if not mask & 1:
            mask = full ^ mask
            object.__setattr__(self, "mask", mask)
        if mask.bit_count() < 2 or (full ^ mask).bit_count() < 2:
            raise InvalidCut(
                f"both parts of a cut need two labels: {self.label_set.unmask(mask)} "
                f"| {self.label_set.unmask(full ^ mask)}"
            )

    @classmethod
    def of(cls, label_set: LabelSet, part: Iterable[int], other: Iterable[int] | None = None) -> Cut:
        """Cut with one part ``part``; ``other`` (if given) must be its complement."""
        part = list(part)
        if len(set(part)) != len(part):
            raise InvalidCut(f"repeated label in part {part}")
        mask = label_set.mask(part)
        if other is not None:
            other = list(other)
            if len(set(other)) != len(other):
                raise InvalidCut(f"repeated label in part {other}")
            omask = label_set.mask(other)
            if mask & omask:
                raise InvalidCut(f"parts {sorted(part)} and {sorted(other)} overlap")
            if mask | omask != label_set.full:
                raise InvalidCut(f"parts {sorted(part)} | {sorted(other)} do not cover {label_set}")
        return cls(label_set, mask)

    @property
    def complement_mask(self) -> int:
        return self.label_set.full ^ self.mask

    @cached_property
    def part_i(self) -> tuple[int, ...]:
        return self.label_set.unmask(self.mask)

    @cached_property
    def part_j(self) -> tuple[int, ...]:
        return self.label_set.unmask(self.complement_mask)

    @cached_property
    def sort_key(self) -> tuple:
        # canonical order: smallest label of the second part, then the first part lexicographically
        return (self.part_j[0], self.part_i)

    def side_mask(self, label: int) -> int:
        """Mask of the part containing ``label``."""
        if self.mask >> self.label_set.index(label) & 1:
            return self.mask
        return self.complement_mask

    def separates(self, a: Iterable[int], b: Iterable[int]) -> bool:
        """True iff all of ``a`` lie in one part and all of ``b`` in the other."""
        ma, mb = self.label_set.mask(a), self.label_set.mask(b)
        m, c = self.mask, self.complement_mask
        return (ma & ~m == 0 and mb & ~c == 0) or (ma & ~c == 0 and mb & ~m == 0)

    def __lt__(self, other: Cut) -> bool:
        # same order as sort_key, computed on masks (index order = label order)
        full = self.label_set.full
        a, b = self.mask, other.mask
        ca, cb = full ^ a, full ^ b
        ja, jb = (ca & -ca).bit_length(), (cb & -cb).bit_length()
        if ja != jb:
            return ja < jb
        d = a ^ b
        if not d:
            return False
        low = d & -d
        shift = low.bit_length()
        if a & low:
            return b >> shift != 0
        return a >> shift == 0

    def render(self) -> str:
        return "d{%s|%s}" % (",".join(map(str, self.part_i)), ",".join(map(str, self.part_j)))

    def compact(self) -> str:
        """Abbreviated ``12,345`` notation (only unambiguous for labels below 10)."""
        return "".join(map(str, self.part_i)) + "," + "".join(map(str, self.part_j))

    def __repr__(self) -> str:
        return f"Cut({self.compact()})"


class Monomial:
    """A product of Keel factors over a fixed label set, kept in canonical order."""

    __slots__ = ("label_set", "factors", "degree", "_hash", "_dict")

    def __init__(self, label_set: LabelSet, factors: Mapping[Cut, int] | Iterable[tuple[Cut, int]] = ()):
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: dict[Cut, int] = {}
        for cut, e in items:
            if cut.label_set != label_set:
                raise MismatchedLabelSets(f"{cut!r} is not a cut of {label_set}")
            if not isinstance(e, int) or e < 1:
                raise ValueError(f"exponent of {cut!r} must be a positive integer, got {e!r}")
            merged[cut] = merged.get(cut, 0) + e
        self.label_set = label_set
        self.factors: tuple[tuple[Cut, int], ...] = tuple(sorted(merged.items(), key=itemgetter(0)))
        self.degree = sum(merged.values())
        self._dict = merged
        self._hash = hash((label_set, self.factors))

    @classmethod
    def empty(cls, label_set: LabelSet) -> Monomial:
        return cls(label_set, ())

    @property
    def n(self) -> int:
        return self.label_set.n

    @property
    def cuts(self) -> tuple[Cut, ...]:
        return tuple(c for c, _ in self.factors)

    @property
    def is_empty(self) -> bool:
        return not self.factors

    @property
    def is_proper(self) -> bool:
        """Degree equals ``n - 3``, the only degree with a nonzero value."""
        return self.degree == self.label_set.n - 3

    def exponent(self, cut: Cut) -> int:
        return self._dict.get(cut, 0)

    def as_dict(self) -> dict[Cut, int]:
        return dict(self._dict)

    def times(self, cut: Cut, power: int = 1) -> Monomial:
        """This monomial multiplied by ``cut**power`` (``power`` may be negative)."""
        d = dict(self._dict)
        e = d.get(cut, 0) + power
        if e < 0:
            raise ValueError(f"{cut!r} does not divide {self}")
        if e:
            d[cut] = e
        else:
            d.pop(cut, None)
        return Monomial(self.label_set, d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._hash == other._hash and self.label_set == other.label_set and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Monomial) -> bool:
        return [(c.sort_key, e) for c, e in self.factors] < [(c.sort_key, e) for c, e in other.factors]

    def __str__(self) -> str:
        return render_monomial(self)

    def compact(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"d{c.compact()}" + (f"^{e}" if e > 1 else "") for c, e in self.factors)

    def __repr__(self) -> str:
        return f"Monomial({self.compact()} over {self.label_set!r})"


# -- parsing / rendering -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        else:
            out.append(("sym", m.group(2), m.start(2)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, what: str) -> ParseError:
        tok = self.peek()
        where = f"at column {tok[2] + 1}" if tok else "at end of input"
        return ParseError(f"expected {what} {where} in {self.text!r}")

    def sym(self, s: str) -> None:
        tok = self.peek()
        if tok is None or tok[0] != "sym" or tok[1] != s:
            raise self.fail(repr(s))
        self.i += 1

    def accept(self, s: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == "sym" and tok[1] == s:
            self.i += 1
            return True
        return False

    def uint(self) -> int:
        tok = self.peek()
        if tok is None or tok[0] != "int":
            raise self.fail("an unsigned integer")
        self.i += 1
        return int(tok[1])

    def labels(self) -> list[int]:
        out = [self.uint()]
        while self.accept(","):
            out.append(self.uint())
        return out

    def parse(self) -> tuple[int | None, list[tuple[list[int], list[int], int]] | None]:
        header = None
        if self.accept("n"):
            self.sym("=")
            header = self.uint()
            self.sym(";")
        terms = None
        tok = self.peek()
        if tok is not None and tok[0] == "int" and tok[1] == "1":
            self.i += 1
        else:
            terms = [self.term()]
            while self.accept("*"):
                terms.append(self.term())
        if self.peek() is not None:
            raise self.fail("end of input or '*'")
        return header, terms

    def term(self) -> tuple[list[int], list[int], int]:
        self.sym("d")
        self.sym("{")
        a = self.labels()
        self.sym("|")
        b = self.labels()
        self.sym("}")
        e = 1
        if self.accept("^"):
            e = self.uint()
            if e < 1:
                raise ParseError(f"exponent must be positive in {self.text!r}")
        return a, b, e


_HEADER = re.compile(r"\s*n\s*=\s*(\d+)\s*;")
_TERM = re.compile(
    r"\s*d\s*\{\s*(\d+(?:\s*,\s*\d+)*)\s*\|\s*(\d+(?:\s*,\s*\d+)*)\s*\}(?:\s*\^\s*(\d+))?\s*"
)
_STAR = re.compile(r"\*")


def _fast_parse(text: str) -> tuple[int | None, list | None] | None:
    """Regex scan of well-formed input; ``None`` sends the text to the slow parser."""
    pos = 0
    header = None
    m = _HEADER.match(text)
    if m:
        header = int(m.group(1))
        pos = m.end()
    if text[pos:].strip() == "1":
        return header, None
    terms = []
    end = len(text)
    while True:
        m = _TERM.match(text, pos)
        if not m:
            return None
        e = int(m.group(3)) if m.group(3) is not None else 1
        if e < 1:
            return None
        terms.append((list(map(int, m.group(1).split(","))), list(map(int, m.group(2).split(","))), e))
        pos = m.end()
        if pos == end:
            return header, terms
        if not _STAR.match(text, pos):
            return None
        pos += 1


def _cut_from_parts(label_set: LabelSet, a: list[int], b: list[int]) -> Cut:
    sa, sb = set(a), set(b)
    if len(sa) != len(a) or len(sb) != len(b):
        raise InvalidCut(f"repeated label in d{{{a}|{b}}}")
    if not sa.isdisjoint(sb):
        raise InvalidCut(f"parts {sorted(sa)} and {sorted(sb)} overlap")
    index = label_set._index
    for x in (*a, *b):
        if x not in index:
            raise InvalidCut(f"label {x} is outside {label_set}")
    if len(sa) + len(sb) != label_set.n:
        raise InvalidCut(f"parts {sorted(sa)} | {sorted(sb)} do not cover {label_set}")
    small = a if len(a) <= len(b) else b
    mask = reduce(or_, [1 << index[x] for x in small], 0)
    return Cut(label_set, mask)


def parse_monomial(text: str) -> Monomial:
    """Parse ``[n=<uint>;] (1 | d{..|..}[^e] * ...)`` into a canonical monomial."""
    fast = _fast_parse(text)
    header, terms = fast if fast is not None else _Parser(text).parse()
    if header is not None:
        label_set = LabelSet.standard(header)
    elif terms is None:
        raise ParseError(f"the empty monomial needs an 'n=' header: {text!r}")
    else:
        # every factor must cover N, so the first one already names it
        label_set = LabelSet((*terms[0][0], *terms[0][1]))
    if terms is None:
        return Monomial.empty(label_set)
    return Monomial(label_set, [(_cut_from_parts(label_set, a, b), e) for a, b, e in terms])


def render_monomial(m: Monomial) -> str:
    """Canonical text form; ``parse_monomial(render_monomial(m)) == m``."""
    if m.is_empty:
        if not m.label_set.is_standard:
            raise LabelError(f"an empty monomial over {m.label_set} has no textual form")
        return f"n={m.n}; 1"
    return " * ".join(c.render() + (f"^{e}" if e > 1 else "") for c, e in m.factors)


# -- Keel's quadratic relation -------------------------------------------------

def _crossing(a: int, b: int, full: int) -> bool:
    # both masks hold the smallest label, so I1 & I2 is never empty
    return bool(a & ~b) and bool(b & ~a) and (a | b) != full


def fulfills_quadratic_relation(a: Cut, b: Cut) -> bool:
    """True iff all four cross intersections of the parts are nonempty."""
    if a.label_set != b.label_set:
        raise MismatchedLabelSets(f"{a!r} and {b!r} live over different label sets")
    return _crossing(a.mask, b.mask, a.label_set.full)


def find_quadratic_pair(m: Monomial) -> tuple[Cut, Cut] | None:
    """First pair of factors (in canonical order) killed by the quadratic relation."""
    cuts = m.cuts
    masks = [c.mask for c in cuts]
    full = m.label_set.full
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            b = masks[j]
            if a & ~b and b & ~a and (a | b) != full:
                return cuts[i], cuts[j]
    return None


def is_tree_monomial(m: Monomial) -> bool:
    return find_quadratic_pair(m) is None


def is_clever(m: Monomial) -> bool:
    """Tree monomial of degree ``n - 3`` with pairwise distinct factors."""
    return m.is_proper and all(e == 1 for _, e in m.factors) and is_tree_monomial(m)
