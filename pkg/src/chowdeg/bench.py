"""Stage timings for the forest pipeline."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .forest import forest_value, redundancy_forest, tree_sign
from .generators import caterpillar_monomial, random_proper_tree, sun_like_tree
from .identities import multinomial
from .keel import Monomial, find_quadratic_pair, parse_monomial, render_monomial
from .loaded_tree import monomial_to_tree, tree_to_monomial

__all__ = ["BenchRow", "SHAPES", "stage_times", "bench", "loglog_slope"]

SHAPES = ("clever-caterpillar", "sun-like", "random-tree")


@dataclass(frozen=True)
class BenchRow:
    shape: str
    n: int
    degree: int
    parse_s: float
    quadratic_s: float
    tree_s: float
    forest_s: float
    value: int
    expected: int | None

    @property
    def total_s(self) -> float:
        return self.parse_s + self.quadratic_s + self.tree_s + self.forest_s

    FIELDS = ("shape", "n", "degree", "parse_s", "quadratic_s", "tree_s", "forest_s", "total_s", "value", "expected")

    def as_row(self) -> list:
        return [getattr(self, f) for f in self.FIELDS]


def stage_times(text: str) -> tuple[Monomial, float, float, float, float, int]:
    """Run every stage explicitly (no clever short circuit) and time each one."""
    t0 = time.perf_counter()
    m = parse_monomial(text)
    t1 = time.perf_counter()
    pair = find_quadratic_pair(m)
    t2 = time.perf_counter()
    if pair is not None or not m.is_proper:
        return m, t1 - t0, t2 - t1, 0.0, 0.0, 0
    tree = monomial_to_tree(m, check=False)
    t3 = time.perf_counter()
    value = tree_sign(tree) * forest_value(redundancy_forest(tree))
    t4 = time.perf_counter()
    return m, t1 - t0, t2 - t1, t3 - t2, t4 - t3, value


def _case(shape: str, n: int, rng: random.Random, weight: int) -> tuple[Monomial, int | None]:
    if shape == "clever-caterpillar":
        return caterpillar_monomial(n), 1
    if shape == "sun-like":
        # n is the number of rays; all rays share one weight
        weights = [weight] * n
        k = sum(weights)
        return tree_to_monomial(sun_like_tree(weights)), (-1) ** k * multinomial(k, weights)
    if shape == "random-tree":
        return tree_to_monomial(random_proper_tree(rng, n)), None
    raise ValueError(f"unknown shape {shape!r}; choose from {SHAPES}")


def bench(shape: str, ns: Iterable[int], repeat: int = 3, seed: int = 0, weight: int = 2) -> list[BenchRow]:
    """Best-of-``repeat`` stage timings for each size in ``ns``."""
    rng = random.Random(seed)
    rows = []
    for n in ns:
        m, expected = _case(shape, n, rng, weight)
        text = render_monomial(m)
        best = None
        for _ in range(max(1, repeat)):
            _, *times, value = stage_times(text)
            best = times if best is None else [min(a, b) for a, b in zip(best, times)]
        rows.append(BenchRow(shape, m.n, m.degree, *best, value, expected))
    return rows


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx = [math.log(x) for x in xs]
    ly = [math.log(max(y, 1e-9)) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den
