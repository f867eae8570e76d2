import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from chowdeg import (
    LabelSet,
    LoadedTree,
    RedundancyForest,
    forest_to_dot,
    forest_value,
    integral_value,
    oracle_value,
    parse_monomial,
    redundancy_forest,
    sun_like_value,
    tree_to_monomial,
    tree_value,
)
from chowdeg.errors import NotProper
from chowdeg.generators import random_forest, random_proper_tree


def naive_value(weights, edges):
    """Straight transcription of the recursive definition, always taking the first leaf."""
    weights = dict(enumerate(weights))
    edges = set(map(frozenset, edges))
    total = 1
    while True:
        nbrs = {v: [u for e in edges if v in e for u in e if u != v] for v in weights}
        leaves = [v for v in weights if len(nbrs[v]) == 1]
        if not leaves:
            break
        leaf = leaves[0]
        (p,) = nbrs[leaf]
        if weights[leaf] > weights[p]:
            return 0
        total *= comb(weights[p], weights[leaf])
        weights[p] -= weights.pop(leaf)
        edges.discard(frozenset((leaf, p)))
    return total if all(w == 0 for w in weights.values()) else 0


def test_worked_forest():
    f = RedundancyForest((1, 1, 1, 4, 4, 2, 1), ((0, 1), (2, 3), (3, 4), (4, 5), (5, 6)))
    assert len(f.trees) == 2
    assert forest_value(f) == 32


def test_empty_and_isolated():
    assert forest_value(RedundancyForest(())) == 1
    assert forest_value(RedundancyForest((0,))) == 1
    assert forest_value(RedundancyForest((2,))) == 0
    assert forest_value(RedundancyForest((1, 2), ((0, 1),))) == 0


def test_cycle_rejected():
    with pytest.raises(ValueError):
        RedundancyForest((1, 1, 1), ((0, 1), (1, 2), (2, 0)))


def test_redundancy_forest_keeps_isolated_nonzero_vertex():
    # a nonzero vertex whose neighbours all vanish must still force value 0
    t = LoadedTree(LabelSet.standard(6), [[1, 2], [3, 4, 5, 6]], [(0, 1)], [1])
    f = redundancy_forest(t)
    assert f.weights == (2,) and not t.is_proper
    assert forest_value(f) == 0


def test_full_redundancy_tree_subdivides_every_edge():
    t = random_proper_tree(random.Random(1), 9)
    full = redundancy_forest(t, delete_zero=False)
    assert full.num_nodes == t.num_vertices + len(t.edges)
    assert len(full.edges) == 2 * len(t.edges)
    assert forest_value(redundancy_forest(t)) == abs(tree_value(t))


def test_integral_value_classifications():
    assert integral_value(parse_monomial("d{1,2|3,4,5}")).classification == "improper-degree"
    assert integral_value(parse_monomial("d{1,2|3,4,5} * d{1,4|2,3,5}")).classification == "zero-by-quadratic"
    clever = integral_value(parse_monomial("d{1,2|3,4,5,6} * d{1,2,3|4,5,6} * d{1,2,3,4|5,6}"))
    assert (clever.value, clever.classification) == (1, "clever")
    general = integral_value(parse_monomial("d{1,2|3,4,5,6}^2 * d{1,2,3,4|5,6}"))
    assert (general.value, general.sign, general.magnitude) == (-1, -1, 1)
    assert set(general.timings) == {"degree", "quadratic", "tree", "forest"}


def test_single_factor_powers():
    # d_{12|3..n}^{n-3}: two vertices, magnitude 1, sign (-1)^{n-4}; n=5 is the classical -1
    for n in range(4, 9):
        text = "d{1,2|" + ",".join(map(str, range(3, n + 1))) + f"}}^{n - 3}"
        assert integral_value(parse_monomial(text)).value == (-1) ** (n - 4)


def test_sun_like_value_guards():
    assert sun_like_value(3, [1, 2]) == -3
    with pytest.raises(NotProper):
        sun_like_value(4, [1, 2])
    with pytest.raises(ValueError):
        sun_like_value(0, [0])


def test_forest_dot():
    dot = forest_to_dot(RedundancyForest((1, 1), ((0, 1),)))
    assert dot.count("--") == 1 and "graph" in dot


@given(st.randoms(use_true_random=False))
def test_matches_naive_recursion(rnd):
    f = random_forest(random.Random(rnd.random()), max_nodes=9, max_weight=4)
    assert forest_value(f) == naive_value(f.weights, f.edges)


@given(st.randoms(use_true_random=False), st.integers(0, 2**32))
def test_leaf_order_is_irrelevant(rnd, seed):
    f = random_forest(random.Random(rnd.random()))
    assert forest_value(f, random.Random(seed)) == forest_value(f)


@given(st.integers(4, 8), st.randoms(use_true_random=False))
def test_forest_matches_oracle(n, rnd):
    m = tree_to_monomial(random_proper_tree(random.Random(rnd.random()), n))
    assert integral_value(m).value == oracle_value(m)
