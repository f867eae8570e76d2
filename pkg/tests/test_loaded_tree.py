import json
import random

import pytest
from hypothesis import given, strategies as st

from chowdeg import (
    LabelSet,
    LoadedTree,
    clusters,
    monomial_to_tree,
    parse_monomial,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
    tree_to_monomial,
    weighted_tree,
)
from chowdeg.errors import EmptyMonomialBadN, InvalidTree, NoCorrespondingMonomial, NotATreeMonomial
from chowdeg.generators import caterpillar_tree, random_proper_tree


def test_worked_monomial_tree():
    t = monomial_to_tree(parse_monomial("d{1,2|3,4,5,6}^2 * d{1,2,3,4|5,6}"))
    assert t.num_vertices == 3 and t.fringes == 3 and t.is_proper
    assert sorted(t.vertex_labels) == [(1, 2), (3, 4), (5, 6)]
    assert sorted(t.multiplicities) == [1, 2]
    middle = t.vertex_of_label(3)
    assert t.degree(middle) == 2 and t.vertex_weight(middle) == 1


def test_weight_identity_on_proper_trees():
    rng = random.Random(3)
    for _ in range(100):
        wt = weighted_tree(random_proper_tree(rng, rng.randint(3, 12)))
        assert wt.satisfies_weight_identity()
        assert wt.vertex_weight_sum == wt.edge_weight_sum


def test_improper_tree_breaks_weight_identity():
    ls = LabelSet.standard(6)
    t = LoadedTree(ls, [[1, 2, 3], [4, 5, 6]], [(0, 1)], [2])
    assert not t.is_proper
    assert not weighted_tree(t).satisfies_weight_identity()


@pytest.mark.parametrize(
    "labels, edges, mults",
    [
        ([[1, 2], [3, 4]], [(0, 1)], [1]),  # label 5 missing
        ([[1, 2, 3], [3, 4, 5]], [(0, 1)], [1]),
        ([[1, 2, 3], [4, 5]], [(0, 1)], [0]),
        ([[1, 2, 3], [4], [5]], [(0, 1)], [1]),
        ([[1, 2], [3, 4, 5]], [(0, 1), (1, 0)], [1, 1]),
    ],
)
def test_invalid_trees(labels, edges, mults):
    with pytest.raises(InvalidTree):
        LoadedTree(LabelSet.standard(5), labels, edges, mults)


def test_unstable_vertex_rejected():
    with pytest.raises(InvalidTree):
        LoadedTree(LabelSet.standard(5), [[1, 2, 3], [4], [5]], [(0, 1), (1, 2)], [1, 1])


def test_clusters_of_a_vertex():
    t = caterpillar_tree(6)
    v = t.vertex_of_label(3)
    cl = clusters(t, v)
    assert [c.kind for c in cl].count("singleton") == 1
    assert sorted(c.labels for c in cl) == [(1, 2), (3,), (4, 5, 6)]


def test_empty_monomial_only_for_three_labels():
    t = monomial_to_tree(parse_monomial("n=3; 1"))
    assert t.num_vertices == 1 and t.is_proper
    with pytest.raises(EmptyMonomialBadN):
        monomial_to_tree(parse_monomial("n=4; 1"))
    with pytest.raises(NoCorrespondingMonomial):
        tree_to_monomial(LoadedTree(LabelSet.standard(4), [[1, 2, 3, 4]], [], []))


def test_crossing_monomial_has_no_tree():
    with pytest.raises(NotATreeMonomial):
        monomial_to_tree(parse_monomial("d{1,2|3,4,5} * d{1,4|2,3,5}"))


def test_json_round_trip_and_dot():
    t = random_proper_tree(random.Random(5), 9)
    assert tree_from_json(json.dumps(tree_to_json(t))) == t
    dot = tree_to_dot(t)
    assert dot.startswith("graph") and dot.count("--") == len(t.edges)


@given(st.integers(3, 11), st.randoms(use_true_random=False))
def test_monomial_tree_round_trip(n, rnd):
    t = random_proper_tree(random.Random(rnd.random()), n)
    m = tree_to_monomial(t)
    assert monomial_to_tree(m) == t
    assert tree_to_monomial(monomial_to_tree(m)) == m


@given(st.integers(4, 11), st.randoms(use_true_random=False))
def test_tree_independent_of_pivot(n, rnd):
    # relabeling changes which cut is the pivot; undoing it must give the same tree
    r = random.Random(rnd.random())
    t = random_proper_tree(r, n)
    perm = list(range(1, n + 1))
    r.shuffle(perm)
    sigma = dict(zip(range(1, n + 1), perm))
    inverse = {b: a for a, b in sigma.items()}
    rebuilt = monomial_to_tree(tree_to_monomial(t.relabeled(sigma)))
    assert rebuilt.relabeled(inverse) == t
