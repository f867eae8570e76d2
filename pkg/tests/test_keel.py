import pytest
from hypothesis import given, strategies as st

from chowdeg import (
    Cut,
    LabelSet,
    Monomial,
    find_quadratic_pair,
    fulfills_quadratic_relation,
    is_clever,
    is_tree_monomial,
    parse_monomial,
    render_monomial,
)
from chowdeg.errors import InvalidCut, ParseError


def test_label_set_masks():
    ls = LabelSet([2, 5, 9, 11])
    assert ls.n == 4 and not ls.is_standard
    assert ls.unmask(ls.mask([9, 2])) == (2, 9)
    assert 5 in ls and 6 not in ls
    assert LabelSet.standard(4).is_standard


def test_cut_is_unordered():
    ls = LabelSet.standard(5)
    a = Cut.of(ls, [1, 2], [3, 4, 5])
    b = Cut.of(ls, [3, 4, 5])
    assert a == b and hash(a) == hash(b)
    assert a.part_i == (1, 2) and a.part_j == (3, 4, 5)
    assert a.separates([1, 2], [4, 5]) and not a.separates([1, 3], [4, 5])


@pytest.mark.parametrize("parts", [([1], [2, 3, 4, 5]), ([1, 2], [3, 4])])
def test_cut_rejects_small_or_partial(parts):
    with pytest.raises(InvalidCut):
        Cut.of(LabelSet.standard(5), *parts)


def test_quadratic_relation():
    ls = LabelSet.standard(5)
    a, b = Cut.of(ls, [1, 2]), Cut.of(ls, [1, 4])
    assert fulfills_quadratic_relation(a, b)
    assert not fulfills_quadratic_relation(a, Cut.of(ls, [1, 2, 3]))
    assert not fulfills_quadratic_relation(a, a)


def test_parse_and_render_round_trip():
    m = parse_monomial("d{1,2|3,4,5,6}^2 * d{1,2,3,4|5,6}")
    assert m.degree == 3 and m.is_proper and m.n == 6
    assert parse_monomial(render_monomial(m)) == m
    assert m.exponent(Cut.of(m.label_set, [1, 2])) == 2


def test_parse_header_and_empty_product():
    m = parse_monomial("n=3; 1")
    assert m.is_empty and m.is_proper and is_clever(m)
    assert parse_monomial("n = 6; d{1,2|3,4,5,6}").n == 6


def test_repeated_factors_merge():
    assert parse_monomial("d{1,2|3,4,5} * d{3,4,5|1,2}").degree == 2


@pytest.mark.parametrize(
    "text, err",
    [
        ("", ParseError),
        ("d{1,2|3,4,5}^0", ParseError),
        ("d{1,2|3,4,5", ParseError),
        ("d{1,2|3}", InvalidCut),
        ("d{1,1|3,4,5}", InvalidCut),
        ("n=6; d{1,2|3,4,5}", InvalidCut),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_monomial(text)


def test_parse_error_is_a_value_error():
    with pytest.raises(ValueError):
        parse_monomial("x")


def test_tree_monomial_checks():
    crossing = parse_monomial("d{1,2|3,4,5} * d{1,4|2,3,5}")
    assert find_quadratic_pair(crossing) is not None
    assert not is_tree_monomial(crossing)
    caterpillar = parse_monomial("d{1,2|3,4,5,6} * d{1,2,3|4,5,6} * d{1,2,3,4|5,6}")
    assert is_tree_monomial(caterpillar) and is_clever(caterpillar)
    assert not is_clever(parse_monomial("d{1,2|3,4,5,6}^2 * d{1,2,3,4|5,6}"))


@st.composite
def monomials(draw):
    n = draw(st.integers(4, 9))
    ls = LabelSet.standard(n)
    masks = st.integers(1, ls.full - 1).filter(lambda m: 2 <= m.bit_count() <= n - 2)
    factors = draw(st.lists(st.tuples(masks, st.integers(1, 3)), min_size=1, max_size=5))
    return Monomial(ls, [(Cut.of(ls, ls.unmask(m)), e) for m, e in factors])


@given(monomials())
def test_render_parse_round_trip_property(m):
    assert parse_monomial(render_monomial(m)) == m
    assert parse_monomial(str(m)) == m


@given(monomials())
def test_quadratic_pair_agrees_with_pairwise_test(m):
    cuts = m.cuts
    crossing = any(fulfills_quadratic_relation(a, b) for i, a in enumerate(cuts) for b in cuts[i + 1:])
    assert (find_quadratic_pair(m) is not None) == crossing
