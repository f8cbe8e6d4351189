from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import small_sets
from sumdiff.errors import ArithmeticOverflow, InvalidArgument, InvalidDilation
from sumdiff.intset import (
    INT64_MAX,
    INT64_MIN,
    IntSet,
    affine_canonical,
    affine_image,
    bits_of,
    diffset,
    diffset_pairs,
    dilate,
    format_set,
    mask_cards,
    parse_set,
    set_from_json,
    set_to_json,
    stats,
    sumset,
    sumset_pairs,
    symmetry_center,
    translate,
)


def S(*xs):
    return IntSet(xs)


def interval_minus(lo, hi, holes):
    return IntSet(x for x in range(lo, hi + 1) if x not in holes)


@pytest.mark.parametrize("A, x, expected", [
    (S(4, 6, 7, 9), -4, S(0, 2, 3, 5)),
    (S(0), 7, S(7)),
    (S(0, 2, 3, 4, 7), 3, S(3, 5, 6, 7, 10)),
])
def test_translate(A, x, expected):
    assert translate(A, x) == expected


@pytest.mark.parametrize("A, y, expected", [
    (S(0, 1, 2), 3, S(0, 3, 6)),
    (S(1, 2), -1, S(-2, -1)),
    (S(0, 2, 3), 5, S(0, 10, 15)),
])
def test_dilate(A, y, expected):
    assert dilate(A, y) == expected


def test_dilate_zero():
    with pytest.raises(InvalidDilation):
        dilate(S(1, 2), 0)


def test_overflow_names_element():
    with pytest.raises(ArithmeticOverflow, match="element 5"):
        translate(S(1, 5), INT64_MAX - 2)
    with pytest.raises(ArithmeticOverflow):
        dilate(S(INT64_MAX // 2 + 1), 2)
    with pytest.raises(ArithmeticOverflow):
        sumset(S(INT64_MAX), S(1))
    with pytest.raises(ArithmeticOverflow):
        diffset(S(INT64_MIN), S(1))
    with pytest.raises(ArithmeticOverflow):
        IntSet([INT64_MAX + 1])


def test_five_element_example():
    A = S(0, 2, 3, 4, 7)
    assert sumset(A, A) == interval_minus(0, 14, {1, 12, 13})
    assert len(sumset(A, A)) == 12
    assert diffset(A, A) == interval_minus(-7, 7, {-6, 6})
    assert len(diffset(A, A)) == 13


def test_counterexample_sets(counterexample):
    A = counterexample
    assert sumset(A, A) == interval_minus(0, 28, {1, 20, 27})
    assert diffset(A, A) == interval_minus(-14, 14, {-6, 6, -13, 13})
    assert (len(sumset(A, A)), len(diffset(A, A))) == (26, 25)


def test_singletons_and_empty():
    assert sumset(S(5), S(5)) == S(10)
    assert diffset(S(3), S(3)) == S(0)
    assert sumset(S(), S(1, 2)) == S()
    assert diffset(S(1), S()) == S()


def test_bitmap_matches_pairs_on_all_subsets_of_0_10():
    for mask in range(1 << 11):
        A = IntSet.from_mask(mask)
        assert sumset(A, A) == sumset_pairs(A, A)
        assert diffset(A, A) == diffset_pairs(A, A)
        assert mask_cards(mask) == (len(sumset_pairs(A, A)), len(diffset_pairs(A, A)))


@given(small_sets(), small_sets())
def test_bitmap_matches_pairs_two_operands(A, B):
    assert sumset(A, B) == sumset_pairs(A, B)
    assert diffset(A, B) == diffset_pairs(A, B)


@given(small_sets(-10**12, 10**12, max_size=6), small_sets(-10**12, 10**12, max_size=6))
def test_wide_sets_take_pair_route(A, B):
    assert sumset(A, B, threshold=16) == sumset_pairs(A, B)
    assert diffset(A, B, threshold=16) == diffset_pairs(A, B)


@given(small_sets(min_size=1), st.integers(-1000, 1000), st.integers(-50, 50).filter(bool))
def test_affine_invariance(A, x, y):
    B = affine_image(A, x, y)
    assert len(sumset(B, B)) == len(sumset(A, A))
    assert len(diffset(B, B)) == len(diffset(A, A))


@given(small_sets(min_size=1))
def test_diffset_closed_under_negation(A):
    D = diffset(A, A)
    assert D == dilate(D, -1)
    assert 0 in D


@given(small_sets(min_size=1, max_size=12))
def test_cardinality_bounds(A):
    st_ = stats(A)
    k = st_.cardinality
    assert 2 * k - 1 <= st_.sum_card <= k * (k + 1) // 2
    assert 2 * k - 1 <= st_.diff_card <= k * k - k + 1


@pytest.mark.parametrize("A, z", [(S(4, 6, 7, 9), 13), (S(0), 0), (S(0, 1, 3), None), (S(-3, 0, 3), 0)])
def test_symmetry_center(A, z):
    assert symmetry_center(A) == z


def test_symmetry_center_empty():
    with pytest.raises(InvalidArgument):
        symmetry_center(S())


@given(small_sets(min_size=1))
def test_symmetric_implies_balanced(A):
    sym = IntSet(set(A) | {A.min + A.max - a for a in A})
    assert symmetry_center(sym) == sym.min + sym.max
    assert len(sumset(sym, sym)) == len(diffset(sym, sym))


def test_three_element_sets_exhaustive():
    for a, b, c in combinations(range(13), 3):
        A = S(a, b, c)
        s, d = len(sumset(A, A)), len(diffset(A, A))
        if a + c != 2 * b:
            assert (s, d) == (6, 7)
        else:
            assert (s, d) == (5, 5)


@pytest.mark.parametrize("A, expected", [
    (S(3, 5, 7), S(0, 1, 2)),
    (S(0, 2, 3, 4, 7, 11, 12, 14), S(0, 2, 3, 4, 7, 11, 12, 14)),
    (S(10, 20, 40), S(0, 1, 3)),
])
def test_affine_canonical(A, expected):
    assert affine_canonical(A) == expected


@given(small_sets(min_size=2))
def test_affine_canonical_preserves_cards(A):
    C = affine_canonical(A)
    assert C.min == 0
    assert len(sumset(C, C)) == len(sumset(A, A))
    assert len(diffset(C, C)) == len(diffset(A, A))
    assert affine_canonical(C) == C


def test_affine_canonical_needs_two():
    with pytest.raises(InvalidArgument):
        affine_canonical(S(4))


def test_parse_and_format():
    assert parse_set(" { 0 , 2,3 ,4,7 } ") == S(0, 2, 3, 4, 7)
    assert parse_set("{}") == S()
    assert parse_set("{-3,1}") == S(-3, 1)
    with pytest.raises(InvalidArgument, match="duplicate"):
        parse_set("{1,2,1}")
    for bad in ["0,1", "{1,,2}", "{a}", "{1"]:
        with pytest.raises(InvalidArgument):
            parse_set(bad)


@given(small_sets())
def test_literal_round_trip(A):
    assert parse_set(format_set(A)) == A
    assert set_from_json(set_to_json(A)) == A


def test_json_must_be_increasing():
    with pytest.raises(InvalidArgument):
        set_from_json([2, 1])
    with pytest.raises(InvalidArgument):
        set_from_json([1, 1])


@given(st.integers(0, 1 << 5000))
def test_bits_of(mask):
    assert sum(1 << b for b in bits_of(mask)) == mask
