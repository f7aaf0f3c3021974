import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvgrid.element import (
    compose,
    element_new,
    equals,
    identity,
    invert,
    random_element,
    random_refinement,
)
from nvgrid.exceptions import PatternError
from nvgrid.grid import (
    Side,
    canon,
    gridify,
    invert_diagram,
    max_coord_carets,
    reduce,
    reducible_caret,
)

seeds = st.integers(min_value=0, max_value=2**32)


def test_canon_identity():
    diagram = canon(identity(2))
    assert diagram.caret_count == 0
    assert diagram.leaf_counts == (1, 1)
    assert diagram.images == (("", ""),)


def test_refined_identity_reduces_to_one_cell():
    refined = random_refinement(identity(3), seed=11, carets=7)
    assert canon(refined) == canon(identity(3))


def test_canon_of_letter_c0(bottom_to_left):
    diagram = canon(bottom_to_left)
    assert diagram.leaf_counts == (1, 2)
    assert diagram.images == (("0", ""), ("1", ""))


def test_single_colored_element_keeps_classical_tree_pair(thompson_x0):
    diagram = canon(random_refinement(thompson_x0, seed=5, carets=3))
    assert diagram.coord_leaves == (("00", "01", "1"), ("",))
    assert diagram.images == (("0", ""), ("10", ""), ("11", ""))


def test_gridify_extends_cuts():
    f = element_new(
        [(("0", ""), ("", "0")), (("1", "0"), ("", "10")), (("1", "1"), ("", "11"))],
    )
    diagram = gridify(f)
    assert diagram.leaf_counts == (2, 2)
    assert diagram.images[:2] == (("", "00"), ("", "01"))
    assert equals(diagram.to_element(), f)


def test_target_side(bottom_to_left):
    diagram = canon(bottom_to_left, Side.TARGET)
    assert diagram.side is Side.TARGET
    assert diagram == invert_diagram(canon(invert(bottom_to_left)))
    assert equals(diagram.to_element(), bottom_to_left)


def test_reducible_caret(thompson_x0):
    diagram = gridify(random_refinement(thompson_x0, seed=1, carets=1))
    with pytest.raises(PatternError):
        reducible_caret(diagram, 0, "")
    assert not reducible_caret(gridify(thompson_x0), 0, "0")


def test_max_coord_carets():
    f = random_element(4, 2, 12)
    diagram = canon(f)
    assert max_coord_carets(diagram) <= diagram.caret_count


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=3))
def test_canon_is_confluent(seed, dim):
    f = random_element(seed, dim, 8 if dim == 2 else 5)
    expected = canon(f)
    refined = random_refinement(f, seed + 1, 4)
    assert canon(refined) == expected
    assert reduce(gridify(refined), seed=seed) == expected
    g = random_element(seed + 2, dim, 4)
    assert canon(compose(compose(f, g), invert(g))) == expected


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=3))
def test_canon_equality_matches_oracle(seed, dim):
    f, g = random_element(seed, dim, 3), random_element(seed + 1, dim, 3)
    assert (canon(f) == canon(g)) == equals(f, g)
    assert equals(canon(f).to_element(), f)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=10))
def test_refinement_bound(seed, dim, budget):
    f = random_element(seed, dim, budget)
    assert canon(f).caret_count + 1 <= (budget + 1) ** dim


@pytest.mark.slow
@pytest.mark.parametrize("dim, budget, count", [(2, 24, 300), (3, 15, 100)])
def test_confluence_at_acceptance_size(dim, budget, count):
    for seed in range(count):
        f = random_element(seed, dim, budget)
        expected = canon(f)
        for k in range(5):
            assert canon(random_refinement(f, seed * 5 + k, 3)) == expected
            assert canon(f, seed=seed * 5 + k) == expected
