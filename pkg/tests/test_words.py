from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvgrid.dyadic import Caret, coord_tree, right_arm
from nvgrid.element import element_new, equals, evaluate, identity, random_element
from nvgrid.exceptions import (
    ContractViolation,
    DimUnsupported,
    NegativeIndex,
    NoRuleConfigured,
    RuleVerificationFailed,
    UnsupportedFamily,
)
from nvgrid.formats import parse_word
from nvgrid.grid import Side
from nvgrid.schemas import RewriteRule, Word
from nvgrid.words import (
    GeneratorTable,
    RuleTable,
    bubble_swaps,
    emit_positive,
    emit_tree_word,
    generator_element,
    interpret,
    inversion_count,
    leaf_exponents,
    letter,
    normal_form,
    perm_word,
    positive_diagram,
    positive_element,
    rewrite_finite,
    shift,
)

GOLDEN_VERTICAL = coord_tree(["00", "0100", "0101", "011", "1"], 0)
GOLDEN_HORIZONTAL = coord_tree(["00", "01", "100", "101", "110", "111"], 1)
GOLDEN_WORD = (
    "C1 C2 C3 A0 B0^2 B2^2 B4 A6^2 B6^2 B8^2 B10 B12^2 B14^2 B16 "
    "B18^2 B20^2 B22 B24 B26"
)

seeds = st.integers(min_value=0, max_value=2**32)


def coord_trees(color: int) -> st.SearchStrategy:
    return st.recursive(
        st.none(),
        lambda children: st.builds(Caret, st.just(color), children, children),
        max_leaves=6,
    )


@pytest.fixture(scope="module")
def rules() -> RuleTable:
    return RuleTable()


def test_word_merging():
    assert str(parse_word("A0 A0^-1 B1 B1")) == "A0 A0^-1 B1 B1"
    assert str(parse_word("A0 A0^-1 B1 B1").compact()) == "B1^2"
    assert str(parse_word("A2^0 C1").compact()) == "C1"
    assert str(parse_word("A0 B1^-2").inverse()) == "B1^2 A0^-1"
    assert str(parse_word("A0 B1").power(-2)) == "B1^-1 A0^-1 B1^-1 A0^-1"
    assert parse_word("A0 B1^-3").length() == 4


def test_leaf_exponents():
    assert leaf_exponents(GOLDEN_VERTICAL, 0) == [1, 2, 0, 0, 0]
    assert leaf_exponents(GOLDEN_HORIZONTAL, 1) == [1, 0, 1, 0, 0, 0]
    assert leaf_exponents(GOLDEN_HORIZONTAL, 1, hanging=True) == [2, 0, 2, 0, 1, 0]


def test_golden_word():
    diagram = positive_diagram(GOLDEN_VERTICAL, GOLDEN_HORIZONTAL)
    word = emit_positive(diagram)
    assert str(word) == GOLDEN_WORD
    assert equals(interpret(word), diagram.to_element())


def test_golden_word_matches_tree_word():
    diagram = positive_diagram(GOLDEN_VERTICAL, GOLDEN_HORIZONTAL)
    assert emit_tree_word(diagram.composite_tree) == emit_positive(diagram)


@settings(max_examples=40, deadline=None)
@given(coord_trees(0), coord_trees(1))
def test_emission_on_random_grids(vertical, horizontal):
    diagram = positive_diagram(vertical, horizontal)
    word = emit_positive(diagram)
    assert emit_tree_word(diagram.composite_tree) == word
    assert equals(interpret(word), diagram.to_element())

    spine, arm = len(right_arm(vertical)), len(right_arm(horizontal))
    prefix = emit_positive(diagram, verbose=True).letters[:arm]
    assert [(g.family, g.index, g.exponent) for g in prefix] == [
        ("C", spine + k, 1) for k in range(arm)
    ]


def test_single_colored_exponents():
    diagram = positive_diagram(GOLDEN_VERTICAL, None)
    assert str(emit_positive(diagram)) == "A0 A1^2"
    assert str(emit_positive(diagram, verbose=True)) == "A0 A1^2 A2^0 A3^0 A4^0"


@pytest.mark.parametrize(
    "tree, word",
    [
        (None, ""),
        (Caret(0, None, None), ""),
        (Caret(1, None, None), "C0"),
        (Caret(0, Caret(0, None, None), None), "A0"),
        (Caret(0, Caret(1, None, None), None), "B0"),
        (Caret(0, None, Caret(1, None, None)), "C1"),
        (Caret(1, Caret(0, None, None), Caret(0, None, None)), "C0 A0"),
    ],
)
def test_emit_tree_word(tree, word):
    assert str(emit_tree_word(tree)) == word
    assert equals(interpret(emit_tree_word(tree)), positive_element(tree))


def test_emit_tree_word_needs_two_colors():
    with pytest.raises(DimUnsupported):
        emit_tree_word(Caret(2, None, None))


@pytest.mark.parametrize("family", ["A", "B", "C", "P"])
@pytest.mark.parametrize("index", [0, 1, 3])
def test_generators_are_valid_elements(family, index):
    element = generator_element(letter(family, index))
    word = Word(letters=(letter(family, index), letter(family, index, -1)))
    assert element.dim == 2
    assert equals(interpret(word), identity(2))


def test_generator_a0_doubles_first_quarter():
    a0 = generator_element(letter("A", 0))
    assert evaluate(a0, (Fraction(1, 8), Fraction(1, 2))) == (Fraction(1, 4), Fraction(1, 2))


def test_q_letters_need_configuration():
    with pytest.raises(UnsupportedFamily):
        generator_element(letter("Q", 0))
    square = GeneratorTable(q_family="square")
    assert equals(generator_element(letter("Q", 0, 2), square), identity(2))


def test_orientation_knobs_give_elements():
    for table in (GeneratorTable(lower_first=False), GeneratorTable(expand_left=False)):
        element = generator_element(letter("A", 1), table)
        assert not equals(element, generator_element(letter("A", 1)))


def test_shift():
    assert str(shift(parse_word("A0 B2^3"), 6)) == "A6 B8^3"
    with pytest.raises(NegativeIndex):
        shift(parse_word("A1 B0"), -1)


def test_perm_word_of_three_cycle():
    word = perm_word([1, 2, 0])
    assert str(word) == "P1 A0^-1 P0 P1 P0 A0"
    cycle = element_new(
        [(("0", ""), ("10", "")), (("10", ""), ("11", "")), (("11", ""), ("0", ""))],
    )
    assert equals(interpret(word), cycle)


@pytest.mark.parametrize("perm", [[0], [1, 0], [0, 2, 1], [3, 1, 0, 2], [4, 3, 2, 1, 0]])
def test_transposition_count_is_inversion_count(perm):
    assert len(bubble_swaps(perm)) == inversion_count(perm)


def test_normal_form_of_halves_swap(halves_swap):
    assert str(normal_form(halves_swap)) == "P0"


def test_normal_form_of_c0(bottom_to_left):
    assert str(normal_form(bottom_to_left)) == "C0"
    assert equals(interpret(parse_word("C0")), bottom_to_left)


def test_normal_form_needs_dim_two():
    with pytest.raises(DimUnsupported):
        normal_form(identity(3))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=5))
def test_normal_form_round_trip(seed, budget):
    f = random_element(seed, 2, budget)
    assert equals(interpret(normal_form(f)), f)
    assert equals(interpret(normal_form(f, Side.TARGET)), f)
    assert equals(interpret(normal_form(f, verbose=True)), f)


def test_rewrite_shift_rules(rules):
    assert str(rewrite_finite(parse_word("A2"), rules)) == "A0^-1 A1 A0"
    assert str(rewrite_finite(parse_word("B3^2"), rules)) == "A0^-2 B1^2 A0^2"
    assert str(rewrite_finite(parse_word("P1 A0"), rules)) == "P1 A0"


def test_rewrite_without_rule(rules):
    with pytest.raises(NoRuleConfigured):
        rewrite_finite(parse_word("C0"), rules)


def test_bad_rule_is_rejected():
    bad = RewriteRule(lhs=letter("A", 2), rhs=parse_word("A1"), origin="test")
    with pytest.raises(RuleVerificationFailed):
        RuleTable([bad], max_index=2)


def test_unverified_bad_rule_breaks_contract():
    bad = RewriteRule(lhs=letter("A", 2), rhs=parse_word("A1"), origin="test")
    with pytest.raises(ContractViolation):
        rewrite_finite(parse_word("A2"), RuleTable([bad], verify=False))


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.sampled_from("ABP"),
            st.integers(min_value=0, max_value=6),
            st.sampled_from([-2, -1, 1, 2]),
        ),
        min_size=1,
        max_size=4,
    ),
)
def test_rewrite_reaches_finite_set(rules, letters):
    word = Word.of(letter(family, index, exponent) for family, index, exponent in letters)
    rewritten = rewrite_finite(word, rules)
    assert all(generator.index <= 1 for generator in rewritten.letters)
