"""
Algebraic normal forms for 2V.

Generator letters are concrete block maps (see GeneratorTable) and a word
means the left-to-right composition of its letters. Emission procedures are
built on one fact: if tree t is tree t' with one caret of color c added at
leaf i, then pos(t) = pos(t') * G, where pos(x) maps x onto the all-right
coordinate-0 tree in leaf order and G is A_i (color 0) or B_i (color 1) for a
leaf off the right arm, C_i for a color-1 caret at the last leaf and the
identity for a color-0 caret at the last leaf.
"""

from collections.abc import Iterable, Sequence
from dataclasses import replace
from functools import lru_cache
from pathlib import Path
from typing import Literal

from config import env
from nvgrid.dyadic import (
    Block,
    Caret,
    ColoredTree,
    canonical_tree,
    coord_tree_leaves,
    leaf_count,
    pattern_validate,
    right_arm,
    tree_blocks,
    tree_colors,
)
from nvgrid.element import Element, compose, element_new, equals, identity, invert
from nvgrid.exceptions import (
    ContractViolation,
    DimUnsupported,
    NegativeIndex,
    NoRuleConfigured,
    RuleVerificationFailed,
    UnsupportedFamily,
)
from nvgrid.grid import GridDiagram, Side, canon
from nvgrid.schemas import FrozenModel, Generator, RewriteRule, Word
from nvgrid.utils.logger import conf_logger

logger = conf_logger(__name__, "E")

SIGMA: frozenset[tuple[str, int]] = frozenset(
    {("A", 0), ("A", 1), ("B", 0), ("B", 1), ("P", 0), ("Q", 0), ("P", 1), ("Q", 1)},
)


class GeneratorTable(FrozenModel):
    """
    lower_first: lower child of a caret is the smaller-coordinate half.
    expand_left: the base map of A, B, C sends [0, 1/4) onto [0, 1/2).
    Flipping either knob gives another consistent convention for the letters;
    emission procedures are written for the default one.
    """

    lower_first: bool = True
    expand_left: bool = True
    q_family: Literal["none", "square"] = "none"


DEFAULT_TABLE = GeneratorTable(q_family="square" if env.Q_FAMILY == "square" else "none")


def letter(family: str, index: int, exponent: int = 1) -> Generator:
    return Generator(
        family=family,  # pyright: ignore [reportArgumentType]
        index=index,
        exponent=exponent,
    )


def _spine_prefix(index: int) -> list[Block]:
    return [("1" * j + "0", "") for j in range(index)]


def _base_pairs(family: str, index: int, table: GeneratorTable) -> list[tuple[Block, Block]]:
    arm = "1" * index
    prefix = _spine_prefix(index)
    expanded = [(arm + "0", ""), (arm + "10", ""), (arm + "11", "")]
    match family:
        case "A":
            sources = [(arm + "00", ""), (arm + "01", ""), (arm + "1", "")]
            targets = expanded
        case "B":
            sources = [(arm + "0", "0"), (arm + "0", "1"), (arm + "1", "")]
            targets = expanded
        case "C":
            sources = [(arm, "0"), (arm, "1")]
            targets = [(arm + "0", ""), (arm + "1", "")]
        case "P":
            sources = [(arm + "0", ""), (arm + "1", "")]
            targets = [(arm + "1", ""), (arm + "0", "")]
        case "Q" if table.q_family == "square":
            sources = [(arm, "0"), (arm, "1")]
            targets = [(arm, "1"), (arm, "0")]
        case _:
            msg = f"Generator family {family} has no interpretation in {table}"
            logger.error(msg)
            raise UnsupportedFamily(msg)

    if not table.expand_left and family in "ABC":
        sources, targets = targets, sources
    pairs = list(zip(prefix + sources, prefix + targets, strict=True))
    if not table.lower_first:
        flip = str.maketrans("01", "10")
        pairs = [
            (tuple(a.translate(flip) for a in src), tuple(a.translate(flip) for a in tgt))
            for src, tgt in pairs
        ]
    return pairs


@lru_cache(maxsize=512)
def _base_element(family: str, index: int, table: GeneratorTable) -> Element:
    return element_new(_base_pairs(family, index, table))


def generator_element(generator: Generator, table: GeneratorTable = DEFAULT_TABLE) -> Element:
    """Function return the element of one letter, exponent included"""
    base = _base_element(generator.family, generator.index, table)
    if generator.exponent < 0:
        base = invert(base)
    result = identity(2)
    for _ in range(abs(generator.exponent)):
        result = compose(result, base)
    return result


def interpret(word: Word, table: GeneratorTable = DEFAULT_TABLE) -> Element:
    """Function compose letters left to right; the empty word is the identity"""
    result = identity(2)
    for generator in word.letters:
        if generator.exponent:
            result = compose(result, generator_element(generator, table))
    return result


def positive_element(tree: ColoredTree) -> Element:
    """Function return the element sending tree leaves onto the all-right tree in order"""
    sources = tree_blocks(tree, 2)
    targets = [("1" * j + "0", "") for j in range(len(sources) - 1)]
    targets.append(("1" * (len(sources) - 1), ""))
    return element_new(zip(sources, targets, strict=True))


def positive_diagram(vertical: ColoredTree, horizontal: ColoredTree) -> GridDiagram:
    """Function return source-gridded diagram of pos(t) for the grid of two coordinate trees"""
    diagram = GridDiagram(
        dim=2,
        side=Side.SOURCE,
        coord_leaves=(
            tuple(coord_tree_leaves(vertical)),
            tuple(coord_tree_leaves(horizontal)),
        ),
        images=(),
    )
    element = positive_element(diagram.composite_tree)
    return replace(diagram, images=tuple(element.image(cell) for cell in diagram.cells))


def _leaf_chains(tree: ColoredTree, *, hanging: bool) -> list[list[int]]:
    """
    Function return for every leaf the colors of its chain of lower-child to
    parent steps, bottom-up. Chain vertices avoid the right arm unless hanging,
    in which case the chain may run up to the root.
    """
    chains: list[list[int]] = []
    stack: list[tuple[ColoredTree, tuple[tuple[Caret, bool], ...]]] = [(tree, ())]
    while stack:
        node, path = stack.pop()
        if node is not None:
            stack.append((node.right, (*path, (node, False))))
            stack.append((node.left, (*path, (node, True))))
            continue
        chain: list[int] = []
        for depth in range(len(path) - 1, -1, -1):
            parent, went_lower = path[depth]
            if not went_lower:
                break
            if not hanging and not any(lower for _, lower in path[:depth]):
                break
            chain.append(parent.color)
        chains.append(chain)
    return chains


def leaf_exponents(tree: ColoredTree, color: int, *, hanging: bool = False) -> list[int]:
    """Function return leaf exponents of tree counted on carets of one color"""
    return [chain.count(color) for chain in _leaf_chains(tree, hanging=hanging)]


def exponent_word(
    exponents: Sequence[int],
    family: str,
    offset: int = 0,
    *,
    verbose: bool = False,
) -> Word:
    word = Word(
        letters=tuple(letter(family, offset + k, e) for k, e in enumerate(exponents)),
    )
    return word if verbose else word.compact()


def shift(word: Word, k: int) -> Word:
    """Function raise every index by k"""
    if any(generator.index + k < 0 for generator in word.letters):
        msg = f"Shifting {word} by {k} gives a negative index"
        logger.error(msg)
        raise NegativeIndex(msg)
    return Word(
        letters=tuple(
            generator.model_copy(update={"index": generator.index + k})
            for generator in word.letters
        ),
    )


def _check_two_colors(tree: ColoredTree) -> None:
    if tree_colors(tree) - {0, 1}:
        msg = "Word emission is only defined for dimension 2"
        logger.error(msg)
        raise DimUnsupported(msg)


def emit_tree_word(tree: ColoredTree) -> Word:
    """
    Function return the positive word of tree. Off-arm carets are removed
    largest leaf index first, then the right arm from the bottom; letters are
    output in reverse removal order, so the arm's C letters come first.
    """
    _check_two_colors(tree)
    letters = [letter("C", k) for k, caret in enumerate(right_arm(tree)) if caret.color == 1]
    for k, chain in enumerate(_leaf_chains(tree, hanging=False)):
        letters.extend(letter("A" if color == 0 else "B", k) for color in reversed(chain))
    return Word.of(letters)


def emit_positive(diagram: GridDiagram, *, verbose: bool = False) -> Word:
    """
    Function return the positive word of a source-gridded 2V diagram: the
    C-prefix of the horizontal spine, then for each vertical leaf j the power of
    A_{(m+1)j} and the horizontal copy word shifted by (m+1)j.
    """
    if diagram.dim != 2:
        msg = f"Positive word emission needs dimension 2, got {diagram.dim}"
        logger.error(msg)
        raise DimUnsupported(msg)
    vertical, horizontal = diagram.coord_trees
    spine = len(right_arm(vertical))
    copy_leaves = leaf_count(horizontal)
    vertical_leaves = leaf_count(vertical)

    a = leaf_exponents(vertical, 0)
    on_spine = exponent_word(leaf_exponents(horizontal, 1), "B", verbose=True)
    hanging = exponent_word(leaf_exponents(horizontal, 1, hanging=True), "B", verbose=True)

    letters = [letter("C", spine + k) for k in range(len(right_arm(horizontal)))]
    for j in range(vertical_leaves):
        letters.append(letter("A", copy_leaves * j, a[j]))
        if horizontal is not None:
            copy = on_spine if j == vertical_leaves - 1 else hanging
            letters.extend(shift(copy, copy_leaves * j).letters)

    logger.debug("Emitted positive word for leaf counts %s", diagram.leaf_counts)
    word = Word(letters=tuple(letters))
    return word if verbose else word.compact()


def adjacent_transposition(index: int, leaves: int) -> list[Generator]:
    """
    Function return letters swapping leaves index, index + 1 of the all-right
    pattern with given number of leaves
    """
    if index + 2 == leaves:
        return [letter("P", index)]
    return [
        letter("A", index, -1),
        letter("P", index),
        letter("P", index + 1),
        letter("P", index),
        letter("A", index),
    ]


def inversion_count(perm: Sequence[int]) -> int:
    return sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )


def bubble_swaps(perm: Sequence[int]) -> list[int]:
    """Function return positions of adjacent swaps moving leaf k to position perm[k]"""
    arrangement = list(range(len(perm)))
    swaps: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(perm) - 1):
            if perm[arrangement[i]] > perm[arrangement[i + 1]]:
                arrangement[i], arrangement[i + 1] = arrangement[i + 1], arrangement[i]
                swaps.append(i)
                changed = True
    return swaps


def perm_word(perm: Sequence[int]) -> Word:
    """Function return word realizing leaf k -> leaf perm[k] on the all-right pattern"""
    letters: list[Generator] = []
    for index in bubble_swaps(perm):
        letters.extend(adjacent_transposition(index, len(perm)))
    return Word.of(letters)


def normal_form(
    element: Element,
    side: Side = Side.SOURCE,
    *,
    verbose: bool = False,
) -> Word:
    """Function return the P * Pi * N^-1 normal form word of a 2V element"""
    if element.dim != 2:
        msg = f"Normal form words need dimension 2, got {element.dim}"
        logger.error(msg)
        raise DimUnsupported(msg)
    if side is Side.TARGET:
        return normal_form(invert(element), verbose=verbose).inverse()

    diagram = canon(element)
    positive = emit_positive(diagram, verbose=verbose)

    target_tree = canonical_tree(pattern_validate(diagram.images, 2))
    position = {block: k for k, block in enumerate(tree_blocks(target_tree, 2))}
    perm = [position[image] for image in diagram.images]
    middle = perm_word(perm)
    negative = emit_tree_word(target_tree)

    word = positive + middle + negative.inverse()
    return word if verbose else word.compact()


class RuleTable:
    """
    Rules rewriting letters toward the finite set. Built-in shift rules
    X_{i+1} = A0^-1 X_i A0 (X in A, B, P; i >= 1) cover every index; explicit
    rules take precedence. Every rule is checked by the equality oracle on load.
    """

    shift_families = ("A", "B", "P")

    def __init__(
        self,
        rules: Iterable[RewriteRule] = (),
        *,
        max_index: int = env.REWRITE_MAX_INDEX,
        table: GeneratorTable = DEFAULT_TABLE,
        verify: bool = True,
    ) -> None:
        self.table = table
        self.max_index = max_index
        self.explicit: dict[tuple[str, int], RewriteRule] = {}
        for rule in rules:
            if rule.lhs.exponent != 1:
                msg = f"Rule {rule} must rewrite a single letter with exponent 1"
                logger.error(msg)
                raise RuleVerificationFailed(msg)
            self.explicit[rule.lhs.base] = rule
        self.verified: list[RewriteRule] = []
        if verify:
            self.verify()

    def rule_for(self, family: str, index: int) -> RewriteRule | None:
        if (family, index) in self.explicit:
            return self.explicit[family, index]
        if family in self.shift_families and index >= 2:  # noqa: PLR2004
            rhs = Word(
                letters=(letter("A", 0, -1), letter(family, index - 1), letter("A", 0)),
            )
            return RewriteRule(lhs=letter(family, index), rhs=rhs, origin="shift")
        return None

    def _check(self, rule: RewriteRule) -> None:
        try:
            holds = equals(
                interpret(Word(letters=(rule.lhs,)), self.table),
                interpret(rule.rhs, self.table),
            )
        except UnsupportedFamily as e:
            msg = f"Rule {rule} uses letters without interpretation"
            logger.exception(msg)
            raise RuleVerificationFailed(msg) from e
        if not holds:
            msg = f"Rule {rule} ({rule.origin}) is not an identity"
            logger.error(msg)
            raise RuleVerificationFailed(msg)
        self.verified.append(rule)

    def verify(self) -> None:
        """Method check every explicit rule and shift rules up to max_index"""
        for rule in self.explicit.values():
            self._check(rule)
        for family in self.shift_families:
            for index in range(2, self.max_index + 1):
                if (family, index) not in self.explicit:
                    rule = self.rule_for(family, index)
                    if rule is not None:
                        self._check(rule)
        logger.debug("Verified %s rewriting rules", len(self.verified))


def load_rules(path: Path) -> list[RewriteRule]:
    """Function read `LHS := RHS` lines, '#' starts a comment"""
    from nvgrid.formats import parse_rules  # noqa: PLC0415

    return parse_rules(path.read_text(encoding="utf-8"), origin=str(path))


@lru_cache(maxsize=1)
def default_rule_table() -> RuleTable:
    rules = load_rules(Path(env.RULES_FILE)) if env.RULES_FILE else []
    return RuleTable(rules)


_MAX_EXPANSION_DEPTH = 256


def rewrite_finite(
    word: Word,
    rules: RuleTable | None = None,
    *,
    check: bool = True,
) -> Word:
    """Function rewrite word over the finite generating set"""
    rules = rules if rules is not None else default_rule_table()

    def expand(generator: Generator, depth: int) -> list[Generator]:
        if generator.base in SIGMA:
            return [generator]
        if depth > _MAX_EXPANSION_DEPTH:
            msg = f"Rewriting {generator} does not terminate"
            logger.error(msg)
            raise RuleVerificationFailed(msg)
        rule = rules.rule_for(*generator.base)
        if rule is None:
            msg = f"No rule configured for letter {generator.family}{generator.index}"
            logger.error(msg)
            raise NoRuleConfigured(msg)
        result: list[Generator] = []
        for sub in rule.rhs.power(generator.exponent).letters:
            result.extend(expand(sub, depth + 1))
        return result

    letters: list[Generator] = []
    for generator in word.letters:
        letters.extend(expand(generator, 0))
    result = Word.of(letters)

    if check and not equals(interpret(result, rules.table), interpret(word, rules.table)):
        msg = f"Rewritten word {result} differs from {word}"
        logger.error(msg)
        raise ContractViolation(msg)
    return result
