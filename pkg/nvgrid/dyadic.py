"""
Dyadic addresses, blocks, colored trees and tree-generated patterns.

An address is a string over {0, 1}; "" is the whole interval [0, 1). A block is
a tuple of n addresses, one per coordinate. All intervals are half-open.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from nvgrid.exceptions import DimMismatch, Gap, NotTreeGenerated, Overlap, PatternError
from nvgrid.utils.logger import conf_logger

logger = conf_logger(__name__, "E")

Address = str
Block = tuple[str, ...]
Point = tuple[Fraction, ...]


@dataclass(frozen=True, slots=True)
class Caret:
    color: int
    left: "ColoredTree"
    right: "ColoredTree"


# A leaf is None
ColoredTree = Caret | None
CoordTree = ColoredTree


def interval_from_address(addr: Address) -> tuple[Fraction, Fraction]:
    """Function return (lo, len) of the half-open interval denoted by address"""
    length = Fraction(1, 2 ** len(addr))
    return int(addr, 2) * length if addr else Fraction(0), length


def addresses_intersect(first: Address, second: Address) -> bool:
    return first.startswith(second) or second.startswith(first)


def block_intersection(first: Block, second: Block) -> Block | None:
    """Function return intersection of two blocks or None if they are disjoint"""
    if not all(addresses_intersect(a, b) for a, b in zip(first, second, strict=True)):
        return None
    return tuple(max(a, b, key=len) for a, b in zip(first, second, strict=True))


def block_measure(block: Block) -> Fraction:
    return Fraction(1, 2 ** sum(len(addr) for addr in block))


def root_block(dim: int) -> Block:
    return ("",) * dim


def halve(block: Block, coord: int) -> tuple[Block, Block]:
    """Function split block at the midline of one coordinate"""
    addr = block[coord]
    lower = (*block[:coord], addr + "0", *block[coord + 1 :])
    upper = (*block[:coord], addr + "1", *block[coord + 1 :])
    return lower, upper


def point_in_block(point: Point, block: Block) -> bool:
    for x, addr in zip(point, block, strict=True):
        lo, length = interval_from_address(addr)
        if not lo <= x < lo + length:
            return False
    return True


def leaf_count(tree: ColoredTree) -> int:
    return caret_count(tree) + 1


def caret_count(tree: ColoredTree) -> int:
    count = 0
    stack = [tree]
    while stack:
        node = stack.pop()
        if node is not None:
            count += 1
            stack.extend((node.left, node.right))
    return count


def tree_blocks(tree: ColoredTree, dim: int) -> list[Block]:
    """Function return blocks of tree leaves in left-to-right order"""
    blocks: list[Block] = []
    stack: list[tuple[ColoredTree, Block]] = [(tree, root_block(dim))]
    while stack:
        node, region = stack.pop()
        if node is None:
            blocks.append(region)
            continue
        lower, upper = halve(region, node.color)
        stack.append((node.right, upper))
        stack.append((node.left, lower))
    return blocks


def tree_colors(tree: ColoredTree) -> set[int]:
    colors: set[int] = set()
    stack = [tree]
    while stack:
        node = stack.pop()
        if node is not None:
            colors.add(node.color)
            stack.extend((node.left, node.right))
    return colors


def right_arm(tree: ColoredTree) -> list[Caret]:
    """Function return carets of the right arm (root and iterated upper children)"""
    arm: list[Caret] = []
    while tree is not None:
        arm.append(tree)
        tree = tree.right
    return arm


def all_right_tree(carets: int, color: int = 0) -> ColoredTree:
    tree: ColoredTree = None
    for _ in range(carets):
        tree = Caret(color, None, tree)
    return tree


def graft(tree: ColoredTree, below: ColoredTree) -> ColoredTree:
    """Function hang a copy of `below` from every leaf of `tree`"""
    if tree is None:
        return below
    return Caret(tree.color, graft(tree.left, below), graft(tree.right, below))


def composite_tree(parts: Sequence[CoordTree]) -> ColoredTree:
    """Function hang copies of later-coordinate trees below leaves of earlier ones"""
    result: ColoredTree = None
    for part in reversed(parts):
        result = graft(part, result)
    return result


def coord_tree(leaves: Iterable[Address], color: int) -> CoordTree:
    """Function build single-colored tree from a complete prefix-free set of leaves"""
    leaf_set = set(leaves)

    def build(prefix: str) -> CoordTree:
        if prefix in leaf_set:
            return None
        if len(prefix) > max(map(len, leaf_set)):
            msg = f"Leaf set {sorted(leaf_set)} is not a complete dyadic subdivision"
            raise PatternError(msg)
        return Caret(color, build(prefix + "0"), build(prefix + "1"))

    return build("")


def coord_tree_leaves(tree: CoordTree) -> list[Address]:
    """Function return leaf addresses of a single-colored tree in left-to-right order"""
    leaves: list[Address] = []
    stack: list[tuple[CoordTree, str]] = [(tree, "")]
    while stack:
        node, addr = stack.pop()
        if node is None:
            leaves.append(addr)
            continue
        stack.append((node.right, addr + "1"))
        stack.append((node.left, addr + "0"))
    return leaves


@dataclass(frozen=True)
class Pattern:
    """Tree-generated partition of the unit cube, blocks in canonical order"""

    dim: int
    blocks: tuple[Block, ...]
    tree: ColoredTree = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[Block]:
        return iter(self.blocks)

    def leaf_order(self) -> list[Block]:
        """Method return blocks in canonical tree leaf order"""
        return tree_blocks(self.tree, self.dim)

    def locate(self, block: Block) -> Block:
        """Method return the pattern block containing given block"""
        node, region = self.tree, root_block(self.dim)
        while node is not None:
            depth = len(region[node.color])
            if len(block[node.color]) <= depth:
                msg = f"Block {block} crosses a cut of pattern"
                raise PatternError(msg)
            lower, upper = halve(region, node.color)
            if block[node.color][depth] == "0":
                node, region = node.left, lower
            else:
                node, region = node.right, upper
        if any(not b.startswith(r) for b, r in zip(block, region, strict=True)):
            msg = f"Block {block} is not inside pattern block {region}"
            raise PatternError(msg)
        return region

    def locate_point(self, point: Point) -> Block:
        """Method return the pattern block containing given point"""
        node, region = self.tree, root_block(self.dim)
        while node is not None:
            lo, length = interval_from_address(region[node.color])
            lower, upper = halve(region, node.color)
            if point[node.color] < lo + length / 2:
                node, region = node.left, lower
            else:
                node, region = node.right, upper
        return region


def pattern_validate(blocks: Iterable[Block], dim: int | None = None) -> Pattern:
    """
    Function check that blocks form a tree-generated partition of the unit cube
    and return the canonical Pattern.
    """
    blocks = list(blocks)
    if dim is None:
        if not blocks:
            msg = "Empty block list covers nothing"
            logger.error(msg)
            raise Gap(msg)
        dim = len(blocks[0])
    if any(len(block) != dim for block in blocks):
        msg = f"Blocks of different dimensions, expected {dim}"
        logger.error(msg)
        raise DimMismatch(msg)

    total = sum((block_measure(block) for block in blocks), Fraction(0))
    if total < 1:
        msg = f"Blocks cover measure {total} < 1"
        logger.error(msg)
        raise Gap(msg)
    if total > 1:
        msg = f"Blocks cover measure {total} > 1"
        logger.error(msg)
        raise Overlap(msg)

    tree = _guillotine(root_block(dim), blocks, dim)
    return Pattern(dim=dim, blocks=tuple(sorted(blocks)), tree=tree)


def _guillotine(region: Block, blocks: list[Block], dim: int) -> ColoredTree:
    """Function find crossing-free midline cuts recursively, smallest coordinate first"""
    if len(blocks) == 1 and blocks[0] == region:
        return None
    if not blocks:
        # total measure is exactly 1 here, so an uncovered region implies an overlap
        msg = f"Region {region} is uncovered while blocks overlap elsewhere"
        logger.error(msg)
        raise Overlap(msg)
    for coord in range(dim):
        depth = len(region[coord])
        if all(len(block[coord]) > depth for block in blocks):
            lower: list[Block] = []
            upper: list[Block] = []
            for block in blocks:
                (lower if block[coord][depth] == "0" else upper).append(block)
            lower_region, upper_region = halve(region, coord)
            return Caret(
                coord,
                _guillotine(lower_region, lower, dim),
                _guillotine(upper_region, upper, dim),
            )

    for first, second in combinations(blocks, 2):
        if block_intersection(first, second) is not None:
            msg = f"Blocks {first} and {second} overlap"
            logger.error(msg)
            raise Overlap(msg)
    msg = f"No crossing-free midline cut for region {region}"
    logger.error(msg)
    raise NotTreeGenerated(msg)


def canonical_tree(pattern: Pattern) -> ColoredTree:
    return pattern.tree


def tree_pattern(tree: ColoredTree, dim: int) -> Pattern:
    return pattern_validate(tree_blocks(tree, dim), dim)


def common_refinement(
    first: Pattern,
    second: Pattern,
) -> tuple[Pattern, dict[Block, tuple[Block, Block]]]:
    """
    Function return the pattern of all nonempty intersections of blocks and
    the map cell -> (block of first, block of second).
    """
    if first.dim != second.dim:
        msg = f"Cannot refine patterns of dims {first.dim} and {second.dim}"
        logger.error(msg)
        raise DimMismatch(msg)
    cells: dict[Block, tuple[Block, Block]] = {}
    for block in first.blocks:
        for cell, other in _overlay(second.tree, root_block(second.dim), block):
            cells[cell] = (block, other)
    return pattern_validate(cells, first.dim), cells


def _overlay(
    tree: ColoredTree,
    region: Block,
    block: Block,
) -> Iterator[tuple[Block, Block]]:
    """Function yield (intersection, tree leaf block) for leaves meeting block"""
    if tree is None:
        yield tuple(max(r, b, key=len) for r, b in zip(region, block, strict=True)), region
        return
    depth = len(region[tree.color])
    lower, upper = halve(region, tree.color)
    if len(block[tree.color]) > depth:
        if block[tree.color][depth] == "0":
            yield from _overlay(tree.left, lower, block)
        else:
            yield from _overlay(tree.right, upper, block)
    else:
        yield from _overlay(tree.left, lower, block)
        yield from _overlay(tree.right, upper, block)


def product_pattern(parts: Sequence[CoordTree]) -> tuple[Pattern, ColoredTree]:
    """Function return grid pattern of coordinate trees and its composite tree"""
    for coord, part in enumerate(parts):
        if tree_colors(part) - {coord}:
            msg = f"Tree for coordinate {coord} carries other colors"
            logger.error(msg)
            raise DimMismatch(msg)
    composite = composite_tree(parts)
    return tree_pattern(composite, len(parts)), composite
