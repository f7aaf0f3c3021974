"""
Grid tree-pair diagrams: gridding an element on one side and reducing the
coordinate trees until no caret can be removed. The reduced diagram is unique
per element and serves as its canonical form.
"""

import random
from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import StrEnum
from itertools import product

from nvgrid.dyadic import Block, ColoredTree, CoordTree, composite_tree, coord_tree
from nvgrid.element import Element, element_new, invert
from nvgrid.exceptions import PatternError
from nvgrid.utils.logger import conf_logger

logger = conf_logger(__name__, "E")


class Side(StrEnum):
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True)
class GridDiagram:
    """
    The gridded side is the product of one dyadic subdivision per coordinate.
    Cells run in composite-tree leaf order (coordinate 0 outermost) and
    images[i] is the block on the other side matched with cell i.
    """

    dim: int
    side: Side
    coord_leaves: tuple[tuple[str, ...], ...]
    images: tuple[Block, ...]

    @property
    def cells(self) -> list[Block]:
        return list(product(*self.coord_leaves))

    @property
    def cell_count(self) -> int:
        count = 1
        for leaves in self.coord_leaves:
            count *= len(leaves)
        return count

    @property
    def leaf_counts(self) -> tuple[int, ...]:
        return tuple(len(leaves) for leaves in self.coord_leaves)

    @property
    def coord_trees(self) -> list[CoordTree]:
        return [coord_tree(leaves, coord) for coord, leaves in enumerate(self.coord_leaves)]

    @property
    def composite_tree(self) -> ColoredTree:
        return composite_tree(self.coord_trees)

    def to_element(self) -> Element:
        if self.side is Side.SOURCE:
            return element_new(zip(self.cells, self.images, strict=True))
        return element_new(zip(self.images, self.cells, strict=True))


@dataclass(frozen=True)
class ReducedGridDiagram(GridDiagram):
    @property
    def caret_count(self) -> int:
        return self.cell_count - 1


def invert_diagram(diagram: GridDiagram) -> GridDiagram:
    """Function return the same diagram read as a diagram of the inverse element"""
    side = Side.TARGET if diagram.side is Side.SOURCE else Side.SOURCE
    return replace(diagram, side=side)


def _leaves_from_internal(internal: set[str]) -> list[str]:
    if not internal:
        return [""]
    return sorted(
        node + bit for node in internal for bit in "01" if node + bit not in internal
    )


def gridify(element: Element, side: Side = Side.SOURCE) -> GridDiagram:
    """Function extend every cut of one side until it runs the full length of the cube"""
    if side is Side.TARGET:
        return invert_diagram(gridify(invert(element), Side.SOURCE))

    coord_leaves: list[tuple[str, ...]] = []
    for coord in range(element.dim):
        internal = {
            block[coord][:depth]
            for block in element.source.blocks
            for depth in range(len(block[coord]))
        }
        coord_leaves.append(tuple(_leaves_from_internal(internal)))

    images = tuple(element.image(cell) for cell in product(*coord_leaves))
    logger.debug("Gridified element into leaf counts %s", [len(l) for l in coord_leaves])
    return GridDiagram(
        dim=element.dim,
        side=Side.SOURCE,
        coord_leaves=tuple(coord_leaves),
        images=images,
    )


class _GridState:
    """Mutable working copy of a grid diagram used while merging carets"""

    def __init__(self, diagram: GridDiagram) -> None:
        self.dim = diagram.dim
        self.leaves = [set(leaves) for leaves in diagram.coord_leaves]
        self.images = dict(zip(diagram.cells, diagram.images, strict=True))

    def exposed(self, coord: int) -> list[str]:
        leaves = self.leaves[coord]
        return [
            leaf[:-1] for leaf in leaves if leaf.endswith("0") and leaf[:-1] + "1" in leaves
        ]

    def _pairs(self, coord: int, parent: str) -> list[tuple[Block, Block, Block]]:
        axes: list[Sequence[str]] = [
            [parent] if axis == coord else sorted(leaves)
            for axis, leaves in enumerate(self.leaves)
        ]
        result = []
        for merged in product(*axes):
            lower = (*merged[:coord], parent + "0", *merged[coord + 1 :])
            upper = (*merged[:coord], parent + "1", *merged[coord + 1 :])
            result.append((merged, lower, upper))
        return result

    def reducible(self, coord: int, parent: str) -> bool:
        for _, lower, upper in self._pairs(coord, parent):
            low_image, up_image = self.images[lower], self.images[upper]
            for axis in range(self.dim):
                if axis != coord and low_image[axis] != up_image[axis]:
                    return False
            low_addr, up_addr = low_image[coord], up_image[coord]
            if not (
                low_addr
                and up_addr
                and low_addr[:-1] == up_addr[:-1]
                and low_addr[-1] == "0"
                and up_addr[-1] == "1"
            ):
                return False
        return True

    def merge(self, coord: int, parent: str) -> None:
        for merged, lower, upper in self._pairs(coord, parent):
            low_image = self.images.pop(lower)
            del self.images[upper]
            self.images[merged] = (
                *low_image[:coord],
                low_image[coord][:-1],
                *low_image[coord + 1 :],
            )
        self.leaves[coord] -= {parent + "0", parent + "1"}
        self.leaves[coord].add(parent)

    def freeze(self, side: Side) -> ReducedGridDiagram:
        coord_leaves = tuple(tuple(sorted(leaves)) for leaves in self.leaves)
        return ReducedGridDiagram(
            dim=self.dim,
            side=side,
            coord_leaves=coord_leaves,
            images=tuple(self.images[cell] for cell in product(*coord_leaves)),
        )


def reducible_caret(diagram: GridDiagram, coord: int, caret: str) -> bool:
    """
    Function check whether the exposed caret `caret` (address of its node) of
    coordinate tree `coord` can be removed without changing the element.
    """
    leaves = diagram.coord_leaves[coord]
    if caret + "0" not in leaves or caret + "1" not in leaves:
        msg = f"Caret {caret!r} of coordinate {coord} is not exposed"
        logger.error(msg)
        raise PatternError(msg)
    return _GridState(diagram).reducible(coord, caret)


def reduce(diagram: GridDiagram, seed: int | None = None) -> ReducedGridDiagram:
    """
    Function merge reducible exposed carets until none remains.
    Without seed coordinates are scanned round-robin, deepest carets first;
    with seed the merge order is random. The result does not depend on the order.
    """
    state = _GridState(diagram)
    if seed is None:
        changed = True
        while changed:
            changed = False
            for coord in range(state.dim):
                for parent in sorted(state.exposed(coord), key=lambda a: (-len(a), a)):
                    if state.reducible(coord, parent):
                        state.merge(coord, parent)
                        changed = True
    else:
        rng = random.Random(seed)
        while candidates := [
            (coord, parent)
            for coord in range(state.dim)
            for parent in sorted(state.exposed(coord))
            if state.reducible(coord, parent)
        ]:
            state.merge(*rng.choice(candidates))
    return state.freeze(diagram.side)


def canon(
    element: Element,
    side: Side = Side.SOURCE,
    seed: int | None = None,
) -> ReducedGridDiagram:
    """Function return the unique reduced grid diagram of element"""
    return reduce(gridify(element, side), seed)


def caret_count(diagram: ReducedGridDiagram) -> int:
    return diagram.caret_count


def max_coord_carets(diagram: GridDiagram) -> int:
    """Function return the largest caret count among coordinate trees"""
    return max(len(leaves) - 1 for leaves in diagram.coord_leaves)
