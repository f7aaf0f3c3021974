"""
Elements of nV as bijections between two equal-size patterns.

Cell i of the source maps onto block i of the target by the coordinate-wise
affine map, which on addresses is a prefix replacement. Composition is
diagrammatic: compose(f, g) applies f first.
"""

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from nvgrid.dyadic import (
    Block,
    Pattern,
    Point,
    common_refinement,
    halve,
    interval_from_address,
    pattern_validate,
    root_block,
)
from nvgrid.exceptions import CountMismatch, DimMismatch, Gap, InvalidParameter, PatternError
from nvgrid.utils.logger import conf_logger

logger = conf_logger(__name__, "E")


@dataclass(frozen=True)
class Element:
    dim: int
    pairs: tuple[tuple[Block, Block], ...]
    source: Pattern = field(compare=False, repr=False)
    target: Pattern = field(compare=False, repr=False)
    forward: dict[Block, Block] = field(compare=False, repr=False)
    backward: dict[Block, Block] = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def image(self, block: Block) -> Block:
        """Method return affine image of a block lying inside one source cell"""
        cell = self.source.locate(block)
        return transport(block, cell, self.forward[cell])

    def preimage(self, block: Block) -> Block:
        cell = self.target.locate(block)
        return transport(block, cell, self.backward[cell])


def transport(block: Block, inside: Block, onto: Block) -> Block:
    """Function carry block lying in `inside` to `onto` by prefix replacement"""
    return tuple(
        new + addr[len(old) :] for addr, old, new in zip(block, inside, onto, strict=True)
    )


def element_new(pairs: Iterable[tuple[Block, Block]]) -> Element:
    """Function validate (source block, target block) pairs and build Element"""
    pairs = sorted(pairs)
    if not pairs:
        msg = "Element needs at least one pair"
        logger.error(msg)
        raise Gap(msg)
    dim = len(pairs[0][0])
    for src, tgt in pairs:
        if len(src) != dim or len(tgt) != dim:
            msg = f"Pair {src} -> {tgt} does not have dimension {dim}"
            logger.error(msg)
            raise DimMismatch(msg)

    source = pattern_validate((src for src, _ in pairs), dim)
    target = pattern_validate((tgt for _, tgt in pairs), dim)
    forward = dict(pairs)
    backward = {tgt: src for src, tgt in pairs}
    return Element(
        dim=dim,
        pairs=tuple(pairs),
        source=source,
        target=target,
        forward=forward,
        backward=backward,
    )


def element_from_lists(sources: Sequence[Block], targets: Sequence[Block]) -> Element:
    """Function build element matching sources[i] to targets[i]"""
    if len(sources) != len(targets):
        msg = f"Source has {len(sources)} blocks, target has {len(targets)}"
        logger.error(msg)
        raise CountMismatch(msg)
    return element_new(zip(sources, targets, strict=True))


def identity(dim: int) -> Element:
    return element_new([(root_block(dim), root_block(dim))])


def check_dims(first: Element, second: Element) -> None:
    if first.dim != second.dim:
        msg = f"Elements of dims {first.dim} and {second.dim}"
        logger.error(msg)
        raise DimMismatch(msg)


def compose(first: Element, second: Element) -> Element:
    """Function return element applying `first`, then `second`"""
    check_dims(first, second)
    _, cells = common_refinement(first.target, second.source)
    pairs = [
        (
            transport(cell, target_block, first.backward[target_block]),
            transport(cell, source_block, second.forward[source_block]),
        )
        for cell, (target_block, source_block) in cells.items()
    ]
    return element_new(pairs)


def invert(element: Element) -> Element:
    return element_new((tgt, src) for src, tgt in element.pairs)


def evaluate(element: Element, point: Point) -> Point:
    """Function apply element to an exact dyadic point"""
    if len(point) != element.dim:
        msg = f"Point {point} is not of dimension {element.dim}"
        logger.error(msg)
        raise DimMismatch(msg)
    if any(not 0 <= x < 1 for x in point):
        msg = f"Point {point} is outside the unit cube"
        logger.error(msg)
        raise PatternError(msg)

    src = element.source.locate_point(point)
    tgt = element.forward[src]
    result: list[Fraction] = []
    for x, src_addr, tgt_addr in zip(point, src, tgt, strict=True):
        src_lo, src_len = interval_from_address(src_addr)
        tgt_lo, tgt_len = interval_from_address(tgt_addr)
        result.append(tgt_lo + (x - src_lo) * tgt_len / src_len)
    return tuple(result)


def equals(first: Element, second: Element) -> bool:
    """Function compare induced maps cell-by-cell on the common source refinement"""
    check_dims(first, second)
    _, cells = common_refinement(first.source, second.source)
    return all(
        transport(cell, own, first.forward[own]) == transport(cell, other, second.forward[other])
        for cell, (own, other) in cells.items()
    )


def _random_blocks(rng: random.Random, dim: int, carets: int) -> list[Block]:
    """Function grow a random partition by uniform leaf and color choice"""
    leaves = [root_block(dim)]
    for _ in range(carets):
        index = rng.randrange(len(leaves))
        leaves[index : index + 1] = halve(leaves[index], rng.randrange(dim))
    return leaves


def random_element(seed: int, dim: int, caret_budget: int) -> Element:
    """Function return deterministic random element for seed"""
    if dim < 1 or caret_budget < 0:
        msg = f"Random element needs dim >= 1 and budget >= 0, got {dim}, {caret_budget}"
        logger.error(msg)
        raise InvalidParameter(msg)
    rng = random.Random(seed)
    sources = _random_blocks(rng, dim, caret_budget)
    targets = _random_blocks(rng, dim, caret_budget)
    rng.shuffle(targets)
    logger.debug("Random element seed=%s dim=%s budget=%s", seed, dim, caret_budget)
    return element_from_lists(sources, targets)


def random_refinement(element: Element, seed: int, carets: int) -> Element:
    """Function return another representative of the same element with extra carets"""
    rng = random.Random(seed)
    pairs = list(element.pairs)
    for _ in range(carets):
        index = rng.randrange(len(pairs))
        coord = rng.randrange(element.dim)
        src, tgt = pairs[index]
        pairs[index : index + 1] = list(
            zip(halve(src, coord), halve(tgt, coord), strict=True),
        )
    return element_new(pairs)
