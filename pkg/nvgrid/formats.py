"""
Text formats.

Element files (.nve):
    dim 2
    # comment
    0,_ -> _,0
    1,_ -> _,1
Word files (.nvw) hold letters separated by whitespace, e.g. `A0 B3^-2 C1`.
Rule files hold `LHS := RHS` lines. "_" marks the empty address.
"""

import re
from collections.abc import Iterable
from fractions import Fraction

from nvgrid.dyadic import Block, Point
from nvgrid.element import Element, element_new
from nvgrid.exceptions import ParseError
from nvgrid.grid import GridDiagram
from nvgrid.schemas import Generator, RewriteRule, Word
from nvgrid.utils.logger import conf_logger

logger = conf_logger(__name__, "E")

EMPTY_ADDRESS = "_"
LETTER_RE = re.compile(r"^([ABCPQ])(\d+)(?:\^([+-]?\d+))?$")
ADDRESS_RE = re.compile(r"^[01]+$")
DIM_RE = re.compile(r"^dim\s+(\d+)$")


def _fail(msg: str) -> ParseError:
    logger.error(msg)
    return ParseError(msg)


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_block(text: str, dim: int | None = None) -> Block:
    addresses = [part.strip() for part in text.split(",")]
    block: list[str] = []
    for addr in addresses:
        if addr == EMPTY_ADDRESS:
            block.append("")
        elif ADDRESS_RE.match(addr):
            block.append(addr)
        else:
            raise _fail(f"Bad address {addr!r} in block {text!r}")
    if dim is not None and len(block) != dim:
        raise _fail(f"Block {text!r} has {len(block)} coordinates, expected {dim}")
    return tuple(block)


def render_block(block: Block) -> str:
    return ",".join(addr or EMPTY_ADDRESS for addr in block)


def parse_element(text: str) -> Element:
    """Function parse .nve text into a validated Element"""
    lines = list(_content_lines(text))
    if not lines:
        raise _fail("Element file is empty")
    number, header = lines[0]
    match = DIM_RE.match(header)
    if match is None:
        raise _fail(f"Line {number}: expected `dim n`, got {header!r}")
    dim = int(match.group(1))
    if dim < 1:
        raise _fail(f"Line {number}: dimension must be positive")

    pairs: list[tuple[Block, Block]] = []
    for number, line in lines[1:]:
        if line.count("->") != 1:
            raise _fail(f"Line {number}: expected `src -> tgt`, got {line!r}")
        src, tgt = line.split("->")
        pairs.append((parse_block(src.strip(), dim), parse_block(tgt.strip(), dim)))
    return element_new(pairs)


def render_element(element: Element) -> str:
    lines = [f"dim {element.dim}"]
    lines.extend(f"{render_block(src)} -> {render_block(tgt)}" for src, tgt in element.pairs)
    return "\n".join(lines) + "\n"


def render_diagram(diagram: GridDiagram) -> str:
    """Function render canonical form: header then cells in composite leaf order"""
    counts = ",".join(str(count) for count in diagram.leaf_counts)
    lines = [
        f"# M {diagram.cell_count - 1} leaves {counts}",
        f"dim {diagram.dim}",
    ]
    for cell, image in zip(diagram.cells, diagram.images, strict=True):
        src, tgt = (cell, image) if diagram.side == "source" else (image, cell)
        lines.append(f"{render_block(src)} -> {render_block(tgt)}")
    return "\n".join(lines) + "\n"


def parse_point(text: str, dim: int | None = None) -> Point:
    """Function parse `3/8,5/8` into exact fractions"""
    try:
        point = tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise _fail(f"Bad point {text!r}") from e
    for x in point:
        if x.denominator & (x.denominator - 1):
            raise _fail(f"Coordinate {x} of point {text!r} is not dyadic")
    if dim is not None and len(point) != dim:
        raise _fail(f"Point {text!r} has {len(point)} coordinates, expected {dim}")
    return point


def render_point(point: Point) -> str:
    return ",".join(str(x) for x in point)


def parse_letter(token: str) -> Generator:
    match = LETTER_RE.match(token)
    if match is None:
        raise _fail(f"Bad letter {token!r}")
    family, index, exponent = match.groups()
    return Generator(
        family=family,  # pyright: ignore [reportArgumentType]
        index=int(index),
        exponent=int(exponent) if exponent is not None else 1,
    )


def parse_word(text: str) -> Word:
    """Function parse whitespace separated letters; empty text is the identity"""
    tokens = [token for _, line in _content_lines(text) for token in line.split()]
    return Word(letters=tuple(parse_letter(token) for token in tokens))


def parse_rules(text: str, origin: str = "file") -> list[RewriteRule]:
    rules: list[RewriteRule] = []
    for number, line in _content_lines(text):
        if line.count(":=") != 1:
            raise _fail(f"Line {number}: expected `LHS := RHS`, got {line!r}")
        lhs, rhs = (part.strip() for part in line.split(":="))
        rules.append(
            RewriteRule(lhs=parse_letter(lhs), rhs=parse_word(rhs), origin=f"{origin}:{number}"),
        )
    return rules
