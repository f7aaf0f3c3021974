from collections.abc import Callable
from pathlib import Path

import pytest

from nvgrid.element import Element, element_new

IDENTITY_TEXT = "dim 2\n_,_ -> _,_\n"


@pytest.fixture
def halves_swap() -> Element:
    return element_new([(("0", ""), ("1", "")), (("1", ""), ("0", ""))])


@pytest.fixture
def bottom_to_left() -> Element:
    """Element of the letter C0"""
    return element_new([(("", "0"), ("0", "")), (("", "1"), ("1", ""))])


@pytest.fixture
def thompson_x0() -> Element:
    """Single-colored element acting as the classical x0 on the first coordinate"""
    return element_new(
        [(("00", ""), ("0", "")), (("01", ""), ("10", "")), (("1", ""), ("11", ""))],
    )


@pytest.fixture
def write(tmp_path: Path) -> Callable[[str, str], str]:
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
