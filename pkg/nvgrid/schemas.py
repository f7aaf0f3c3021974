from collections.abc import Iterable
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

Family = Literal["A", "B", "C", "P", "Q"]


class PydantModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FrozenModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Generator(FrozenModel):
    family: Family
    index: int = Field(ge=0)
    exponent: int = 1

    def __str__(self) -> str:
        if self.exponent == 1:
            return f"{self.family}{self.index}"
        return f"{self.family}{self.index}^{self.exponent}"

    @property
    def base(self) -> tuple[str, int]:
        return self.family, self.index


class Word(FrozenModel):
    """
    Letters read left to right in diagrammatic order. Zero exponents are kept
    only by verbose renderings; `compact` drops them and merges adjacent powers.
    """

    letters: tuple[Generator, ...] = ()

    def __str__(self) -> str:
        return " ".join(str(letter) for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(letters=self.letters + other.letters)

    @classmethod
    def of(cls, letters: Iterable[Generator]) -> "Word":
        """Method build compact word: zero powers dropped, adjacent powers merged"""
        stack: list[Generator] = []
        for letter in letters:
            if letter.exponent == 0:
                continue
            if stack and stack[-1].base == letter.base:
                exponent = stack.pop().exponent + letter.exponent
                if exponent:
                    stack.append(letter.model_copy(update={"exponent": exponent}))
            else:
                stack.append(letter)
        return cls(letters=tuple(stack))

    def compact(self) -> "Word":
        return Word.of(self.letters)

    def inverse(self) -> "Word":
        return Word(
            letters=tuple(
                letter.model_copy(update={"exponent": -letter.exponent})
                for letter in reversed(self.letters)
            ),
        )

    def power(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else self.inverse()
        return Word.of(base.letters * abs(exponent))

    def length(self) -> int:
        return sum(abs(letter.exponent) for letter in self.letters)


class RewriteRule(FrozenModel):
    lhs: Generator
    rhs: Word
    origin: str = "default"

    def __str__(self) -> str:
        return f"{self.lhs} := {self.rhs}"


class LengthBounds(PydantModel):
    """Bracket log M <= |x| <= M log M with unit constants, logs base 2"""

    M: int = Field(ge=0)
    lower: float
    upper: float
    max_coord_carets: int = Field(ge=0)


class TrialRecord(PydantModel):
    trial: int
    seed: int
    c: int
    M: int
    lower: float
    upper: float
    max_coord_carets: int
    ratio: float
    verdict: Literal["ok", "violation"]


class ExperimentReport(PydantModel):
    seed: int
    trials: int
    dim: int
    caret_budget: int
    records: list[TrialRecord]
    violations: int
    max_ratio: float

    @model_validator(mode="after")
    def aggregates_match_records(self) -> Self:
        if len(self.records) != self.trials:
            msg = f"Report holds {len(self.records)} records for {self.trials} trials"
            raise ValueError(msg)
        violations = sum(record.verdict == "violation" for record in self.records)
        if violations != self.violations:
            msg = f"Report counts {self.violations} violations, records show {violations}"
            raise ValueError(msg)
        max_ratio = max((record.ratio for record in self.records), default=0.0)
        if max_ratio != self.max_ratio:
            msg = f"Report max ratio {self.max_ratio} differs from records {max_ratio}"
            raise ValueError(msg)
        return self


class PermutationCount(PydantModel):
    leaf_counts: tuple[int, ...]
    cells: int
    expected: int
    observed: int
