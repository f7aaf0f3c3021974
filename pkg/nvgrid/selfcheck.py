"""
Self-consistency suite run by `nvgrid check`.

A check returns None when it holds and a short failure detail otherwise.
Sizes scale with `trials`; `full=True` switches to the acceptance sizes.
"""

import random
from collections.abc import Callable

from nvgrid.dyadic import coord_tree
from nvgrid.element import (
    compose,
    equals,
    identity,
    invert,
    random_element,
    random_refinement,
)
from nvgrid.exceptions import NVGridError
from nvgrid.grid import canon
from nvgrid.metrics import (
    bounds_for,
    permutation_count_experiment,
    refinement_bound_suite,
    spine_grid,
)
from nvgrid.schemas import PydantModel, Word
from nvgrid.utils.logger import conf_logger
from nvgrid.words import (
    RuleTable,
    emit_positive,
    interpret,
    letter,
    normal_form,
    positive_diagram,
    rewrite_finite,
)

logger = conf_logger(__name__, "I")

GOLDEN_WORD = (
    "C1 C2 C3 A0 B0^2 B2^2 B4 A6^2 B6^2 B8^2 B10 B12^2 B14^2 B16 "
    "B18^2 B20^2 B22 B24 B26"
)
GOLDEN_VERTICAL = ("00", "0100", "0101", "011", "1")
GOLDEN_HORIZONTAL = ("00", "01", "100", "101", "110", "111")


class CheckResult(PydantModel):
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "ok  " if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


class Sizes(PydantModel):
    confluence_2: int
    confluence_3: int
    budget_2: int
    budget_3: int
    oracle_pairs: int
    axioms: int
    round_trips: int
    round_trip_budget: int
    bound_trials: int
    bound_budget: int
    rewrites: int

    @classmethod
    def scaled(cls, trials: int) -> "Sizes":
        return cls(
            confluence_2=trials,
            confluence_3=max(1, trials // 3),
            budget_2=8,
            budget_3=5,
            oracle_pairs=trials,
            axioms=max(1, trials // 3),
            round_trips=trials,
            round_trip_budget=5,
            bound_trials=trials,
            bound_budget=10,
            rewrites=trials,
        )

    @classmethod
    def acceptance(cls) -> "Sizes":
        return cls(
            confluence_2=300,
            confluence_3=100,
            budget_2=24,
            budget_3=15,
            oracle_pairs=300,
            axioms=100,
            round_trips=200,
            round_trip_budget=10,
            bound_trials=300,
            bound_budget=20,
            rewrites=100,
        )


Check = Callable[[int, Sizes], str | None]


def check_confluence(seed: int, sizes: Sizes) -> str | None:
    """canon is invariant under refinement, reduction order and (f g) g^-1"""
    rng = random.Random(seed)
    runs = ((2, sizes.confluence_2, sizes.budget_2), (3, sizes.confluence_3, sizes.budget_3))
    for dim, count, budget in runs:
        for _ in range(count):
            f = random_element(rng.getrandbits(32), dim, rng.randint(0, budget))
            expected = canon(f)
            for _ in range(5):
                refined = random_refinement(f, rng.getrandbits(32), rng.randint(1, 4))
                if canon(refined) != expected:
                    return f"refinement of {f.pairs}"
                if canon(refined, seed=rng.getrandbits(32)) != expected:
                    return f"reduction order of {f.pairs}"
            g = random_element(rng.getrandbits(32), dim, rng.randint(0, budget))
            if canon(compose(compose(f, g), invert(g))) != expected:
                return f"(f g) g^-1 for {f.pairs}"
    return None


def check_oracle(seed: int, sizes: Sizes) -> str | None:
    """canon-based equality agrees with the refinement oracle"""
    rng = random.Random(seed)
    for _ in range(sizes.oracle_pairs):
        dim = rng.randint(1, 3)
        f = random_element(rng.getrandbits(32), dim, rng.randint(0, 4))
        g = random_element(rng.getrandbits(32), dim, rng.randint(0, 4))
        same = random_refinement(f, rng.getrandbits(32), rng.randint(0, 4))
        round_trip = compose(compose(f, g), invert(g))
        for first, second in ((f, g), (f, same), (f, round_trip)):
            if (canon(first) == canon(second)) != equals(first, second):
                return f"{first.pairs} vs {second.pairs}"
    return None


def check_group_axioms(seed: int, sizes: Sizes) -> str | None:
    rng = random.Random(seed)
    for dim in (1, 2, 3):
        one = canon(identity(dim))
        for _ in range(sizes.axioms):
            f, g, h = (
                random_element(rng.getrandbits(32), dim, rng.randint(0, 5)) for _ in range(3)
            )
            if canon(compose(compose(f, g), h)) != canon(compose(f, compose(g, h))):
                return f"associativity in dim {dim}"
            if canon(compose(f, identity(dim))) != canon(f):
                return f"identity in dim {dim}"
            if canon(compose(f, invert(f))) != one or canon(compose(invert(f), f)) != one:
                return f"inverse in dim {dim}"
    return None


def check_round_trip(seed: int, sizes: Sizes) -> str | None:
    """interpret(normal_form(f)) == f and the word does not depend on the representative"""
    rng = random.Random(seed)
    for _ in range(sizes.round_trips):
        f = random_element(rng.getrandbits(32), 2, rng.randint(0, sizes.round_trip_budget))
        word = normal_form(f)
        if not equals(interpret(word), f):
            return f"{word} does not interpret back"
        refined = random_refinement(f, rng.getrandbits(32), rng.randint(1, 3))
        if normal_form(refined) != word:
            return f"representatives of {word} disagree"
    return None


def check_golden_word(seed: int, sizes: Sizes) -> str | None:  # noqa: ARG001
    diagram = positive_diagram(coord_tree(GOLDEN_VERTICAL, 0), coord_tree(GOLDEN_HORIZONTAL, 1))
    word = emit_positive(diagram)
    if str(word) != GOLDEN_WORD:
        return f"got {word}"
    if not equals(interpret(word), diagram.to_element()):
        return "word does not realize the diagram"
    return None


def check_dim_one(seed: int, sizes: Sizes) -> str | None:  # noqa: ARG001
    diagram = positive_diagram(coord_tree(GOLDEN_VERTICAL, 0), None)
    compact, verbose = str(emit_positive(diagram)), str(emit_positive(diagram, verbose=True))
    if compact != "A0 A1^2" or verbose != "A0 A1^2 A2^0 A3^0 A4^0":
        return f"{compact} / {verbose}"
    return None


def check_refinement_bound(seed: int, sizes: Sizes) -> str | None:
    for dim in (2, 3):
        report = refinement_bound_suite(seed, sizes.bound_trials, dim, sizes.bound_budget)
        if report.violations:
            return f"{report.violations} violations in dim {dim}"
    return None


def check_factorial(seed: int, sizes: Sizes) -> str | None:  # noqa: ARG001
    for leaf_counts, expected in (((2, 2), 24), ((2, 1), 2), ((1, 1), 1)):
        count = permutation_count_experiment(spine_grid(leaf_counts))
        if count.observed != expected or count.expected != expected:
            return f"grid {leaf_counts}: {count.observed} of {count.expected}"
    return None


def check_rewriting(seed: int, sizes: Sizes) -> str | None:
    rng = random.Random(seed)
    rules = RuleTable()
    for _ in range(sizes.rewrites):
        word = Word.of(
            letter(rng.choice("ABP"), rng.randint(0, 6), rng.choice((-2, -1, 1, 2)))
            for _ in range(rng.randint(1, 4))
        )
        # rewrite_finite compares both sides with the oracle itself
        rewritten = rewrite_finite(word, rules)
        if any(generator.index > 1 for generator in rewritten.letters):
            return f"{word} -> {rewritten}"
    if rules.rule_for("C", 0) is not None:
        return "C0 has a rewrite rule"
    return None


def check_length_bounds(seed: int, sizes: Sizes) -> str | None:  # noqa: ARG001
    bounds = bounds_for(8)
    if (bounds.lower, bounds.upper) != (3.0, 24.0):
        return f"M 8 gives ({bounds.lower}, {bounds.upper})"
    return None


CHECKS: dict[str, Check] = {
    "confluence": check_confluence,
    "oracle": check_oracle,
    "group axioms": check_group_axioms,
    "round trip": check_round_trip,
    "golden word": check_golden_word,
    "dim 1 exponents": check_dim_one,
    "refinement bound": check_refinement_bound,
    "factorial count": check_factorial,
    "rewriting": check_rewriting,
    "length bounds": check_length_bounds,
}


def run_checks(seed: int = 0, trials: int = 20, *, full: bool = False) -> list[CheckResult]:
    sizes = Sizes.acceptance() if full else Sizes.scaled(trials)
    results: list[CheckResult] = []
    for name, check in CHECKS.items():
        try:
            detail = check(seed, sizes)
        except NVGridError as e:
            logger.exception("Check %s raised", name)
            detail = repr(e)
        result = CheckResult(name=name, passed=detail is None, detail=detail or "")
        logger.debug("%s", result)
        results.append(result)
    return results
