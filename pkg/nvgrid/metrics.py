"""
Word-length bounds and counting experiments.

The word length |x| itself is never computed. For the caret count M of the
reduced diagram the bracket log M <= |x| <= M log M holds up to unknown
multiplicative constants, reported here with unit constants.
"""

import hashlib
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from itertools import permutations
from pathlib import Path
from typing import Literal

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from config import env
from nvgrid.dyadic import CoordTree, all_right_tree, leaf_count, product_pattern
from nvgrid.element import Element, element_from_lists, random_element
from nvgrid.exceptions import CapExceeded, InvalidParameter
from nvgrid.grid import canon, max_coord_carets
from nvgrid.schemas import ExperimentReport, LengthBounds, PermutationCount, TrialRecord
from nvgrid.utils.logger import conf_logger

logger = conf_logger(__name__, "E")

TEMPLATES_DIR = Path(__file__).parent / "templates"


def _log2(value: int) -> float:
    return math.log2(value) if value > 1 else 0.0


def bounds_for(caret_count: int, coord_carets: int = 0) -> LengthBounds:
    lower = _log2(caret_count)
    return LengthBounds(
        M=caret_count,
        lower=lower,
        upper=caret_count * lower,
        max_coord_carets=coord_carets,
    )


def length_bounds(element: Element) -> LengthBounds:
    diagram = canon(element)
    return bounds_for(diagram.caret_count, max_coord_carets(diagram))


def derive_seed(seed: int, trial: int) -> int:
    """Function return sub-seed of a trial, independent of execution order"""
    digest = hashlib.sha256(f"{seed}:{trial}".encode()).hexdigest()
    return int(digest[:16], 16)


def run_trial(seed: int, dim: int, caret_budget: int, trial: int) -> TrialRecord:
    sub_seed = derive_seed(seed, trial)
    element = random_element(sub_seed, dim, caret_budget)
    carets = len(element) - 1
    diagram = canon(element)
    bounds = bounds_for(diagram.caret_count, max_coord_carets(diagram))
    capacity = (carets + 1) ** dim
    return TrialRecord(
        trial=trial,
        seed=sub_seed,
        c=carets,
        M=bounds.M,
        lower=bounds.lower,
        upper=bounds.upper,
        max_coord_carets=bounds.max_coord_carets,
        ratio=(bounds.M + 1) / capacity,
        verdict="ok" if bounds.M + 1 <= capacity else "violation",
    )


def refinement_bound_suite(
    seed: int,
    trials: int,
    dim: int,
    caret_budget: int,
    workers: int = 1,
) -> ExperimentReport:
    """
    Function check M + 1 <= (c + 1)^dim on random elements built from c-caret
    diagrams. Trials are independent; workers > 1 runs them in a process pool.
    """
    if trials < 0 or workers < 1:
        msg = f"Suite needs trials >= 0 and workers >= 1, got {trials}, {workers}"
        logger.error(msg)
        raise InvalidParameter(msg)
    logger.debug(
        "Refinement suite seed=%s trials=%s dim=%s budget=%s", seed, trials, dim, caret_budget,
    )
    task = partial(run_trial, seed, dim, caret_budget)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(task, range(trials)))
    else:
        records = [task(trial) for trial in range(trials)]
    records.sort(key=lambda record: record.trial)

    violations = sum(record.verdict == "violation" for record in records)
    if violations:
        logger.error("Refinement bound violated in %s trials", violations)
    return ExperimentReport(
        seed=seed,
        trials=trials,
        dim=dim,
        caret_budget=caret_budget,
        records=records,
        violations=violations,
        max_ratio=max((record.ratio for record in records), default=0.0),
    )


def spine_grid(leaf_counts: Sequence[int]) -> list[CoordTree]:
    """Function return all-right coordinate trees with given leaf counts"""
    return [all_right_tree(count - 1, coord) for coord, count in enumerate(leaf_counts)]


def permutation_count_experiment(
    grid: Sequence[CoordTree],
    cap: int = env.PERMUTATION_CAP,
) -> PermutationCount:
    """
    Function match the grid pattern with itself by every permutation of cells
    and count distinct canonical forms. Distinct permutations never collapse,
    so observed equals cells!.
    """
    pattern, _ = product_pattern(grid)
    cells = pattern.leaf_order()
    if len(cells) > cap:
        msg = f"Grid has {len(cells)} cells, cap is {cap}"
        logger.error(msg)
        raise CapExceeded(msg)

    seen = {
        canon(element_from_lists(cells, [cells[k] for k in perm]))
        for perm in permutations(range(len(cells)))
    }
    leaf_counts = tuple(leaf_count(tree) for tree in grid)
    logger.debug("Permutation experiment on %s: %s distinct forms", leaf_counts, len(seen))
    return PermutationCount(
        leaf_counts=leaf_counts,
        cells=len(cells),
        expected=math.factorial(len(cells)),
        observed=len(seen),
    )


def _environment() -> Environment:
    environment = Environment(
        loader=FileSystemLoader(TEMPLATES_DIR),
        autoescape=False,  # noqa: S701
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    environment.filters["fixed"] = lambda value: f"{value:.6f}"
    return environment


def render_report(report: ExperimentReport, fmt: Literal["text", "csv"] = "text") -> str:
    template = "report.jinja" if fmt == "text" else "report_csv.jinja"
    return _environment().get_template(template).render(report=report)


def render_permutations(count: PermutationCount) -> str:
    return _environment().get_template("permutations.jinja").render(count=count)


def render_bounds(bounds: LengthBounds) -> str:
    return _environment().get_template("bounds.jinja").render(bounds=bounds)
