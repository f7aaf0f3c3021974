import pytest

from nvgrid.element import identity
from nvgrid.exceptions import CapExceeded, InvalidParameter
from nvgrid.metrics import (
    bounds_for,
    derive_seed,
    length_bounds,
    permutation_count_experiment,
    refinement_bound_suite,
    render_bounds,
    render_permutations,
    render_report,
    spine_grid,
)
from nvgrid.schemas import ExperimentReport


@pytest.mark.parametrize(
    "caret_count, lower, upper",
    [(0, 0.0, 0.0), (1, 0.0, 0.0), (2, 1.0, 2.0), (8, 3.0, 24.0), (16, 4.0, 64.0)],
)
def test_bounds_for(caret_count, lower, upper):
    bounds = bounds_for(caret_count)
    assert (bounds.lower, bounds.upper) == (lower, upper)


def test_length_bounds_of_identity():
    bounds = length_bounds(identity(2))
    assert (bounds.M, bounds.lower, bounds.upper, bounds.max_coord_carets) == (0, 0.0, 0.0, 0)


def test_length_bounds_of_letter(bottom_to_left):
    bounds = length_bounds(bottom_to_left)
    assert bounds.M == 1
    assert bounds.max_coord_carets == 1


def test_sub_seeds_are_stable():
    assert derive_seed(0, 1) == derive_seed(0, 1)
    assert derive_seed(0, 1) != derive_seed(1, 0)


def test_zero_budget_gives_trivial_elements():
    report = refinement_bound_suite(seed=3, trials=10, dim=2, caret_budget=0)
    assert all(record.M == 0 and record.c == 0 for record in report.records)
    assert report.violations == 0
    assert report.max_ratio == 1.0


def test_suite_is_reproducible():
    first = refinement_bound_suite(seed=9, trials=12, dim=2, caret_budget=8)
    second = refinement_bound_suite(seed=9, trials=12, dim=2, caret_budget=8)
    assert first == second
    assert render_report(first) == render_report(second)
    assert first.violations == 0
    assert all(record.lower <= record.upper for record in first.records)


def test_report_aggregates_are_validated():
    report = refinement_bound_suite(seed=1, trials=3, dim=2, caret_budget=4)
    data = report.model_dump()
    data["violations"] = 2
    with pytest.raises(ValueError, match="violations"):
        ExperimentReport.model_validate(data)


@pytest.mark.parametrize("trials, workers", [(-1, 1), (3, 0)])
def test_suite_rejects_bad_parameters(trials, workers):
    with pytest.raises(InvalidParameter):
        refinement_bound_suite(seed=0, trials=trials, dim=2, caret_budget=3, workers=workers)


def test_worker_pool_matches_serial_run():
    serial = refinement_bound_suite(seed=5, trials=6, dim=3, caret_budget=5)
    pooled = refinement_bound_suite(seed=5, trials=6, dim=3, caret_budget=5, workers=2)
    assert serial == pooled


def test_csv_report():
    report = refinement_bound_suite(seed=2, trials=2, dim=2, caret_budget=0)
    lines = render_report(report, "csv").splitlines()
    assert lines[0] == "trial,c,M,lower,upper,verdict"
    assert lines[1:] == ["0,0,0,0.000000,0.000000,ok", "1,0,0,0.000000,0.000000,ok"]


def test_text_report_footer():
    report = refinement_bound_suite(seed=2, trials=2, dim=2, caret_budget=0)
    lines = render_report(report).splitlines()
    assert lines[-2:] == ["violations 0", "max_ratio 1.000000"]


@pytest.mark.parametrize(
    "leaf_counts, expected",
    [((1, 1), 1), ((2, 1), 2), ((1, 2), 2), ((2, 2), 24), ((3, 1), 6)],
)
def test_permutation_count(leaf_counts, expected):
    count = permutation_count_experiment(spine_grid(leaf_counts))
    assert count.expected == count.observed == expected
    assert count.leaf_counts == leaf_counts


def test_permutation_cap():
    with pytest.raises(CapExceeded):
        permutation_count_experiment(spine_grid((2, 2)), cap=3)


def test_render_small_outputs():
    assert render_bounds(bounds_for(8)).splitlines() == [
        "M 8",
        "lower 3.000000",
        "upper 24.000000",
        "m 0",
    ]
    text = render_permutations(permutation_count_experiment(spine_grid((2, 1))))
    assert text.splitlines() == ["grid 2x1 cells 2", "expected 2", "observed 2", "ok"]


@pytest.mark.slow
def test_refinement_bound_at_acceptance_size():
    report = refinement_bound_suite(seed=0, trials=300, dim=2, caret_budget=20)
    assert report.violations == 0
