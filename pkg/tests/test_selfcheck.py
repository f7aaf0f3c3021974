import pytest

from nvgrid import selfcheck, words
from nvgrid.selfcheck import CHECKS, CheckResult, Sizes, check_oracle, check_rewriting, run_checks


@pytest.fixture(scope="module")
def sizes() -> Sizes:
    return Sizes.scaled(4)


def test_oracle_check_covers_round_trip_pairs(sizes, monkeypatch):
    compared = []
    original = selfcheck.equals

    def recording_equals(first, second):
        compared.append((first, second))
        return original(first, second)

    monkeypatch.setattr(selfcheck, "equals", recording_equals)
    assert check_oracle(3, sizes) is None
    assert len(compared) == 3 * sizes.oracle_pairs


def test_rewriting_check_logs_no_errors(sizes, monkeypatch):
    errors: list[str] = []
    monkeypatch.setattr(words.logger, "error", errors.append)
    assert check_rewriting(0, sizes) is None
    assert errors == []


def test_run_checks_reports_every_check():
    results = run_checks(seed=1, trials=2)
    assert [result.name for result in results] == list(CHECKS)
    assert all(result.passed for result in results)


def test_check_result_text():
    assert str(CheckResult(name="oracle", passed=True)) == "ok   oracle"
    assert str(CheckResult(name="oracle", passed=False, detail="x")) == "FAIL oracle: x"
