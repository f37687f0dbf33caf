"""The ten acceptance criteria, each with its own time limit."""
import pytest

from dagwitt.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance_log):
    result = run_criterion(number, seed=0)
    print(result.line)
    acceptance_log(result.line)
    assert result.passed, result.line
