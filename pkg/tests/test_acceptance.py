"""Every acceptance criterion at full scale; prints one PASS/FAIL line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""
import pytest

from kazhdan.acceptance import CRITERIA, Scale, run_criterion


@pytest.mark.parametrize("number", [num for num, *_ in CRITERIA], ids=[name.replace(" ", "_") for _, name, *_ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number, Scale())
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.within_time, f"took {result.seconds:.1f}s, limit {result.limit_seconds:.0f}s"
