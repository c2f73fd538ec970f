"""恒等式校验套件"""

import pytest

from src.core import verification
from src.utils.errors import VerificationError


@pytest.mark.parametrize("name", [
    "nonuniqueness_identity", "cnot_ghz_preparation", "preposition", "embed_compose_commute",
    "single_qubit_locality", "channel_dependence", "sampling_frequencies", "capacity_monotone",
])
def test_single_checks_pass(name):
    result = verification.run_check(name)
    assert result.passed, result.detail
    assert result.seconds >= 0


def test_failing_check_is_isolated(monkeypatch):
    def boom():
        raise VerificationError("broken")

    monkeypatch.setitem(verification.CHECKS, "boom", boom)
    results = verification.run_verification(["boom", "cnot_ghz_preparation"], max_workers=2)
    assert [r.name for r in results] == ["boom", "cnot_ghz_preparation"]
    assert not results[0].passed
    assert "broken" in results[0].detail
    assert results[1].passed


def test_unknown_check_rejected():
    with pytest.raises(VerificationError):
        verification.run_check("no_such_check")


def test_full_suite_passes():
    results = verification.run_verification()
    assert len(results) == len(verification.CHECKS)
    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert not failed
