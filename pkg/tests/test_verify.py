import pytest

from conftest import canonical_group
from maxclass import cyclotomic, verify


@pytest.fixture(scope="module")
def clean():
    return verify.run_fixtures(seed=0)


def test_fixtures_pass(clean):
    assert clean.ok, clean.render()
    assert len(clean.checks) >= 40
    assert clean.render().rstrip().endswith(f"{len(clean.checks)}/{len(clean.checks)} checks passed")


def test_wrong_carry_is_detected(clean):
    verify.inject_fault("wrong-carry")
    try:
        faulty = verify.run_fixtures(seed=0)
    finally:
        verify.clear_faults()
    assert not faulty.ok
    failed = [c.name for c in faulty.checks if not c.passed]
    assert any("polynomial model" in name for name in failed)
    assert not cyclotomic._carry_override
    assert verify.run_fixtures(seed=0).ok


def test_unknown_fault():
    with pytest.raises(ValueError):
        verify.inject_fault("cosmic-ray")


def test_run_case():
    led = verify.run_case(canonical_group(5, 5, 7), seed=1)
    assert led.ok, led.render()


def test_ledger_records_exceptions():
    led = verify.Ledger()

    def boom():
        raise RuntimeError("x")

    led.run("explodes", boom)
    led.run("fine", lambda: (True, "ok"))
    assert not led.ok
    assert "[FAIL] explodes" in led.render() and "[PASS] fine" in led.render()
