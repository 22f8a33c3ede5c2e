import pytest

from coxkit.report import FAIL, PASS, SKIPPED, VerificationReport
from coxkit.verification import SECTIONS, run_section, verify_brink, verify_classification, verify_wlog


def test_classification_section():
    rep = verify_classification()
    assert rep.passed and len(rep.checks) == 6


def test_brink_section_across_seeds():
    for seed in (0, 1, 2):
        rep = verify_brink(seed=seed, samples=20)
        assert rep.passed, rep.render()


def test_wlog_section():
    rep = verify_wlog(seed=5, instances=50)
    assert rep.passed, rep.render()
    assert "50/50" in rep.checks[0].detail


def test_sections_registry():
    assert sorted(SECTIONS) == ["a2tilde", "amalgam", "brink", "classification", "wlog"]
    assert run_section("a2tilde").passed
    with pytest.raises(KeyError):
        run_section("nosuch")


def test_report_bookkeeping():
    rep = VerificationReport("demo")
    rep.add("one", True)
    rep.skip("two", "not decidable here")
    assert rep.overall == PASS and len(rep.counted()) == 1
    rep.run("three", lambda: 1 / 0)
    assert rep.overall == FAIL and rep.checks[2].detail.startswith("ZeroDivisionError")
    assert [c.status for c in rep.checks] == [PASS, SKIPPED, FAIL]
    assert rep.records().splitlines()[1] == "demo\t2\tskipped\ttwo\tnot decidable here"
    assert rep.render().splitlines()[-1] == "overall: fail (1/2 checks passed)"
    with pytest.raises(ValueError):
        rep.skip("four", "")
