import random

import pytest

from power_graph_variants.base import checks
from power_graph_variants.base.catalog import preset
from power_graph_variants.base.checks import (
    CHECKS,
    SUITE,
    check_boxtimes,
    check_growth,
    check_lift,
    check_transfer,
    check_twins,
    predicted_boundary_blocks,
    run_check,
    run_criterion,
    run_suite,
    suite_summary,
    transfer_family,
)
from power_graph_variants.base.powergraph import build
from power_graph_variants.base.types import (
    FULL_WINDOW,
    CheckReport,
    InvalidWindow,
    Profile,
    Variant,
    WindowSpec,
)


@pytest.mark.unit
@pytest.mark.parametrize(
    ("bound", "want"),
    (
        [20, [frozenset({8, -8, 16, -16})]],
        [30, []],
        [50, []],
        [5, [frozenset({2, -2, 4, -4})]],
    ),
)
def test_predicted_boundary_blocks(bound, want):
    got = predicted_boundary_blocks(bound)
    assert got == want


@pytest.mark.unit
def test_check_twins_reports_boundary_blocks(integers):
    passed, evidence = check_twins(integers, WindowSpec(bound=20))
    assert passed
    assert evidence["boundary_blocks"] == [["8", "-8", "16", "-16"]]
    assert evidence["matches_integers"]


@pytest.mark.unit
@pytest.mark.parametrize(
    ("name", "group", "window", "want"),
    (
        ["isolated", "integers", WindowSpec(bound=10), True],
        ["isolated", "z6", FULL_WINDOW, True],
        ["variants", "q8", FULL_WINDOW, True],
        ["twins", "integers", WindowSpec(bound=30), True],
        ["orientation", "integers", WindowSpec(bound=10), True],
        ["reverse-growth", "integers", WindowSpec(bound=6), True],
        ["doubling", "z-inv-2", WindowSpec(bound=2), True],
        ["locally-cyclic", "heisenberg", WindowSpec(bound=1), True],
    ),
)
def test_run_check(name, group, window, want):
    report = run_check(name, preset(group), window)
    assert report.check == name
    assert report.error is None
    assert report.passed == want


@pytest.mark.unit
def test_run_check_is_q():
    report = run_check("is-q", preset("height-one"), FULL_WINDOW)
    assert report.passed
    assert report.evidence["is_q"] is False
    assert report.evidence["witness_prime"] == 2
    assert report.variant is None


@pytest.mark.unit
def test_run_check_records_errors():
    report = run_check("phi", preset("integers"), WindowSpec(bound=3))
    assert not report.passed
    assert report.error.startswith("UnsupportedFamily")
    assert '"pass":false' in report.to_json_line().replace(" ", "")


@pytest.mark.unit
def test_run_check_raises_configuration_errors():
    with pytest.raises(InvalidWindow):
        run_check("isolated", preset("heisenberg"), FULL_WINDOW)


@pytest.mark.unit
def test_every_check_has_a_description():
    assert all(check.description for check in CHECKS.values())


@pytest.mark.unit
def test_structural_checks_on_small_windows(integers, z6):
    window = WindowSpec(bound=6)
    passed, evidence = check_boxtimes(integers, window)
    assert passed
    assert evidence["components"] == 1
    assert check_transfer(integers, window, seed=3)[0]
    passed, evidence = check_growth(integers, window, positive_x=True)
    assert passed
    assert evidence["disagreements"] == 0
    passed, evidence = check_lift(z6, FULL_WINDOW, seed=1, cases=10)
    assert passed
    assert evidence["cases"] == 10


@pytest.mark.unit
def test_transfer_family_on_closed_rational_windows(rationals, integers):
    bundle = build(rationals, WindowSpec(bound=2), Variant.ZPM)
    family = transfer_family(bundle, random.Random(0))
    assert set(family) == {
        "identity",
        "inversion",
        "pair-swap",
        "phi-1",
        "phi-1-inversion",
        "phi-1-pair-swap",
    }
    bundle = build(integers, WindowSpec(bound=4), Variant.ZPM)
    assert set(transfer_family(bundle, random.Random(0))) == {
        "identity",
        "inversion",
        "pair-swap",
    }


@pytest.mark.unit
def test_run_suite_subset():
    names = ["10-rationals-detection", "03-integer-twin-signature"]
    reports = run_suite(Profile.QUICK, names=names)
    assert [r.check for r in reports] == sorted(names)
    assert all(r.passed for r in reports)
    detection = reports[1]
    assert detection.evidence["detected"] == ["rationals@full"]
    assert "seconds" in detection.evidence


@pytest.mark.unit
def test_run_criterion_reports_exceptions(monkeypatch):
    def broken(profile, seed):
        raise RuntimeError("boom")

    monkeypatch.setitem(SUITE, "03-integer-twin-signature", broken)
    report = run_criterion("03-integer-twin-signature", Profile.QUICK, 0)
    assert not report.passed
    assert "RuntimeError: boom" in report.error
    assert "seconds" in report.evidence


@pytest.mark.unit
def test_build_determinism_criterion():
    report = checks.build_determinism(Profile.QUICK, 0)
    assert report.passed
    assert "integers@10" in report.evidence


@pytest.mark.unit
def test_suite_summary():
    reports = [
        CheckReport(check="01-a", group="g", window="1", passed=True),
        CheckReport(check="02-b", group="g", window="1", passed=False),
        CheckReport(check="03-c", group="g", window="1", passed=False),
    ]
    reports[0].evidence["seconds"] = 1.5
    got = suite_summary(reports, Profile.QUICK)
    assert got == {
        "profile": "quick",
        "passed": False,
        "first_failure": "02-b",
        "criteria": {"01-a": True, "02-b": False, "03-c": False},
        "seconds": 1.5,
    }
