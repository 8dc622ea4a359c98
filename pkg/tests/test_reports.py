import pytest

from lpsections.errors import DomainError
from lpsections.reports import REPORTS, ReportRow, row, run_report


def test_row_relations():
    assert row("a", 1.0, 1.05, tol=0.1).passed
    assert not row("a", 1.0, 1.2, tol=0.1).passed
    assert row("b", 1.0, 2.0, ">").passed and not row("b", 1.0, 0.5, ">").passed
    assert row("c", 1.0, 0.5, "<").passed
    assert row("d", (0.1, 0.2), 0.15, "in").passed and not row("d", (0.1, 0.2), 0.25, "in").passed
    with pytest.raises(DomainError):
        row("e", 1.0, 1.0, "~")


def test_row_roundtrip():
    r = row("d", (0.1, 0.2), 0.15, "in")
    assert ReportRow.from_dict(r.to_dict()) == r


def test_unknown_report():
    with pytest.raises(DomainError, match="critical-exponents"):
        run_report("missing")


@pytest.mark.parametrize("report_id", ["critical-exponents", "constants", "hp-deriv"])
def test_cheap_reports_pass(report_id):
    rows = run_report(report_id)
    assert rows and all(r.passed for r in rows)


def test_registry_ids():
    assert set(REPORTS) >= {"critical-exponents", "conjecture-sections", "np-margins"}
