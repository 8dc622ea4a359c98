import csv
import io
import json
import math

import pytest

from lpsections import ball_inequality as bi
from lpsections.cli import EXIT_INDETERMINATE, EXIT_OK, EXIT_VALIDATION, main, parse_direction, read_config
from lpsections.constants import CriticalConstants
from lpsections.errors import ValidationError
from lpsections.gamma_p import BumpProfile
from lpsections.reports import ReportRow
from lpsections.sections import CandidateRow, Direction, SectionEstimate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", *argv)
    assert code == EXIT_OK
    return json.loads(out)


def test_constants_json_roundtrip(capsys):
    env = run_json(capsys, "constants", "--p", "26.265")
    assert env["command"] == "constants" and env["kind"] == "CriticalConstants"
    cc = CriticalConstants.from_dict(env["records"][0])
    assert cc.c_p == pytest.approx(0.1609, abs=5e-4) and cc.d_p == pytest.approx(0.1609, abs=5e-4)
    assert CriticalConstants.from_dict(cc.to_dict()) == cc
    assert env["meta"]["p0"] == pytest.approx(26.265, abs=0.005)


def test_hp_matches_constants(capsys):
    hp = run_json(capsys, "hp", "eval", "--p", "30", "--u", "2")
    cc = run_json(capsys, "constants", "--p", "30")
    rec = bi.HpResult.from_dict(hp["records"][0])
    assert abs(rec.value - cc["records"][0]["h2"]) <= 1e-6


def test_section_eval_and_roundtrip(capsys):
    env = run_json(capsys, "section", "eval", "--p", "6", "--n", "3", "--a", "diag", "--method", "polya")
    est = SectionEstimate.from_dict(env["records"][0])
    assert est.value == pytest.approx(1.250, abs=0.005)
    assert env["meta"]["direction"] == list(Direction.equal(3, 3).coords)


def test_section_compare_roundtrip(capsys):
    env = run_json(capsys, "section", "compare", "--p", "8", "--n", "3")
    rows = [CandidateRow(**r) for r in env["records"]]
    assert [r.value for r in rows] == sorted((r.value for r in rows), reverse=True)


def test_gamma_bumps_roundtrip(capsys):
    env = run_json(capsys, "gamma", "bumps", "--p", "30")
    prof = BumpProfile.from_dict(env["records"][0])
    assert 0.2010 <= prof.x1 <= 0.2267


def test_gamma_zeros_needs_window(capsys):
    code, _, err = run(capsys, "gamma", "zeros", "--p", "30")
    assert code == EXIT_VALIDATION and "s-max" in err
    code, out, _ = run(capsys, "gamma", "zeros", "--p", "30", "--s-max", "7")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert 3.11 < float(rows[0]["zero_s"]) < 3.4


def test_np_dist_roundtrip(capsys):
    env = run_json(capsys, "np", "dist", "--p", "30", "--x", "0.05,0.1,0.2")
    curve = bi.DistributionCurve.from_dict(env["records"][0])
    assert curve.lo[0] > 7.15


def test_csv_is_lossless_and_deterministic(capsys):
    args = ("section", "mc", "--p", "6", "--n", "3", "--samples", "20000", "--seed", "4")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    row = next(csv.DictReader(io.StringIO(first)))
    assert float(row["value"]) == float(repr(float(row["value"])))


def test_fsinc_csv(capsys):
    code, out, _ = run(capsys, "fsinc", "--x-range", "1e-3", "0.15", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 5
    assert all(float(r["F_sinc"]) >= float(r["lower_bound"]) for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ("section", "eval", "--p", "6", "--a", "0.6,0.8"),
        ("section", "eval", "--p", "6", "--n", "2", "--a", "0.5,0.5"),
        ("hp", "eval", "--u", "2"),
        ("gamma", "eval", "--p", "5", "--s-range", "3", "1", "4"),
        ("constants", "--p", "abc"),
        ("reproduce", "no-such-report"),
        ("hp", "eval", "--p", "5", "--u", "2", "--rel-tol", "-1"),
    ],
)
def test_validation_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_VALIDATION
    assert err.startswith("error:")


def test_unknown_report_lists_ids(capsys):
    _, _, err = run(capsys, "reproduce", "nope")
    assert "critical-exponents" in err and "np-margins" in err


def test_strict_flags_failing_report(capsys):
    code, out, err = run(capsys, "reproduce", "sinc-bumps")
    assert code == EXIT_OK and "warning" in err
    code, _, _ = run(capsys, "--strict", "reproduce", "sinc-bumps")
    assert code == EXIT_INDETERMINATE
    code, _, _ = run(capsys, "reproduce", "critical-exponents", "--strict")
    assert code == EXIT_OK


def test_strict_flags_degraded(capsys):
    code, _, err = run(capsys, "hp", "eval", "--p", "3", "--u", "2", "--s-cap", "4")
    assert code == EXIT_OK and "warning" in err
    code, out, _ = run(capsys, "hp", "eval", "--p", "3", "--u", "2", "--s-cap", "4", "--strict")
    assert code == EXIT_INDETERMINATE
    assert next(csv.DictReader(io.StringIO(out)))["degraded"] == "true"


def test_reproduce_json_roundtrip(capsys):
    env = run_json(capsys, "reproduce", "critical-exponents")
    rows = [ReportRow.from_dict(r) for r in env["records"]]
    assert [r.quoted for r in rows] == [26.265, 4.192, 9.1147]
    assert all(r.passed for r in rows)
    assert all(ReportRow.from_dict(r.to_dict()) == r for r in rows)


def test_config_file_and_out(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# section run\np = 8\nn = 4\na = 3\nformat = json\n")
    out = tmp_path / "res.json"
    code, stdout, _ = run(capsys, "--config", str(cfg), "section", "eval", "--out", str(out))
    assert code == EXIT_OK and stdout == ""
    est = SectionEstimate.from_dict(json.loads(out.read_text())["records"][0])
    assert est.value == pytest.approx(1.270, abs=0.005)
    # the command line overrides the file
    code, stdout, _ = run(capsys, "--config", str(cfg), "section", "eval", "--a", "2", "--format", "csv")
    assert float(next(csv.DictReader(io.StringIO(stdout)))["value"]) == pytest.approx(2 ** (3 / 8), abs=1e-9)


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("p 8\n")
    code, _, _ = run(capsys, "--config", str(cfg), "constants")
    assert code == EXIT_VALIDATION
    with pytest.raises(ValidationError):
        read_config(str(cfg))


def test_parse_direction():
    assert parse_direction("diag", 3) == Direction.equal(3, 3)
    assert parse_direction("2", 4) == Direction.equal(2, 4)
    d = parse_direction("3,4", None, normalize=True)
    assert d.coords == pytest.approx((0.8, 0.6))
    with pytest.raises(ValidationError):
        parse_direction("diag", None)


def test_nonfinite_json(capsys):
    env = run_json(capsys, "fsinc", "--x", "0.3")
    assert env["records"][0]["lower_bound"] is None
    assert math.isfinite(env["records"][0]["F_sinc"])
