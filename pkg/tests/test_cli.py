import io
import json
import subprocess
import sys

import jsonschema
import pytest

from finkat.cli import SCHEMA_PATH, run

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def invoke(tmp_path, *argv):
    path = tmp_path / "report.json"
    out = io.StringIO()
    code = run(list(argv) + ["--json", str(path)], out)
    report = json.loads(path.read_text()) if path.exists() else None
    return code, out.getvalue(), report


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze",),
        ("analyze", "--corpus", "arrow"),
        ("check", "balanced", "--corpus", "finset:2,4"),
        ("check", "mono-split", "--corpus", "finpreord:2,4", "--side", "X"),
        ("spec",),
        ("spec", "--corpus", "terminal"),
        ("verify", "example-1.1"),
        ("verify", "6.3"),
        ("verify", "7.1a", "--corpus", "finpreord-unpointed:2,4"),
        ("corpus", "pointed-initial:2,4"),
    ],
)
def test_reports_match_schema(tmp_path, argv):
    code, _, report = invoke(tmp_path, *argv)
    assert code == 0
    jsonschema.validate(report, SCHEMA)
    assert report["command"] == argv[0]


def test_unknown_theorem(tmp_path):
    code, _, report = invoke(tmp_path, "verify", "9.9")
    assert code == 2 and report is None


def test_unknown_corpus(tmp_path):
    code, _, _ = invoke(tmp_path, "analyze", "--corpus", "nonsense")
    assert code == 2


def test_unknown_condition(tmp_path):
    code, _, _ = invoke(tmp_path, "check", "frobnicate")
    assert code == 2


def test_x_side_without_localization(tmp_path):
    code, _, _ = invoke(tmp_path, "check", "balanced", "--corpus", "ab", "--side", "X")
    assert code == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_semilattice_example(tmp_path):
    code, text, report = invoke(tmp_path, "verify", "example-1.1")
    assert code == 0 and report["status"] == "PASS"
    assert "example-1.1" in text


def test_envelopes_not_applicable_on_unpointed(tmp_path):
    code, text, report = invoke(tmp_path, "verify", "7.1a", "--corpus", "finpreord-unpointed:2,4")
    assert code == 0
    (res,) = report["payload"]["results"]
    assert res["status"] == "NOT APPLICABLE" and res["witness"] == "0->1[]"
    assert "witness: 0->1[]" in text


def test_check_balanced_finset(tmp_path):
    code, text, report = invoke(tmp_path, "check", "balanced", "--corpus", "finset:3,9")
    assert code == 0 and report["payload"]["holds"]


def test_check_failure_still_exits_0(tmp_path):
    code, _, report = invoke(tmp_path, "check", "mono-split", "--corpus", "finset:2,4")
    assert code == 0 and report["payload"]["witness"] == "0->1[]"


def test_span_cap_is_input_error(tmp_path, monkeypatch):
    monkeypatch.delenv("FINKAT_SPAN_CAP", raising=False)
    code, _, _ = invoke(tmp_path, "spec", "--corpus", "finpreord:2,4", "--span-cap", "1")
    assert code == 2


def test_spec_hom_sizes(tmp_path):
    code, _, report = invoke(tmp_path, "spec", "--corpus", "semilattice:B2")
    assert code == 0
    assert all(h["size"] == 1 for h in report["payload"]["hom_sizes"])


def test_deterministic_apart_from_timing(tmp_path):
    reports = []
    for _ in range(2):
        _, _, report = invoke(tmp_path, "verify", "6.5")
        report.pop("elapsed_seconds")
        reports.append(report)
    assert reports[0] == reports[1]


def test_fincat_file(tmp_path):
    f = tmp_path / "arrow.fincat"
    f.write_text("category Arrow\nobj a\nobj b\nmor u : a -> b\nid a = ida\nid b = idb\n")
    code, text, report = invoke(tmp_path, "analyze", "--corpus", str(f))
    assert code == 0 and report["corpus"] == "Arrow"
    assert {r["morphism"] for r in report["payload"]["morphisms"]} == {"ida", "idb", "u"}


def test_bad_fincat_file(tmp_path):
    f = tmp_path / "bad.fincat"
    f.write_text("obj a\nmor e : a -> a\nid a = i\n")
    code, _, _ = invoke(tmp_path, "analyze", "--corpus", str(f))
    assert code == 2


def test_missing_fincat_file(tmp_path):
    code, _, _ = invoke(tmp_path, "analyze", "--corpus", str(tmp_path / "absent.fincat"))
    assert code == 2


def test_verify_without_localization_not_applicable(tmp_path):
    code, _, report = invoke(tmp_path, "verify", "5.1", "--corpus", "ab")
    assert code == 0 and report["status"] == "NOT APPLICABLE"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "finkat", "--version"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "finkat" in proc.stdout
