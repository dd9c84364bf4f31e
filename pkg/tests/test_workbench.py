import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from divisor_workbench.workbench import (
    Report, ScenarioError, paper_scenario, paper_suite, parse_scenario, run_suite,
)
from divisor_workbench.workbench.cli import main
from divisor_workbench.workbench.battery import paper_scenario_text
from divisor_workbench.workbench.values import MalformedNumber, encode_number, parse_number

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
QUADRIC = (SCENARIOS / "quadric_minimal.json").read_text()


def doc(objects, checks):
    return json.dumps({"schema": "divisor-workbench/1", "objects": objects, "checks": checks}, indent=1)


def issues_of(text):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text)
    return err.value.issues


@pytest.fixture(scope="module")
def suite_5():
    return paper_suite(5, 5)


class TestNumbers:
    @pytest.mark.parametrize("raw, want", [(3, 3), ("-7", -7), ("6/4", pytest.importorskip("fractions").Fraction(3, 2)),
                                           ("4/2", 2), (str(2 ** 80), 2 ** 80)])
    def test_parse(self, raw, want):
        assert parse_number(raw) == want

    @pytest.mark.parametrize("raw", [True, "1/0", "1.5", "x", 1.5, None, "1/-2"])
    def test_reject(self, raw):
        with pytest.raises(MalformedNumber):
            parse_number(raw)

    def test_encode_large(self):
        assert encode_number(2 ** 60) == str(2 ** 60)
        assert encode_number(-(2 ** 53)) == str(-(2 ** 53))
        assert encode_number(2 ** 53 - 1) == 2 ** 53 - 1
        assert parse_number(encode_number(-(2 ** 70))) == -(2 ** 70)


class TestParse:
    def test_minimal(self):
        s = parse_scenario(QUADRIC)
        assert len(s.checks) == 1 and list(s.objects) == ["Q"]

    def test_bytes_and_bad_utf8(self):
        assert len(parse_scenario(QUADRIC.encode()).checks) == 1
        assert issues_of(b'{"schema": "\xff"}')[0].kind == "json"

    def test_dangling_reference(self):
        text = doc([], [{"id": "c", "op": "pair", "args": {"on": "Lx", "a": "f1", "b": "f2"}, "expect": 1}])
        (issue,) = issues_of(text)
        assert issue.kind == "reference" and "Lx" in issue.message
        assert issue.path == "/checks/0/args/on"
        assert issue.line == 9 and issue.column is not None

    def test_declared_later(self):
        text = doc([{"id": "S2", "kind": "blowup_points", "surface": "S1", "points": []},
                    {"id": "S1", "kind": "surface", "builder": "quadric"}], [])
        (issue,) = issues_of(text)
        assert "S1" in issue.message and "later" in issue.message

    def test_json_error_position(self):
        (issue,) = issues_of('{\n  "schema": "divisor-workbench/1",\n  "objects": [,]\n}')
        assert issue.kind == "json" and issue.line == 3

    def test_float_rejected(self):
        text = QUADRIC.replace('"expect": 1', '"expect": 1.0')
        (issue,) = issues_of(text)
        assert issue.kind == "number" and "1.0" in issue.message
        assert issue.path == "/checks/0/expect"
        line = text.splitlines()[issue.line - 1]
        assert line[issue.column - 1:].startswith("1.0")

    def test_schema_violation(self):
        issues = issues_of(QUADRIC.replace("divisor-workbench/1", "divisor-workbench/9"))
        assert issues[0].kind == "schema" and issues[0].path == "/schema"

    def test_unknown_op_and_arg(self):
        base = {"id": "Q", "kind": "surface", "builder": "quadric"}
        assert issues_of(doc([base], [{"id": "c", "op": "frobnicate", "args": {}, "expect": 1}]))
        issues = issues_of(doc([base], [{"id": "c", "op": "pair", "args": {"on": "Q", "a": "f1"}, "expect": 1}]))
        assert any("b" in i.message for i in issues)

    def test_duplicate_id(self):
        q = {"id": "Q", "kind": "surface", "builder": "quadric"}
        (issue,) = issues_of(doc([q, q], []))
        assert issue.kind == "semantic"

    def test_unknown_class_name(self):
        q = {"id": "Q", "kind": "surface", "builder": "quadric"}
        issues = issues_of(doc([q], [{"id": "c", "op": "pair", "args": {"on": "Q", "a": "zz", "b": "f1"},
                                      "expect": 0}]))
        assert "zz" in issues[0].message

    def test_broken_object_reported_once(self):
        bad = {"id": "Q", "kind": "surface", "builder": "S_elliptic:4"}
        text = doc([bad], [{"id": "c", "op": "pair", "args": {"on": "Q", "a": "f1", "b": "f2"}, "expect": 1}])
        issues = issues_of(text)
        assert issues[0].path.startswith("/objects/0")
        assert any("could not be built" in i.message for i in issues[1:])

    def test_shipped_files_parse(self):
        for path in sorted(SCENARIOS.glob("*.json")):
            parse_scenario(path.read_bytes())

    def test_shipped_suite_is_current(self):
        assert (SCENARIOS / "paper_suite.json").read_text() == paper_scenario_text()

    def test_generator_range(self):
        with pytest.raises(ValueError):
            paper_scenario(4, 6)
        with pytest.raises(ValueError):
            paper_scenario(7, 6)


class TestRun:
    def test_paper_suite_n5(self, suite_5):
        assert suite_5.ok and suite_5.counts["pass"] == suite_5.total > 50

    def test_full_range(self):
        report = paper_suite()
        assert report.counts == {"pass": report.total, "fail": 0, "error": 0}
        ids = [r.id for r in report.results]
        for n in range(5, 13):
            assert f"homology_zero_check@n={n}" in ids
            assert f"L1_anticanonical[F0]@n={n}" in ids and f"L1_anticanonical[F2]@n={n}" in ids
        assert "moduli_pipeline@K3" in ids

    def test_one_wrong_expectation(self):
        data = paper_scenario(5, 5)
        target = next(c for c in data["checks"] if c["id"] == "K_squared@n=5")
        target["expect"] = 0
        report = run_suite(parse_scenario(json.dumps(data)))
        assert [r.id for r in report.failures()] == ["K_squared@n=5"]
        assert report.counts["fail"] == 1 and report.counts["error"] == 0

    def test_empty(self):
        report = run_suite(parse_scenario(doc([], [])))
        assert report.total == 0 and report.ok

    def test_error_entry(self):
        q = {"id": "Q", "kind": "surface", "builder": "quadric"}
        report = run_suite(parse_scenario(doc([q], [{"id": "t", "op": "theta_chi", "args": {"surface": "Q"},
                                                      "expect": 6}])))
        assert report.counts["pass"] == 1
        lat = {"id": "L", "kind": "lattice", "labels": ["x"], "gram": [[1]]}
        s = {"id": "S", "kind": "surface", "lattice": "L"}
        report = run_suite(parse_scenario(doc([lat, s], [{"id": "t", "op": "theta_chi", "args": {"surface": "S"},
                                                         "expect": 0}])))
        assert report.results[0].status == "error" and report.results[0].message

    def test_hirzebruch_fixture(self):
        report = run_suite(parse_scenario((SCENARIOS / "hirzebruch_blowup.json").read_bytes()))
        assert report.ok and report.total == 8

    def test_round_trip_and_determinism(self, suite_5):
        text = suite_5.dumps()
        assert Report.loads(text) == suite_5
        assert Report.loads(text).dumps() == text
        assert paper_suite(5, 5).dumps() == text

    def test_workers_parity(self, suite_5):
        assert paper_suite(5, 5, workers=4).dumps() == suite_5.dumps()

    def test_counts_add_up(self, suite_5):
        summary = json.loads(suite_5.dumps())["summary"]
        assert summary["pass"] + summary["fail"] + summary["error"] == summary["total"]

    def test_text_report(self):
        text = run_suite(parse_scenario(QUADRIC)).to_text()
        assert text.splitlines()[1].split() == ["PASS", "f1.f2", "pair"]
        assert text.rstrip().endswith("1 checks: 1 passed, 0 failed, 0 errors")


class TestCli:
    runner = CliRunner()

    def write(self, tmp_path, text, name="s.json"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    def test_validate(self, tmp_path):
        res = self.runner.invoke(main, ["validate", self.write(tmp_path, QUADRIC)])
        assert res.exit_code == 0 and "1 checks" in res.output

    def test_run_pass_and_json(self, tmp_path):
        path = self.write(tmp_path, QUADRIC)
        assert self.runner.invoke(main, ["run", path]).exit_code == 0
        res = self.runner.invoke(main, ["run", path, "--format", "json"])
        assert json.loads(res.output)["summary"]["pass"] == 1

    def test_run_fail(self, tmp_path):
        res = self.runner.invoke(main, ["run", self.write(tmp_path, QUADRIC.replace('"expect": 1', '"expect": 2'))])
        assert res.exit_code == 1 and "FAIL" in res.output

    def test_parse_error(self, tmp_path):
        res = self.runner.invoke(main, ["run", self.write(tmp_path, QUADRIC.replace('"quadric"}', '"quadric"'))])
        assert res.exit_code == 2

    def test_dangling_message(self, tmp_path):
        text = QUADRIC.replace('"on": "Q"', '"on": "Nope"')
        res = self.runner.invoke(main, ["validate", self.write(tmp_path, text)])
        assert res.exit_code == 2 and "Nope" in res.output and "line 8" in res.output

    def test_missing_file(self, tmp_path):
        assert self.runner.invoke(main, ["run", str(tmp_path / "absent.json")]).exit_code == 2

    def test_paper_suite(self):
        res = self.runner.invoke(main, ["paper-suite", "--n-min", "6", "--n-max", "6", "--format", "json"])
        assert res.exit_code == 0 and json.loads(res.output)["summary"]["fail"] == 0

    @pytest.mark.parametrize("args", [["--n-min", "4"], ["--n-min", "7", "--n-max", "6"]])
    def test_paper_suite_bad_range(self, args):
        assert self.runner.invoke(main, ["paper-suite", *args]).exit_code == 2

    def test_schema(self):
        res = self.runner.invoke(main, ["schema"])
        assert json.loads(res.output)["properties"]["schema"]["const"] == "divisor-workbench/1"
