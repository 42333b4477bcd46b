import csv
import subprocess
import sys
import textwrap

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from frobkit.cli import main
from frobkit.fixtures import fixture_ids, list_fixtures
from frobkit.problem import ProblemError, load_problem, run_fixture_report, run_problem
from frobkit.report import EXIT_CODES, Report, finalize

FERMAT = """
ring:
  characteristic: 2
  variables: {x: 1, y: 1, z: 1}
  relations: ["x^3 + y^3 + z^3"]
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return str(p)


def _run(argv, tmp_path):
    out = tmp_path / "report.yaml"
    code = main(argv + ["--out", str(out)])
    return code, Report.from_yaml(out.read_text())


# -- catalog ------------------------------------------------------------------------------

def test_catalog():
    assert len(list_fixtures()) == 11
    assert len(fixture_ids()) == 12
    graded = list_fixtures("graded")
    assert 0 < len(graded) < 11 and all("graded" in f.modules for f in graded)
    assert list_fixtures("no-such-module") == []


@pytest.mark.parametrize("fid", fixture_ids())
def test_every_fixture_exits_zero(fid, tmp_path):
    code, rep = _run(["verify-example", fid], tmp_path)
    assert code == 0 and rep.verdict == "verified"
    assert rep.certificates


def test_unknown_fixture_is_error(tmp_path):
    code, rep = _run(["verify-example", "nope"], tmp_path)
    assert code == 3 and rep.verdict == "error"


# -- problem files --------------------------------------------------------------------------

def test_malformed_polynomial_exit_3(tmp_path):
    f = _write(tmp_path, "bad.yaml", FERMAT + "task: {kind: groebner, generators: ['x^2 + * y']}\n")
    code, rep = _run(["groebner", f], tmp_path)
    assert code == 3 and "ParseError" in rep.message


@pytest.mark.parametrize("text", [
    "ring: [1, 2]\ntask: {kind: groebner, generators: [x]}\n",
    "task: {kind: groebner, generators: [x]}\n",
    FERMAT + "task: {kind: nonsense}\n",
    FERMAT + "task: {kind: frobclosure, element: z}\n",
    FERMAT + "task: {kind: groebner, generators: [x]}\nbudgets: {fuel: 3}\n",
    "ring: {characteristic: 4, variables: [x]}\ntask: {kind: groebner, generators: [x]}\n",
    ": : :\n",
])
def test_schema_errors_exit_3(text, tmp_path):
    f = _write(tmp_path, "bad.yaml", text)
    kind = "groebner" if "nonsense" not in text and "frobclosure" not in text else \
        ("frobclosure" if "frobclosure" in text else "groebner")
    code, rep = _run([kind, f], tmp_path)
    assert code == 3 and rep.verdict == "error"


def test_task_mismatch_is_error(tmp_path):
    f = _write(tmp_path, "p.yaml", FERMAT + "task: {kind: groebner, generators: [x]}\n")
    code, _ = _run(["regseq", f], tmp_path)
    assert code == 3


def test_missing_file_is_error(tmp_path):
    code, _ = _run(["groebner", str(tmp_path / "missing.yaml")], tmp_path)
    assert code == 3


def test_frobclosure_verified_and_flag_override(tmp_path):
    text = FERMAT + "task: {kind: frobclosure, element: z^2, ideal: [x, y]}\nbudgets: {e_max: 0}\n"
    f = _write(tmp_path, "p.yaml", text)
    code, rep = _run(["frobclosure", f], tmp_path)
    assert code == 2 and rep.verdict == "inconclusive"
    code, rep = _run(["frobclosure", f, "--max-e", "2"], tmp_path)
    assert code == 0 and rep.summary["level"] == 1 and rep.budgets["e_max"] == 2


def test_refuted_exit_1(tmp_path):
    f = _write(tmp_path, "g.yaml", "ring: {characteristic: 3, variables: [x, y]}\n"
                                  "task: {kind: groebner, generators: [x^2], member: x}\n")
    assert _run(["groebner", f], tmp_path)[0] == 1
    f = _write(tmp_path, "r.yaml", "ring: {characteristic: 2, variables: [x, y]}\n"
                                  "task: {kind: regseq, sequence: [x, x]}\n")
    code, rep = _run(["regseq", f], tmp_path)
    assert code == 1 and rep.summary["failing_index"] == 2


@pytest.mark.parametrize("kind,body", [
    ("witness", "element: z^2\n  ideal: [x, y]"),
    ("cech", "elements: [x, y]\n  degree: 2\n  components: [{subset: [0, 1], numerator: z^2}]"),
    ("trivialize", "elements: [x, y]\n  degree: 2\n  components: [{subset: [0, 1], numerator: z^2}]"),
    ("prop54", "elements: [x, y]\n  degree: 2\n  components: [{subset: [0, 1], numerator: z^2}]"),
    ("power-identity", "lhs: z^2\n  rhs: x^(3/2)*z^(1/2) + y^(3/2)*z^(1/2)"),
    ("rees", "generators: [x, y, z]"),
])
def test_task_kinds_verified(kind, body, tmp_path):
    f = _write(tmp_path, "p.yaml", FERMAT + f"task:\n  kind: {kind}\n  {body}\n")
    code, rep = _run([kind, f], tmp_path)
    assert code == 0, rep.message


def test_dickson_task(tmp_path):
    f = _write(tmp_path, "d.yaml", "task: {kind: dickson, n: 2, q: 2}\n")
    code, rep = _run(["dickson", f], tmp_path)
    assert code == 0


def test_power_identity_refuted(tmp_path):
    f = _write(tmp_path, "p.yaml", FERMAT + "task: {kind: power-identity, lhs: z^2, rhs: 'x^(3/2)*z^(1/2)'}\n")
    assert _run(["power-identity", f], tmp_path)[0] == 1


def test_text_format(tmp_path, capsys):
    assert main(["verify-example", "ex41-p2", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("task: verify-example:ex41-p2\nverdict: verified")


# -- reports ----------------------------------------------------------------------------------

scalars = st.one_of(st.none(), st.booleans(), st.integers(), st.text(max_size=12))
trees = st.recursive(scalars, lambda ch: st.one_of(st.lists(ch, max_size=3),
                                                   st.dictionaries(st.text(max_size=6), ch, max_size=3)),
                     max_leaves=10)


@given(verdict=st.sampled_from(sorted(EXIT_CODES)), summary=st.dictionaries(st.text(max_size=6), trees, max_size=3),
       certs=st.lists(trees, max_size=3), message=st.text(max_size=20))
def test_report_round_trip(verdict, summary, certs, message):
    rep = Report("t", verdict, summary=summary, certificates=certs, message=message)
    again = Report.from_yaml(rep.to_yaml())
    assert again.as_dict() == rep.as_dict()
    assert again.exit_code == EXIT_CODES[verdict]


@pytest.mark.parametrize("fid", ["witness-fermat2", "veronese-trivialize", "ex53-family"])
def test_fixture_reports_round_trip_and_deterministic(fid):
    a, _ = run_fixture_report(fid)
    b, _ = run_fixture_report(fid)
    assert Report.from_yaml(a.to_yaml()).as_dict() == a.as_dict()
    assert a.deterministic_view() == b.deterministic_view()
    assert list(yaml.safe_load(a.to_yaml())) == ["task", "verdict", "summary", "certificates", "tower",
                                                "budgets", "timings", "message"]


def test_finalize_downgrades_failed_checks():
    rep = finalize("t", "verified", [lambda: True, lambda: False])
    assert rep.verdict == "error" and rep.exit_code == 3
    assert finalize("t", "refuted", [lambda: False]).verdict == "refuted"


def test_problem_loader_direct():
    spec = load_problem(FERMAT + "task: {kind: frobclosure, element: z^2, ideal: [x, y]}\n", {"e_max": 1})
    assert spec.budgets == {"e_max": 1}
    assert run_problem(spec).verdict == "verified"
    with pytest.raises(ProblemError):
        load_problem("task: {kind: frobclosure}\n")


# -- catalog run ----------------------------------------------------------------------------

def test_fixtures_run_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["fixtures", "--run", "--out", str(out)]) == 0
    with open(out / "summary.tsv") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    assert [r["id"] for r in rows] == fixture_ids()
    assert all(r["verdict"] == "verified" and r["exit_code"] == "0" for r in rows)
    for fid in fixture_ids():
        assert Report.from_yaml((out / f"{fid}.yaml").read_text()).verdict == "verified"
    for png in ("timings.png", "support.png", "degrees.png"):
        assert (out / png).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_fixture_listing(capsys):
    assert main(["fixtures", "--module", "cech"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(list_fixtures("cech"))


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "frobkit.cli", "verify-example", "dickson-p2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "verdict: verified" in r.stdout
