import io

import pytest

from make_golden import GOLDEN, classifier_table, run_cli
from vlab.cli.main import Repl, fixture_names, fixture_text
from vlab.cli.spec import SpecSyntaxError, parse_spec, print_spec

FAILING = """\
seed = 1
field = qq
valuation = stack(3)
check sqrt a="2" expect=root
check ultrametric n=20
"""

UNSUPPORTED = """\
seed = 1
field = laurent(gf(3), t)
valuation = stack(t)
check decompose p=3
check ultrametric n=20
"""


def _write(tmp_path, text, name="spec.vlab"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_report_matches_golden(name):
    code, out, _ = run_cli("check", f"fixture:{name}")
    assert code == 0
    assert out == (GOLDEN / f"check_{name}.txt").read_text()


def test_records_format_matches_golden():
    code, out, _ = run_cli("check", "fixture:q3s", "--format", "records")
    assert code == 0
    assert out == (GOLDEN / "records_q3s.txt").read_text()
    assert out.splitlines()[-1].startswith("record=summary")


def test_decompose_command_matches_golden():
    code, out, _ = run_cli("decompose", "fixture:q3s")
    assert code == 0
    assert out == (GOLDEN / "decompose_q3s.txt").read_text()


def test_classifier_table_matches_golden():
    assert classifier_table() == (GOLDEN / "classifiers.txt").read_text()


def test_reports_are_deterministic_and_independent_of_jobs():
    for name in ("scanlon", "q_v2v3", "f5_laurent"):
        a = run_cli("check", f"fixture:{name}")[1]
        assert run_cli("check", f"fixture:{name}")[1] == a
        assert run_cli("check", f"fixture:{name}", "--jobs", "4")[1] == a


def test_seed_override_changes_samples():
    a = run_cli("check", "fixture:scanlon")[1]
    b = run_cli("check", "fixture:scanlon", "--seed", "7")[1]
    assert "seed   7" in b and a != b


def test_exit_codes(tmp_path):
    code, out, _ = run_cli("check", _write(tmp_path, FAILING))
    assert code == 1 and "expected root, got absent" in out
    code, out, _ = run_cli("check", _write(tmp_path, UNSUPPORTED))
    assert code == 2 and "unsupported" in out
    code, _, err = run_cli("check", _write(tmp_path, "seed = 1\nfield = laurent(gf(2)\n"))
    assert code == 3 and "line 2, col 16" in err


def test_failure_outranks_unsupported(tmp_path):
    text = FAILING + "check decompose p=2\n"
    assert run_cli("check", _write(tmp_path, text))[0] == 1


def test_missing_file_and_fixture():
    assert run_cli("check", "/nonexistent/x.vlab")[0] == 3
    code, _, err = run_cli("check", "fixture:nope")
    assert code == 3 and "no fixture" in err


def test_located_errors():
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec("seed = 1\nfield = lazy_as(ratfunc(gf(3), u), 2)\n")
    assert (exc.value.line, exc.value.col) == (2, 9)
    assert "characteristic mismatch" in str(exc.value)
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec("seed = 1\nfield = qq\ncheck frobnicate\n")
    assert exc.value.line == 3
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec("field = qq\n")
    assert "seed" in str(exc.value)


def test_group_declaration_is_checked():
    text = "seed = 1\nfield = laurent(padic(3), s)\nvaluation v {\n  stack = stack(s, padic)\n  group = lex(Z, Q)\n}\n"
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec(text)
    assert exc.value.line == 5


def test_print_parse_round_trip():
    for name in fixture_names():
        doc = parse_spec(fixture_text(name))
        assert parse_spec(print_spec(doc)) == doc


def test_budget_scales_sample_counts(monkeypatch):
    monkeypatch.setenv("VLAB_BUDGET", "0.1")
    out = run_cli("check", "fixture:q3s")[1]
    assert "50/50 pairs exact" in out
    monkeypatch.setenv("VLAB_BUDGET", "lots")
    code, _, err = run_cli("check", "fixture:q3s")
    assert code == 3 and "VLAB_BUDGET" in err


def test_fixtures_command_lists_everything():
    code, out, _ = run_cli("fixtures")
    assert code == 0 and out.split() == fixture_names()
    assert len(fixture_names()) >= 6


def test_repl_session():
    script = "field laurent(gf(5), t)\nvaluation stack(t)\ngens\n(1 + t)^2\nval t^-3 + t\nval nope\n1/0\nquit\n"
    out = io.StringIO()
    Repl(stdin=io.StringIO(script), stdout=out).cmdloop()
    lines = out.getvalue().replace("vlab> ", "").splitlines()
    assert "field laurent(gf(5), t, prec=8)" in lines
    assert "t" in lines
    assert "v = stack(t)" in lines and "-3" in lines
    assert any("unknown name 'nope'" in ln for ln in lines)
    assert any("division by zero" in ln for ln in lines)
