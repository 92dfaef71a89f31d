"""Regenerate tests/golden. Run ``python3 tests/make_golden.py`` after an intended output change."""

from __future__ import annotations

import io
import sys
from pathlib import Path

from vlab.cli.build import build_model
from vlab.cli.main import fixture_names, fixture_text, main
from vlab.cli.spec import parse_spec
from vlab.decompose import classify_group, kaplansky_check, ramification_classify
from vlab.ordgroup import QQ, ValueGroup

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*argv) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def classifier_table() -> str:
    """Ramification of three value-group situations, then Kaplansky verdicts for F5((t))."""

    def fixture_valuation(name):
        return build_model(parse_spec(fixture_text(name))).valuation(None)

    G = ValueGroup.lex(QQ)
    rows = [
        ("q3", str(ramification_classify(fixture_valuation("q3"), 3))),
        ("q3_sqrt3", str(ramification_classify(fixture_valuation("q3_sqrt3"), 3))),
        ("Q-group stage", str(classify_group(G, G(1), 3))),
    ]
    lines = [f"ramification  {name:<14}  {verdict}" for name, verdict in rows]
    rep = kaplansky_check(fixture_valuation("f5_laurent"), 5)
    lines.append(f"kaplansky     {'f5_laurent':<14}  {'/'.join(rep.verdicts())}")
    return "\n".join(lines) + "\n"


def golden_outputs() -> dict[str, str]:
    files = {}
    for name in fixture_names():
        files[f"check_{name}.txt"] = run_cli("check", f"fixture:{name}")[1]
    files["records_q3s.txt"] = run_cli("check", "fixture:q3s", "--format", "records")[1]
    files["decompose_q3s.txt"] = run_cli("decompose", "fixture:q3s")[1]
    files["classifiers.txt"] = classifier_table()
    return files


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for fname, text in golden_outputs().items():
        (GOLDEN / fname).write_text(text)
        print(f"wrote {fname}", file=sys.stderr)
