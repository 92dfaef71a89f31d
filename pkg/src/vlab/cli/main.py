"""``vlab`` command line: check, decompose, repl."""

from __future__ import annotations

import argparse
import cmd
import sys
from importlib import resources
from pathlib import Path

from ..errors import VlabError
from .build import build_model, build_valuation
from .expr import parse_element
from .runner import PARSE_ERROR_EXIT, run_checks
from .spec import Directive, SpecSyntaxError, parse_expr, parse_spec


def fixture_names() -> list[str]:
    root = resources.files("vlab") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".vlab"))


def fixture_text(name: str) -> str:
    return (resources.files("vlab") / "fixtures" / f"{name}.vlab").read_text()


def read_spec(path: str) -> str:
    """A file path, or ``fixture:NAME`` for a shipped fixture."""
    if path.startswith("fixture:"):
        name = path[len("fixture:"):]
        if name not in fixture_names():
            raise FileNotFoundError(f"no fixture '{name}' (have: {', '.join(fixture_names())})")
        return fixture_text(name)
    return Path(path).read_text()


def _load(path: str, err):
    try:
        return parse_spec(read_spec(path))
    except OSError as exc:
        err.write(f"vlab: {exc}\n")
    except SpecSyntaxError as exc:
        err.write(f"{path}: {exc}\n")
    return None


def cmd_check(args, out, err) -> int:
    doc = _load(args.spec, err)
    if doc is None:
        return PARSE_ERROR_EXIT
    report = run_checks(doc, args.seed, args.jobs)
    out.write(report.render(args.format))
    return report.exit_code


def cmd_decompose(args, out, err) -> int:
    doc = _load(args.spec, err)
    if doc is None:
        return PARSE_ERROR_EXIT
    checks = tuple(c for c in doc.checks if c.kind == "decompose") or (Directive("decompose"),)
    doc = type(doc)(doc.seed, doc.field, doc.valuations, doc.order, doc.annotations, checks)
    report = run_checks(doc, args.seed)
    for e in report.entries:
        if e.status == "unsupported":
            out.write(f"unsupported: {e.summary}\n")
        else:
            out.write("\n".join(e.details) + "\n")
    return report.exit_code


class Repl(cmd.Cmd):
    """Evaluate expressions over a loaded field.

    Commands: ``load FILE``, ``field CTOR``, ``valuation [NAME =] stack(...)``,
    ``eval EXPR`` (or a bare expression), ``val [NAME] EXPR``, ``gens``, ``quit``.
    """

    prompt = "vlab> "
    intro = "vlab repl; 'help' lists commands"

    def __init__(self, stdin=None, stdout=None):
        super().__init__(stdin=stdin, stdout=stdout)
        if stdin is not None:
            self.use_rawinput = False
        self.model = None

    def _say(self, s):
        self.stdout.write(s + "\n")

    def _set(self, text):
        try:
            self.model = build_model(parse_spec(text))
        except (SpecSyntaxError, OSError) as exc:
            self._say(f"error: {exc}")
            return
        self._say(f"field {self.model.field.spec()}")

    def do_load(self, arg):
        """load FILE | fixture:NAME"""
        try:
            self._set(read_spec(arg.strip()))
        except OSError as exc:
            self._say(f"error: {exc}")

    def do_field(self, arg):
        """field CTOR, e.g. field laurent(gf(5), t)"""
        self._set(f"seed = 0\nfield = {arg}\n")

    def do_valuation(self, arg):
        """valuation [NAME =] stack(...): declare a valuation on the loaded field"""
        if not self._need():
            return
        name, eq, rhs = arg.partition("=")
        name, rhs = (name.strip(), rhs) if eq else ("v", arg)
        try:
            self.model.valuations[name] = build_valuation(self.model.field, parse_expr(rhs.strip()))
        except SpecSyntaxError as exc:
            self._say(f"error: {exc}")
            return
        self._say(f"{name} = {self.model.valuations[name].spec()}")

    def do_gens(self, arg):
        """list generator names"""
        if self._need():
            self._say(" ".join(self.model.field.gens()))

    def _need(self):
        if self.model is None:
            self._say("error: no field loaded")
            return False
        return True

    def do_eval(self, arg):
        """eval EXPR"""
        if self._need():
            try:
                self._say(str(parse_element(self.model.field, arg)))
            except (VlabError, ZeroDivisionError) as exc:
                self._say(f"error: {exc}")

    def do_val(self, arg):
        """val [NAME] EXPR: value of EXPR under a declared valuation"""
        if not self._need():
            return
        name, _, rest = arg.strip().partition(" ")
        if name not in self.model.valuations:
            name, rest = None, arg
        try:
            v = self.model.valuation(name)
            self._say(str(v.eval(parse_element(self.model.field, rest))))
        except (KeyError, VlabError, ZeroDivisionError) as exc:
            self._say(f"error: {exc}")

    def default(self, line):
        if line.strip() == "EOF":
            return True
        self.do_eval(line)

    def do_quit(self, arg):
        """leave the repl"""
        return True

    do_EOF = do_quit

    def emptyline(self):
        pass


def cmd_repl(args, out, err) -> int:
    r = Repl(stdout=out)
    if args.spec:
        r.do_load(args.spec)
    r.cmdloop()
    return 0


def cmd_fixtures(args, out, err) -> int:
    out.write("\n".join(fixture_names()) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vlab", description="Valuation lab: exact checks on valued field towers.")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="run the check directives of a spec file")
    c.add_argument("spec", help="spec file, or fixture:NAME")
    c.add_argument("--seed", type=int, default=None, help="override the seed declared in the file")
    c.add_argument("--format", choices=("text", "records"), default="text")
    c.add_argument("--jobs", type=int, default=1, help="run directives in parallel")
    c.set_defaults(func=cmd_check)
    d = sub.add_parser("decompose", help="print the standard decomposition chain")
    d.add_argument("spec")
    d.add_argument("--seed", type=int, default=None)
    d.set_defaults(func=cmd_decompose)
    r = sub.add_parser("repl", help="interactive evaluator")
    r.add_argument("spec", nargs="?", default=None)
    r.set_defaults(func=cmd_repl)
    sub.add_parser("fixtures", help="list shipped fixtures").set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out, err)
    except ValueError as exc:  # e.g. a bad VLAB_BUDGET
        err.write(f"vlab: {exc}\n")
        return PARSE_ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())
