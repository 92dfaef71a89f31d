"""Field-spec documents: parsing, printing and located syntax errors.

A document is line oriented::

    # comments run to the end of the line
    seed = 42
    field = laurent(lazy_as(ratfunc(gf(2), u), 2), s, prec=8)
    valuation = stack(s)                 # named "v"
    valuation w = stack(s)
    valuation v3 {
        stack = stack(3)
        group = lex(Z)
    }
    order = leading
    annotate w class=H1
    check scanlon t="u" n=100

Constructor expressions use call syntax and are parsed with :mod:`ast`; only
names, integers, strings and calls are accepted.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field as dc_field

from ..errors import VlabError


class SpecSyntaxError(VlabError, SyntaxError):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        super().__init__(str(self))

    def __str__(self):
        s = f"line {self.line}, col {self.col}: {self.message}"
        if self.expected:
            s += " (expected " + " or ".join(self.expected) + ")"
        return s


# constructor expressions -----------------------------------------------------

@dataclass(frozen=True)
class Ident:
    name: str
    line: int = dc_field(default=0, compare=False)
    col: int = dc_field(default=0, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Str:
    value: str
    line: int = dc_field(default=0, compare=False)
    col: int = dc_field(default=0, compare=False)

    def __str__(self):
        return '"' + self.value.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True)
class Num:
    value: object  # int or Fraction
    line: int = dc_field(default=0, compare=False)
    col: int = dc_field(default=0, compare=False)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple = ()
    kwargs: tuple = ()  # ((key, value), ...)
    line: int = dc_field(default=0, compare=False)
    col: int = dc_field(default=0, compare=False)

    def __str__(self):
        parts = [str(a) for a in self.args] + [f"{k}={v}" for k, v in self.kwargs]
        return f"{self.name}(" + ", ".join(parts) + ")"

    def kw(self, key, default=None):
        for k, v in self.kwargs:
            if k == key:
                return v
        return default


def _syntax_expected(msg: str) -> tuple:
    if "never closed" in msg:
        return ("')'",)
    if "unmatched" in msg:
        return ("end of expression",)
    if "comma" in msg:
        return ("','", "')'")
    return ("expression",)


def parse_expr(text: str, line: int = 1, col: int = 1):
    """Parse a constructor expression; ``col`` is the column of ``text[0]``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        lead = len(text) - len(text.lstrip())
        offset = (exc.offset or 1) + lead
        raise SpecSyntaxError(exc.msg, line, col + offset - 1, _syntax_expected(exc.msg)) from None
    lead = len(text) - len(text.lstrip())
    return _convert(tree.body, line, col + lead)


def _convert(node, line, col):
    here = col + getattr(node, "col_offset", 0)
    if isinstance(node, ast.Name):
        return Ident(node.id, line, here)
    if isinstance(node, ast.Constant) and isinstance(node.value, str):
        return Str(node.value, line, here)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Num(node.value, line, here)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub) \
            and isinstance(node.operand, ast.Constant) and type(node.operand.value) is int:
        return Num(-node.operand.value, line, here)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        args = tuple(_convert(a, line, col) for a in node.args)
        kwargs = tuple((k.arg, _convert(k.value, line, col)) for k in node.keywords)
        return Call(node.func.id, args, kwargs, line, here)
    raise SpecSyntaxError("unsupported expression", line, here, ("name", "integer", "string", "call"))


# documents -------------------------------------------------------------------

@dataclass(frozen=True)
class ValuationDecl:
    name: str
    stack: Call
    group: Call | None = None
    line: int = dc_field(default=0, compare=False)


@dataclass(frozen=True)
class Directive:
    kind: str
    args: tuple = ()  # ((key, value-string), ...), value strings unquoted
    line: int = dc_field(default=0, compare=False)

    def get(self, key, default=None):
        for k, v in self.args:
            if k == key:
                return v
        return default

    def __str__(self):
        parts = [self.kind] + [f"{k}={_quote(v)}" for k, v in self.args]
        return " ".join(parts)


@dataclass(frozen=True)
class Annotation:
    valuation: str
    args: tuple = ()
    line: int = dc_field(default=0, compare=False)

    def get(self, key, default=None):
        return dict(self.args).get(key, default)


@dataclass(frozen=True)
class FieldSpecDocument:
    seed: int | None
    field: object  # Call, or Ident for qq
    valuations: tuple = ()
    order: str | None = None
    annotations: tuple = ()
    checks: tuple = ()

    def valuation(self, name: str) -> ValuationDecl:
        for v in self.valuations:
            if v.name == name:
                return v
        raise KeyError(name)


def _quote(v: str) -> str:
    if re.fullmatch(r"[A-Za-z0-9_.+\-/]+", v):
        return v
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


# directive kind -> accepted argument keys
DIRECTIVES = {
    "ultrametric": ("v", "n"),
    "coarsening": ("v", "n"),
    "scanlon": ("v", "t", "n", "vmin", "vmax"),
    "decompose": ("v", "p", "n"),
    "natural": ("n", "adversarial"),
    "euclidean": ("n", "sampler", "expect"),
    "kaplansky": ("v", "p", "n", "expect"),
    "ramification": ("v", "p", "expect"),
    "independence": ("v", "w", "n"),
    "hensel": ("v", "f", "x0", "cap", "expect"),
    "spotcheck": ("v", "n", "expect"),
    "compare": ("v", "w", "expect"),
    "phensel": ("v", "w", "p"),
    "perfect-scan": ("v", "expect"),
    "sqrt": ("a", "expect"),
    "as": ("c", "expect"),
}


_KV = re.compile(r'\s*([A-Za-z_][\w-]*)=("(?:[^"\\]|\\.)*"|[^\s"]+)')


def _parse_args(text: str, line: int, col: int) -> tuple:
    out = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _KV.match(text, pos)
        if not m:
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SpecSyntaxError("malformed argument", line, col + at, ("key=value",))
        key, raw = m.group(1), m.group(2)
        if raw.startswith('"'):
            raw = re.sub(r"\\(.)", r"\1", raw[1:-1])
        out.append((key, raw))
        pos = m.end()
    return tuple(out)


def _strip_comment(s: str) -> str:
    in_str = False
    for i, ch in enumerate(s):
        if ch == '"' and (i == 0 or s[i - 1] != "\\"):
            in_str = not in_str
        elif ch == "#" and not in_str:
            return s[:i]
    return s


def parse_spec(text: str, build: bool = True) -> FieldSpecDocument:
    """Parse a document. With ``build`` the field and valuations are
    constructed once so that semantic errors (unknown constructor,
    characteristic mismatch, bad stack label) are reported with a location.
    """
    seed = None
    field = None
    valuations: list[ValuationDecl] = []
    order = None
    annotations = []
    checks = []
    lines = text.splitlines()
    i = 0
    block = None  # (name, start line, {key: Call})
    while i < len(lines):
        lineno = i + 1
        raw = _strip_comment(lines[i]).rstrip()
        i += 1
        body = raw.strip()
        if not body:
            continue
        col0 = len(raw) - len(raw.lstrip()) + 1
        if block is not None:
            if body == "}":
                name, start, entries = block
                if "stack" not in entries:
                    raise SpecSyntaxError(f"valuation block '{name}' has no stack", start, 1, ("stack = ...",))
                valuations.append(ValuationDecl(name, entries["stack"], entries.get("group"), start))
                block = None
                continue
            key, eq, rest = body.partition("=")
            key = key.strip()
            if not eq or key not in ("stack", "group"):
                raise SpecSyntaxError("unknown entry in valuation block", lineno, col0, ("stack = ...", "group = ...", "}"))
            block[2][key] = _call(rest, lineno, raw.index("=") + 2)
            continue
        if body.startswith("check"):
            m = re.match(r"check\s+([A-Za-z][\w-]*)", body)
            if not m:
                raise SpecSyntaxError("check needs a kind", lineno, col0 + 5, ("directive name",))
            kind = m.group(1)
            if kind not in DIRECTIVES:
                raise SpecSyntaxError(f"unknown directive '{kind}'", lineno, col0 + m.start(1), tuple(DIRECTIVES))
            start = col0 + m.end()
            args = _parse_args(body[m.end():], lineno, start)
            for k, _ in args:
                if k not in DIRECTIVES[kind]:
                    at = start + body[m.end():].index(k + "=")
                    raise SpecSyntaxError(f"unknown argument '{k}' for {kind}", lineno, at, DIRECTIVES[kind])
            checks.append(Directive(kind, args, lineno))
            continue
        if body.startswith("annotate"):
            m = re.match(r"annotate\s+([A-Za-z_]\w*)", body)
            if not m:
                raise SpecSyntaxError("annotate needs a valuation name", lineno, col0 + 8, ("name",))
            annotations.append(Annotation(m.group(1), _parse_args(body[m.end():], lineno, col0 + m.end()), lineno))
            continue
        if body.startswith("valuation"):
            rest = body[len("valuation"):]
            m = re.match(r"\s*([A-Za-z_]\w*)?\s*(=|\{)", rest)
            if not m:
                raise SpecSyntaxError("malformed valuation declaration", lineno, col0 + 9, ("'='", "'{'"))
            name = m.group(1) or "v"
            if m.group(2) == "{":
                if rest[m.end():].strip():
                    raise SpecSyntaxError("text after '{'", lineno, col0 + 9 + m.end(), ("end of line",))
                block = (name, lineno, {})
                continue
            at = raw.index("=") + 2
            valuations.append(ValuationDecl(name, _call(raw[at - 1:], lineno, at), None, lineno))
            continue
        key, eq, rest = body.partition("=")
        key = key.strip()
        if not eq:
            raise SpecSyntaxError("expected a declaration", lineno, col0,
                                  ("seed =", "field =", "valuation", "order =", "annotate", "check"))
        at = raw.index("=") + 2
        if key == "seed":
            val = rest.strip()
            if not re.fullmatch(r"-?\d+", val):
                raise SpecSyntaxError("seed must be an integer", lineno, at + 1, ("integer",))
            seed = int(val)
        elif key == "field":
            field = parse_expr(raw[at - 1:], lineno, at)
        elif key == "order":
            val = rest.strip()
            if val not in ("leading", "squares"):
                raise SpecSyntaxError(f"unknown order '{val}'", lineno, at + 1, ("leading", "squares"))
            order = val
        else:
            raise SpecSyntaxError(f"unknown key '{key}'", lineno, col0, ("seed", "field", "order"))
    if block is not None:
        raise SpecSyntaxError(f"valuation block '{block[0]}' is never closed", block[1], 1, ("'}'",))
    end = max(len(lines), 1)
    if field is None:
        raise SpecSyntaxError("no field declared", end, 1, ("field = ...",))
    if seed is None:
        raise SpecSyntaxError("no seed declared", end, 1, ("seed = N",))
    names = [v.name for v in valuations]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise SpecSyntaxError(f"valuation '{dup}' declared twice", 1, 1)
    doc = FieldSpecDocument(seed, field, tuple(valuations), order, tuple(annotations), tuple(checks))
    if build:
        from .build import build_model
        model = build_model(doc)
        for a in doc.annotations:
            if a.valuation not in model.valuations:
                raise SpecSyntaxError(f"annotation names unknown valuation '{a.valuation}'", a.line, 10,
                                      tuple(model.valuations))
        for c in doc.checks:
            for key in ("v", "w"):
                name = c.get(key)
                if name is not None and name not in model.valuations:
                    raise SpecSyntaxError(f"{c.kind}: unknown valuation '{name}'", c.line, 1,
                                          tuple(model.valuations))
    return doc


def _call(text: str, line: int, col: int) -> Call:
    node = parse_expr(text, line, col)
    if not isinstance(node, Call):
        raise SpecSyntaxError("expected a constructor call", line, col + len(text) - len(text.lstrip()), ("name(...)",))
    return node


def print_spec(doc: FieldSpecDocument) -> str:
    out = []
    if doc.seed is not None:
        out.append(f"seed = {doc.seed}")
    out.append(f"field = {doc.field}")
    for v in doc.valuations:
        if v.group is None:
            out.append(f"valuation {v.name} = {v.stack}")
        else:
            out += [f"valuation {v.name} {{", f"    stack = {v.stack}", f"    group = {v.group}", "}"]
    if doc.order is not None:
        out.append(f"order = {doc.order}")
    for a in doc.annotations:
        out.append(" ".join([f"annotate {a.valuation}"] + [f"{k}={_quote(v)}" for k, v in a.args]))
    for c in doc.checks:
        out.append(f"check {c}")
    return "\n".join(out) + "\n"
