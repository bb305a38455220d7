"""Problem files: a line-oriented format describing a valued base field, an
extension tower, declared facts, an optional abstract group model, and a
query.

Grammar (bit-exact):
  - sections headed by [base], [tower], [declare], [model], [query]
  - '#' starts a comment; blank lines ignored; whitespace insignificant
  - [tower] lines:  name: expression-in-X  (over everything defined above)
  - other lines:    key = value; a line whose value itself contains '='
    tokens is split on whitespace into several key=value pairs
  - expressions: integers, defined names, + - * / ^ and parentheses;
    ^ binds tightest, then * and /, then + and -, all left-associative;
    exponents must be integer subexpressions
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .basefield import PAdicField, TAdicField
from .errors import NonMonicMinPoly, ParseError, UndefinedSymbol
from .fields import QQ, FractionField, Poly, PrimeField
from .ramify import CutDescriptor, GroupModel
from .tower import Tower
from .value import INFINITY, Value


# ---------------------------------------------------------------------------
# tokenizer / expression parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()]))")


@dataclass
class _Tok:
    kind: str  # int | name | op | end
    text: str
    column: int


def _tokenize(text: str, line: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", line, pos + 1)
        if m.group(1):
            out.append(_Tok("int", m.group(1), m.start(1) + 1))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), m.start(2) + 1))
        else:
            out.append(_Tok("op", m.group(3), m.start(3) + 1))
        pos = m.end()
    out.append(_Tok("end", "", len(text) + 1))
    return out


class _ExprParser:
    """Pratt parser producing a small AST of tuples."""

    def __init__(self, text: str, line: int):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self):
        node = self.parse_expr(0)
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input {tok.text!r}", self.line, tok.column)
        return node

    def parse_expr(self, min_bp: int):
        node = self.parse_prefix()
        while True:
            tok = self.peek()
            if tok.kind != "op" or tok.text not in "+-*/^":
                break
            bp = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}[tok.text]
            if bp < min_bp:
                break
            self.next()
            # left-associative throughout: right side binds one tighter
            rhs = self.parse_expr(bp + 1)
            node = (tok.text, node, rhs)
        return node

    def parse_prefix(self):
        tok = self.next()
        if tok.kind == "int":
            return ("int", int(tok.text))
        if tok.kind == "name":
            return ("name", tok.text, tok.column)
        if tok.kind == "op" and tok.text == "-":
            return ("neg", self.parse_expr(25))
        if tok.kind == "op" and tok.text == "+":
            return self.parse_expr(25)
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr(0)
            close = self.next()
            if close.text != ")":
                raise ParseError("expected ')'", self.line, close.column)
            return node
        raise ParseError(f"unexpected token {tok.text!r}", self.line, tok.column)


def parse_expression(text: str, line: int = 0):
    return _ExprParser(text, line).parse()


def _int_value(node, line):
    """Evaluate an exponent subtree to a plain integer."""
    kind = node[0]
    if kind == "int":
        return node[1]
    if kind == "neg":
        return -_int_value(node[1], line)
    if kind in "+-*/" and len(node) == 3:
        a, b = _int_value(node[1], line), _int_value(node[2], line)
        if kind == "+":
            return a + b
        if kind == "-":
            return a - b
        if kind == "*":
            return a * b
        if kind == "/":
            if b == 0 or a % b:
                raise ParseError("exponent must be an integer", line)
            return a // b
    if kind == "^":
        return _int_value(node[1], line) ** _int_value(node[2], line)
    raise ParseError("exponent must be an integer expression", line)


def eval_expression(node, field, env, x_name: Optional[str] = None, line: int = 0) -> Poly:
    """Evaluate an AST to a polynomial in X over `field` (degree 0 = scalar).
    Division is only by scalars; exponents are integers (negative only on
    nonzero scalars)."""
    kind = node[0]
    if kind == "int":
        return Poly.const(field, field.from_int(node[1]))
    if kind == "name":
        name = node[1]
        if x_name is not None and name == x_name:
            return Poly.x(field)
        if name not in env:
            raise UndefinedSymbol(f"undefined symbol {name!r}", line, node[2])
        return Poly.const(field, env[name])
    if kind == "neg":
        return -eval_expression(node[1], field, env, x_name, line)
    a = eval_expression(node[1], field, env, x_name, line)
    if kind == "^":
        n = _int_value(node[2], line)
        if n < 0:
            if a.degree != 0:
                raise ParseError("negative power of a polynomial", line)
            return Poly.const(field, field.pow(a.coeffs[0], n))
        return a**n
    b = eval_expression(node[2], field, env, x_name, line)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    if kind == "*":
        return a * b
    if kind == "/":
        if b.degree != 0:
            raise ParseError("division by a polynomial in the indeterminate", line)
        if b.is_zero:
            raise ParseError("division by zero", line)
        return a.scale(field.inv(b.coeffs[0]))
    raise ParseError(f"bad expression node {kind!r}", line)


# ---------------------------------------------------------------------------
# problem files


@dataclass
class ProblemFile:
    base: object
    tower: Tower
    env_names: list  # generator names in order
    declarations: dict
    model: Optional[GroupModel]
    model_raw: Optional[dict]
    query: dict
    path: Optional[str] = None

    def element(self, expr_text: str, line: int = 0):
        """Evaluate an element expression over the full tower."""
        tower = self.tower
        field = tower.top_field
        env = _top_env(self)
        node = parse_expression(expr_text, line)
        val = eval_expression(node, field, env, x_name=None, line=line)
        if val.degree > 0:
            raise ParseError("expected an element, found a polynomial", line)
        raw = val.coeffs[0] if val.coeffs else field.zero()
        from .tower import TowerElement

        return TowerElement(tower, raw)

    def base_poly(self, expr_text: str, line: int = 0) -> Poly:
        """Evaluate a polynomial-in-X expression over the base field."""
        env = dict(_base_env(self.base))
        node = parse_expression(expr_text, line)
        return eval_expression(node, self.base.field, env, x_name="X", line=line)


def _base_env(base):
    env = {}
    if isinstance(base, TAdicField):
        env[base.uniformizer_name] = base.uniformizer()
        if isinstance(base.coeff, FractionField):
            env[base.coeff.var] = base.lift_residue(base.coeff.gen())
    return env


def _top_env(problem: ProblemFile):
    tower = problem.tower
    env = {}
    for name, raw in _base_env(problem.base).items():
        env[name] = tower.from_base(raw).raw
    for i, name in enumerate(problem.env_names, start=1):
        env[name] = tower.generator(i).raw
    return env


_SECTIONS = ("base", "tower", "declare", "model", "query")

_TRUE = ("true", "yes", "1")
_FALSE = ("false", "no", "0")


def parse_problem(text) -> ProblemFile:
    """Parse a problem file from text or bytes."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    sections = {name: [] for name in _SECTIONS}
    current = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        stripped = rawline.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            name = stripped.strip("[]").strip().lower()
            if name not in sections:
                raise ParseError(f"unknown section [{name}]", lineno)
            current = name
            continue
        if current is None:
            raise ParseError("content before any section header", lineno)
        sections[current].append((lineno, stripped))

    base = _parse_base(sections["base"])
    declarations = _parse_kv(sections["declare"])
    decl = _interpret_declarations(declarations)

    tower = Tower(base, decl)
    env_names = []
    for lineno, line in sections["tower"]:
        if ":" not in line:
            raise ParseError("tower lines are 'name: expression'", lineno)
        name, expr = line.split(":", 1)
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise ParseError(f"bad generator name {name!r}", lineno)
        field = tower.top_field
        env = {}
        for bname, raw in _base_env(base).items():
            x = raw
            for f in tower.fields[1:]:
                x = f.embed(x)
            env[bname] = x
        for i, gname in enumerate(env_names, start=1):
            env[gname] = tower.generator(i).raw
        node = parse_expression(expr.strip(), lineno)
        minpoly = eval_expression(node, field, env, x_name="X", line=lineno)
        if minpoly.degree < 2:
            raise NonMonicMinPoly("tower polynomial must have degree >= 2", lineno)
        if not minpoly.is_monic:
            raise NonMonicMinPoly("tower polynomial must be monic in X", lineno)
        tower.adjoin(name, minpoly)
        env_names.append(name)

    model = None
    model_raw = None
    model_kv = _parse_kv(sections["model"])
    if model_kv:
        if "json" not in model_kv:
            raise ParseError("[model] needs a json = {...} line")
        model_raw = json.loads(model_kv["json"])
        model = _model_from_json(model_raw)

    query = _parse_kv(sections["query"])
    return ProblemFile(
        base=base,
        tower=tower,
        env_names=env_names,
        declarations=declarations,
        model=model,
        model_raw=model_raw,
        query=query,
    )


def _parse_kv(lines) -> dict:
    out = {}
    for lineno, line in lines:
        if "=" not in line:
            raise ParseError("expected key = value", lineno)
        pieces = line.split()
        if all("=" in p and not p.startswith("=") and not p.endswith("=") for p in pieces) and len(pieces) > 1:
            pairs = [p.split("=", 1) for p in pieces]
        else:
            pairs = [line.split("=", 1)]
        for key, value in pairs:
            key = key.strip().lower()
            if key in out:
                raise ParseError(f"duplicate key {key!r}", lineno)
            out[key] = value.strip()
    return out


def _parse_base(lines):
    kv = _parse_kv(lines)
    kind = kv.get("kind", "t-adic").lower()
    if kind == "p-adic":
        p = int(kv.get("p", kv.get("char", "0")))
        return PAdicField(p)
    if kind != "t-adic":
        raise ParseError(f"unknown base kind {kind!r}")
    char = int(kv.get("char", "0"))
    uniformizer = kv.get("uniformizer", "t")
    variables = [v for v in kv.get("vars", "").replace(",", " ").split() if v]
    coeff = QQ if char == 0 else PrimeField(char)
    for var in variables:
        coeff = FractionField(coeff, var)
    return TAdicField(coeff, uniformizer)


def _interpret_declarations(kv: dict) -> dict:
    decl = {}
    inv = {}
    for key, value in kv.items():
        low = value.lower()
        if key in ("unibranched", "pure", "distinguished_at_zero", "tame", "purely_wild", "max_dist_in_s"):
            if low in _TRUE:
                decl[key] = True
            elif low in _FALSE:
                decl[key] = False
            else:
                raise ParseError(f"{key} must be a boolean, got {value!r}")
        elif key == "depth":
            decl["depth"] = int(value)
        elif key == "l_index":
            decl["L_index"] = int(value)
        elif key in ("f", "defect", "tame_degree"):
            inv[key] = int(value)
        elif key == "max_dist_attained":
            decl[key] = None if low in ("none", "no") else Fraction(value)
        else:
            decl[key] = value
    if inv:
        decl["invariants"] = inv
    if "depth" in decl:
        decl.setdefault("invariants", {})["depth"] = decl["depth"]
    return decl


def _model_from_json(data: dict) -> GroupModel:
    def as_value(x):
        if x is None or x == "inf":
            return INFINITY
        return Value(Fraction(x[0], x[1]))

    regime = data.get("regime", {"kind": "defectless"})
    if isinstance(regime, str):
        regime = {"kind": regime}
    cut = None
    if regime["kind"] == "defect":
        c = regime["cut"]
        kind = c.get("kind", "principal") if isinstance(c, dict) else "principal"
        endpoint = c["endpoint"] if isinstance(c, dict) else c
        cut = CutDescriptor(kind=kind, endpoint=Fraction(endpoint[0], endpoint[1]))
    return GroupModel(
        elements=list(data["elements"]),
        table=[list(row) for row in data["table"]],
        distance=[as_value(x) for x in data["distance"]],
        value_of_a=as_value(data["value_of_a"]),
        regime=regime["kind"],
        cut=cut,
        pure=bool(data.get("pure", True)),
    )
