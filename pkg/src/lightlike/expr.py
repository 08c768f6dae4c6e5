"""Expression language for surface coordinates, and the surface file format.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*``/``/``; ``^`` is right-associative)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | 'u' | 'v' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'

Exponents must be free of ``u`` and ``v``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace
from typing import Union

from .errors import (BadRange, DomainError, ExprSyntaxError, MissingKey, SurfaceFormatError,
                     UnknownIdentifier, UnknownKey)
from .jets import Jet3, jet_compose, jet_const, jet_pow, jet_var

__all__ = [
    "Const", "Var", "NamedConst", "Unary", "Binary", "Expr",
    "parse_expr", "to_text", "evaluate", "eval_jet3", "free_variables",
    "Gauge", "SurfaceDef", "parse_surface", "format_surface", "load_surface",
]

UNARY_FUNCS = ("sin", "cos", "tan", "sinh", "cosh", "exp", "ln", "sqrt")
NAMED_CONSTS = {"pi": math.pi, "e": math.e}
BINARY_OPS = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}
_OP_SYMBOL = {v: k for k, v in BINARY_OPS.items()}


def _cached_hash(self):
    # structural hash, computed once per node so that memo lookups on large
    # trees stay cheap
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self)))
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True)
class Const:
    value: float
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Var:
    name: str  # 'u' or 'v'
    __hash__ = _cached_hash


@dataclass(frozen=True)
class NamedConst:
    name: str  # 'pi' or 'e'
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or one of UNARY_FUNCS
    arg: "Expr"
    __hash__ = _cached_hash


@dataclass(frozen=True)
class Binary:
    op: str  # add sub mul div pow
    left: "Expr"
    right: "Expr"
    __hash__ = _cached_hash


Expr = Union[Const, Var, NamedConst, Unary, Binary]


# ------------------------------------------------------------------ lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str  # num ident op end
    text: str
    pos: int  # character index


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


# ----------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ExprSyntaxError(message, _byte_offset(self.text, tok.pos), self.text)

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        if self.tok.text != text or self.tok.kind != "op":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def parse(self):
        if self.tok.kind == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = BINARY_OPS[self.advance().text]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = BINARY_OPS[self.advance().text]
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.advance()
            exponent = self.unary()
            if free_variables(exponent):
                raise self.error("exponent must not depend on u or v", caret)
            return Binary("pow", base, exponent)
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name in ("u", "v"):
                return Var(name)
            if name in NAMED_CONSTS:
                return NamedConst(name)
            if name in UNARY_FUNCS:
                if not (self.tok.kind == "op" and self.tok.text == "("):
                    raise self.error(f"function {name!r} must be applied with parentheses")
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Unary(name, arg)
            raise UnknownIdentifier(name, _byte_offset(self.text, tok.pos), self.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_expr(text: str) -> Expr:
    """Parse an expression in ``u`` and ``v``.

    Raises ExprSyntaxError (with a byte offset) on malformed input and
    UnknownIdentifier for names outside the language.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------- printer

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_ATOM = 5


def _prec(e):
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC["neg"]
    return _ATOM


def _fmt_number(x):
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"constant {x!r} has no literal form")
    return repr(float(x))


def to_text(e: Expr) -> str:
    """Render ``e`` with the fewest parentheses that parse back to the same tree."""
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var | NamedConst):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = to_text(e.arg)
            if _prec(e.arg) < _PREC["neg"]:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{e.op}({to_text(e.arg)})"
    p = _PREC[e.op]
    left, right = to_text(e.left), to_text(e.right)
    if e.op == "pow":
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _PREC["neg"]:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    sym = _OP_SYMBOL[e.op]
    return f"{left} {sym} {right}" if p == 1 else f"{left}{sym}{right}"


def free_variables(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Unary):
        return free_variables(e.arg)
    if isinstance(e, Binary):
        return free_variables(e.left) | free_variables(e.right)
    return frozenset()


# ------------------------------------------------------------- evaluation

class _MathLib:
    """Real-valued function table; ``mpmath`` offers the same names."""
    sin = staticmethod(math.sin)
    cos = staticmethod(math.cos)
    tan = staticmethod(math.tan)
    sinh = staticmethod(math.sinh)
    cosh = staticmethod(math.cosh)
    exp = staticmethod(math.exp)
    log = staticmethod(math.log)
    sqrt = staticmethod(math.sqrt)
    pi = math.pi
    e = math.e


def evaluate(e: Expr, u, v, lib=_MathLib):
    """Plain pointwise evaluation.  ``lib`` may be :mod:`mpmath` for extended precision."""
    if isinstance(e, Const):
        return e.value if lib is _MathLib else lib.mpf(e.value)
    if isinstance(e, Var):
        return u if e.name == "u" else v
    if isinstance(e, NamedConst):
        return getattr(lib, e.name)
    if isinstance(e, Unary):
        x = evaluate(e.arg, u, v, lib)
        if e.op == "neg":
            return -x
        try:
            if e.op in ("ln", "sqrt") and not x > 0:
                raise DomainError(f"{e.op} requires a positive argument, got {x!r}")
            return getattr(lib, "log" if e.op == "ln" else e.op)(x)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{e.op}({x!r}): {exc}") from None
    a = evaluate(e.left, u, v, lib)
    b = evaluate(e.right, u, v, lib)
    if e.op == "add":
        return a + b
    if e.op == "sub":
        return a - b
    if e.op == "mul":
        return a * b
    if e.op == "div":
        if b == 0:
            raise DomainError("division by zero")
        return a / b
    p = float(b)
    if not p.is_integer() and not a > 0:
        raise DomainError(f"non-integer power {p!r} of a non-positive base")
    if p < 0 and a == 0:
        raise DomainError("negative power of zero")
    try:
        return a ** (int(p) if p.is_integer() else b)
    except OverflowError as exc:
        raise DomainError(str(exc)) from None


def eval_jet3(e: Expr, u: float, v: float, memo=None) -> Jet3:
    """Third-order jet of ``e`` about ``(u, v)``.

    ``memo`` may be a dict shared between calls at the same point; repeated
    subexpressions are then evaluated once.
    """
    if memo is None:
        memo = {}
    memo.setdefault(Var("u"), jet_var("u", u))
    memo.setdefault(Var("v"), jet_var("v", v))
    return _jet(e, memo)


def _jet(e, memo):
    hit = memo.get(e)
    if hit is None:
        hit = memo[e] = _jet_node(e, memo)
    return hit


def _jet_node(e, seeds):
    if isinstance(e, Const):
        return jet_const(e.value)
    if isinstance(e, Var):
        return seeds[e]
    if isinstance(e, NamedConst):
        return jet_const(NAMED_CONSTS[e.name])
    if isinstance(e, Unary):
        a = _jet(e.arg, seeds)
        return -a if e.op == "neg" else jet_compose(e.op, a)
    if e.op == "pow":
        exponent = evaluate(e.right, 0.0, 0.0)
        return jet_pow(_jet(e.left, seeds), exponent)
    a = _jet(e.left, seeds)
    b = _jet(e.right, seeds)
    if e.op == "add":
        return a + b
    if e.op == "sub":
        return a - b
    if e.op == "mul":
        return a * b
    return a / b


# ---------------------------------------------------------------- surfaces

@dataclass(frozen=True)
class Gauge:
    """Normalization of the radical field: ``unit`` or ``scale:<expr>``."""
    kind: str = "unit"
    expr: Expr | None = None

    @classmethod
    def parse(cls, text: str) -> "Gauge":
        text = text.strip()
        if text == "unit":
            return cls()
        if text.startswith("scale:"):
            return cls("scale", parse_expr(text[len("scale:"):]))
        raise SurfaceFormatError(f"gauge must be 'unit' or 'scale:<expr>', not {text!r}")

    @classmethod
    def scale(cls, expr: Expr | str) -> "Gauge":
        return cls("scale", parse_expr(expr) if isinstance(expr, str) else expr)

    def __str__(self):
        return "unit" if self.kind == "unit" else f"scale:{to_text(self.expr)}"


@dataclass(frozen=True)
class SurfaceDef:
    name: str
    x0: Expr
    x1: Expr
    x2: Expr
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    gauge: Gauge = field(default_factory=Gauge)

    def __post_init__(self):
        for key, (lo, hi) in (("u", self.u_range), ("v", self.v_range)):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise BadRange(f"{key} range must satisfy min < max, got [{lo}, {hi}]")
        for key in ("x0", "x1", "x2"):
            extra = free_variables(getattr(self, key)) - {"u", "v"}
            if extra:  # pragma: no cover - the parser cannot produce these
                raise SurfaceFormatError(f"{key} references {sorted(extra)}")

    @property
    def coords(self):
        return (self.x0, self.x1, self.x2)

    def with_gauge(self, gauge: Gauge | str) -> "SurfaceDef":
        if isinstance(gauge, str):
            gauge = Gauge.parse(gauge)
        return replace(self, gauge=gauge)

    def evaluate(self, u, v):
        return tuple(evaluate(x, u, v) for x in self.coords)

    def jets(self, u, v):
        memo = {}
        return [eval_jet3(x, u, v, memo) for x in self.coords]

    def to_text(self) -> str:
        return format_surface(self)


_REQUIRED = ("name", "x0", "x1", "x2", "u", "v")
_KEYS = _REQUIRED + ("gauge",)
_LINE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.*?)\s*$")


def _strip_comment(line):
    in_str = False
    for k, ch in enumerate(line):
        if ch == '"':
            in_str = not in_str
        elif ch == "#" and not in_str:
            return line[:k]
    return line


def _parse_string(raw, key, lineno):
    if len(raw) >= 2 and raw[0] == raw[-1] == '"':
        return raw[1:-1]
    raise SurfaceFormatError(f"line {lineno}: value of {key!r} must be a double-quoted string")


def _parse_range(raw, key, lineno):
    m = re.fullmatch(r"\[\s*([^,\]]+?)\s*,\s*([^,\]]+?)\s*\]", raw)
    if not m:
        raise SurfaceFormatError(f"line {lineno}: {key!r} must be a list [min, max]")
    try:
        lo, hi = float(m.group(1)), float(m.group(2))
    except ValueError:
        raise SurfaceFormatError(f"line {lineno}: {key!r} bounds must be real numbers") from None
    if not (lo < hi):
        raise BadRange(f"{key} range must satisfy min < max, got [{lo}, {hi}]")
    return lo, hi


def parse_surface(text: str) -> SurfaceDef:
    """Parse the ``key = value`` surface format (see README)."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line)
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise SurfaceFormatError(f"line {lineno}: expected 'key = value'")
        key, raw = m.groups()
        if key not in _KEYS:
            raise UnknownKey(key, lineno)
        if key in values:
            raise SurfaceFormatError(f"line {lineno}: duplicate key {key!r}")
        if key in ("u", "v"):
            values[key] = _parse_range(raw, key, lineno)
        else:
            values[key] = _parse_string(raw, key, lineno)
    for key in _REQUIRED:
        if key not in values:
            raise MissingKey(key)
    return SurfaceDef(
        name=values["name"],
        x0=parse_expr(values["x0"]),
        x1=parse_expr(values["x1"]),
        x2=parse_expr(values["x2"]),
        u_range=values["u"],
        v_range=values["v"],
        gauge=Gauge.parse(values.get("gauge", "unit")),
    )


def format_surface(s: SurfaceDef) -> str:
    return (
        f'name = "{s.name}"\n'
        f'x0 = "{to_text(s.x0)}"\n'
        f'x1 = "{to_text(s.x1)}"\n'
        f'x2 = "{to_text(s.x2)}"\n'
        f"u = [{s.u_range[0]!r}, {s.u_range[1]!r}]\n"
        f"v = [{s.v_range[0]!r}, {s.v_range[1]!r}]\n"
        f'gauge = "{s.gauge}"\n'
    )


def load_surface(path) -> SurfaceDef:
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())
