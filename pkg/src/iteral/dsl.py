"""Text syntax for iterals: tokenizer, recursive-descent parser, printer, evaluator.

Grammar (whitespace is insignificant)::

    expr    ::= term (("+" | "-") term)*
    term    ::= unary (("*" | "/") unary)*
    unary   ::= "-" unary | power
    power   ::= atom ("^" unary)?                 # right associative
    atom    ::= number | "i" | ident | call | iteral | "(" expr ")"
    call    ::= ("sin" | "cos" | "exp" | "abs" | "sqrt") "(" expr ")"
    iteral  ::= "I[" ident "=" expr "," "n" "=" (natural | "inf") "]" "(" expr ")"

``I[x=2, n=2](x^2)`` is 16: ``x^2`` applied twice starting from 2.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from . import core
from .core import UNBOUNDED, ConvergencePolicy, DEFAULT_POLICY

__all__ = [
    "Num",
    "Var",
    "Unary",
    "Binary",
    "Call",
    "Iteral",
    "Expr",
    "ParseError",
    "UnboundVariableError",
    "FUNCTIONS",
    "parse",
    "format_expr",
    "evaluate",
    "free_vars",
    "format_value",
]

FUNCTIONS = ("sin", "cos", "exp", "abs", "sqrt")
RESERVED = frozenset(FUNCTIONS) | {"i"}


@dataclass(frozen=True)
class Num:
    value: Union[int, float, complex]

    def __eq__(self, other):
        # 2 and 2.0 print differently, so they are different literals
        return (
            isinstance(other, Num)
            and type(self.value) is type(other.value)
            and self.value == other.value
        )

    def __hash__(self):
        return hash((type(self.value), self.value))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


@dataclass(frozen=True)
class Iteral:
    var: str
    init: "Expr"
    count: object  # int >= 0 or UNBOUNDED
    body: "Expr"


Expr = Union[Num, Var, Unary, Binary, Call, Iteral]


class ParseError(ValueError):
    def __init__(self, message, pos, src=""):
        self.pos = pos
        self.src = src
        super().__init__(f"{message} at position {pos}")


class UnboundVariableError(NameError):
    pass


# ---------------------------------------------------------------- tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()\[\],=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    pos: int


def _tokenize(src: str):
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


# ------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, src):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise ParseError(message, tok.pos, self.src)

    def advance(self):
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text):
        if self.tok.text != text or self.tok.kind not in ("op", "ident"):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self):
        e = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            e = Binary(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            e = Binary(op, e, self.unary())
        return e

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            if any(ch in tok.text for ch in ".eE"):
                return Num(float(tok.text))
            return Num(int(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "ident":
            if tok.text == "I" and self.peek().text == "[":
                return self.iteral()
            if tok.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            self.advance()
            if tok.text == "i":
                return Num(1j)
            return Var(tok.text)
        self.fail(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input")

    def iteral(self):
        self.advance()  # I
        self.expect("[")
        var = self.tok
        if var.kind != "ident" or var.text in RESERVED:
            self.fail("expected an iteration variable name")
        self.advance()
        self.expect("=")
        init = self.expr()
        self.expect(",")
        if self.tok.kind != "ident" or self.tok.text != "n":
            self.fail("expected 'n=' iteration count")
        self.advance()
        self.expect("=")
        tok = self.tok
        if tok.kind == "ident" and tok.text == "inf":
            count = UNBOUNDED
        elif tok.kind == "num" and tok.text.isdigit():
            count = int(tok.text)
        else:
            self.fail("iteration count must be a natural number or 'inf'")
        self.advance()
        self.expect("]")
        self.expect("(")
        body = self.expr()
        self.expect(")")
        return Iteral(var.text, init, count, body)


def parse(src: str) -> Expr:
    """Parse iteral source text into an AST; raises ParseError with a position."""
    return _Parser(src).parse()


# ------------------------------------------------------------------ printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_ATOM = 5


def _prec(e):
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary):
        return _PREC["neg"]
    return _ATOM


def _format_num(v):
    # Literals the parser cannot produce (negative, general complex) are
    # parenthesised so the printed text keeps their value.
    if isinstance(v, bool):
        raise TypeError("booleans are not numeric literals")
    if isinstance(v, complex):
        if v == 1j:
            return "i"
        return f"({_format_num(v.real)} + {_format_num(v.imag)}*i)"
    text = str(v) if isinstance(v, int) else repr(v)
    return f"({text})" if text.startswith("-") else text


_SUB = str.maketrans("0123456789+-=()aeoxhklmnpst", "₀₁₂₃₄₅₆₇₈₉₊₋₌₍₎ₐₑₒₓₕₖₗₘₙₚₛₜ")
_SUP = str.maketrans("0123456789+-=()in", "⁰¹²³⁴⁵⁶⁷⁸⁹⁺⁻⁼⁽⁾ⁱⁿ")


def _script(text, table, fallback):
    out = text.replace(" ", "").translate(table)
    if all(ord(ch) > 127 for ch in out):
        return out
    return f"{fallback}{{{text}}}"


class _Printer:
    def __init__(self, unicode=False):
        self.unicode = unicode

    def __call__(self, e):
        if isinstance(e, Num):
            return _format_num(e.value)
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Call):
            return f"{e.fn}({self(e.arg)})"
        if isinstance(e, Iteral):
            count = "inf" if e.count is UNBOUNDED else str(e.count)
            if self.unicode:
                if e.count is UNBOUNDED:
                    sup = "^∞"
                else:
                    sup = _script(count, _SUP, "^")
                sub = _script(f"{e.var}={self(e.init)}", _SUB, "_")
                return f"И{sub}{sup}({self(e.body)})"
            return f"I[{e.var}={self(e.init)}, n={count}]({self(e.body)})"
        if isinstance(e, Unary):
            inner = self(e.operand)
            if _prec(e.operand) < _PREC["neg"]:
                inner = f"({inner})"
            return f"-{inner}"
        if isinstance(e, Binary):
            p = _PREC[e.op]
            lhs, rhs = self(e.lhs), self(e.rhs)
            lp, rp = _prec(e.lhs), _prec(e.rhs)
            if e.op == "^":
                # base must be an atom; exponent is parsed as a unary
                if lp <= p:
                    lhs = f"({lhs})"
                if rp < _PREC["neg"]:
                    rhs = f"({rhs})"
                return f"{lhs}^{rhs}"
            if lp < p:
                lhs = f"({lhs})"
            if rp <= p:
                rhs = f"({rhs})"
            sep = " " if e.op in "+-" else ""
            return f"{lhs}{sep}{e.op}{sep}{rhs}"
        raise TypeError(f"not an expression: {e!r}")


def format_expr(e: Expr, unicode: bool = False) -> str:
    """Canonical source text; ``parse(format_expr(e)) == e``.

    With ``unicode=True`` the iteral is drawn as ``И`` with sub/superscripts,
    for display only (that form does not parse back).
    """
    return _Printer(unicode)(e)


# ---------------------------------------------------------------- evaluator


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Unary):
        return free_vars(e.operand)
    if isinstance(e, Binary):
        return free_vars(e.lhs) | free_vars(e.rhs)
    if isinstance(e, Call):
        return free_vars(e.arg)
    if isinstance(e, Iteral):
        return free_vars(e.init) | (free_vars(e.body) - {e.var})
    raise TypeError(f"not an expression: {e!r}")


class _Abort(Exception):
    """A nested iteral produced no value; carries its outcome outward."""

    def __init__(self, outcome):
        self.outcome = outcome


def _exact(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _inexact(x):
    return x if isinstance(x, complex) else complex(x)


def _binary(op, a, b):
    if _exact(a) and _exact(b):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "^" and b >= 0:
            return a**b
    a, b = _inexact(a), _inexact(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    if op == "^":
        return a**b
    raise ValueError(f"unknown operator {op!r}")


def _call(fn, x):
    z = _inexact(x)
    if fn == "sin":
        return cmath.sin(z)
    if fn == "cos":
        return cmath.cos(z)
    if fn == "exp":
        return cmath.exp(z)
    if fn == "sqrt":
        return cmath.sqrt(z)
    if fn == "abs":
        return complex(abs(z))
    raise ValueError(f"unknown function {fn!r}")


def _value_of(outcome):
    if isinstance(outcome, (core.Value, core.Converged)):
        return outcome.value
    raise _Abort(outcome)


class _Evaluator:
    def __init__(self, policy):
        self.policy = policy

    def __call__(self, e, env):
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Var):
            try:
                return env[e.name]
            except KeyError:
                raise UnboundVariableError(f"unbound variable {e.name!r}") from None
        if isinstance(e, Unary):
            v = self(e.operand, env)
            return -v if _exact(v) else -_inexact(v)
        if isinstance(e, Binary):
            return _binary(e.op, self(e.lhs, env), self(e.rhs, env))
        if isinstance(e, Call):
            return _call(e.fn, self(e.arg, env))
        if isinstance(e, Iteral):
            return _value_of(self.iteral(e, env))
        raise TypeError(f"not an expression: {e!r}")

    def iteral(self, e, env):
        start = self(e.init, env)

        def body(x):
            scope = dict(env)
            scope[e.var] = x
            try:
                return self(e.body, scope)
            except _Abort as exc:
                raise core.DomainExitError(str(exc.outcome)) from None

        return core.iterate(body, start, e.count, self.policy)


def evaluate(
    e: Union[Expr, str],
    env: Optional[Mapping[str, object]] = None,
    policy: ConvergencePolicy = DEFAULT_POLICY,
):
    """Evaluate to a core outcome (``Value``, ``Converged``, ``Diverged``, ...).

    Integer literals stay exact under ``+ - *`` and ``^`` with a nonnegative
    integer exponent; everything else is computed in complex floating point.
    Free variables must be bound in ``env``; a missing one raises
    ``UnboundVariableError`` before anything is computed.
    """
    if isinstance(e, str):
        e = parse(e)
    env = dict(env or {})
    missing = sorted(free_vars(e) - set(env))
    if missing:
        raise UnboundVariableError(f"unbound variable {missing[0]!r}")
    ev = _Evaluator(policy)
    try:
        if isinstance(e, Iteral):
            return ev.iteral(e, env)
        return core.Value(ev(e, env))
    except _Abort as exc:
        return exc.outcome
    except (ZeroDivisionError, OverflowError, ValueError, core.DomainExitError):
        return core.DomainExit(0)


def format_value(v) -> str:
    """Print a scalar: integers exactly, real-valued complex numbers as reals."""
    if _exact(v):
        return str(v)
    if isinstance(v, complex):
        if v.imag == 0:
            return repr(v.real)
        sign = "-" if v.imag < 0 or (v.imag == 0 and str(v.imag)[0] == "-") else "+"
        return f"{v.real!r} {sign} {abs(v.imag)!r}*i"
    return repr(v)
