"""Text formats: equation systems (`res`), modal formulas (`form`),
probabilistic transition systems (`plts`) and boolean systems (`bes`).

All four parsers share one tokenizer.  `#` starts a comment until end of
line.  Numeric literals are nonnegative integers or `p/q` fractions
written without spaces; `inf` is a literal and `-inf` parses via unary
minus.  Identifiers may contain dot-separated segments, which is how
state-indexed variables are spelled in generated files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import bes as bes_mod
from . import modal
from .errors import ParseError
from .expr import (
    Add,
    Cond,
    CondA,
    Const,
    EqInf,
    EqNegInf,
    Expr,
    Max,
    Min,
    Neg,
    Scale,
    Var,
    eliminate_negation,
)
from .extreal import INF, format_value
from .res import RES, Equation
from .solver import FixOp

RESERVED = {
    "mu",
    "nu",
    "res",
    "form",
    "plts",
    "bes",
    "init",
    "trans",
    "cond",
    "conda",
    "eqinf",
    "eqninf",
    "inf",
    "true",
    "false",
}

_SYMBOLS = ("\\/", "/\\", "->", "||", "&&", "+", "-", "*", "(", ")", ";", "=", ".", ",", ":", "<", ">", "[", "]")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*")
_NUMBER = re.compile(r"\d+(?:/\d+)?")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | one of _SYMBOLS | eof
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        m = _NUMBER.match(source, i)
        if m and ch.isdigit():
            # a trailing '/' only counts as a fraction bar when digits follow
            text = m.group(0)
            tokens.append(Token("number", text, line, col))
            i += len(text)
            col += len(text)
            continue
        m = _IDENT.match(source, i)
        if m:
            text = m.group(0)
            tokens.append(Token("ident", text, line, col))
            i += len(text)
            col += len(text)
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str = "") -> Token:
        tok = self.peek()
        if tok.kind != kind:
            wanted = what or kind
            raise ParseError(f"expected {wanted}, got {tok.text or 'end of input'!r}", tok.line, tok.col)
        return self.next()

    def expect_word(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text != word:
            raise ParseError(f"expected {word!r}, got {tok.text or 'end of input'!r}", tok.line, tok.col)
        return self.next()

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def variable(self) -> str:
        tok = self.expect("ident", "an identifier")
        if tok.text in RESERVED:
            raise ParseError(f"{tok.text!r} is reserved and cannot name a variable", tok.line, tok.col)
        return tok.text

    def number(self) -> Fraction:
        tok = self.expect("number", "a numeric literal")
        return Fraction(tok.text)

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)


# -- expressions (res files) ---------------------------------------------------


def _parse_expr(p: _Parser) -> Expr:
    return _parse_max(p)


def _parse_max(p: _Parser) -> Expr:
    left = _parse_min(p)
    if p.peek().kind == "\\/":
        p.next()
        return Max(left, _parse_max(p))
    return left


def _parse_min(p: _Parser) -> Expr:
    left = _parse_add(p)
    if p.peek().kind == "/\\":
        p.next()
        return Min(left, _parse_min(p))
    return left


def _parse_add(p: _Parser) -> Expr:
    items = [_parse_scale(p)]
    negated = [False]
    while p.peek().kind in ("+", "-"):
        op = p.next().kind
        items.append(_parse_scale(p))
        negated.append(op == "-")
    terms = [Neg(t) if neg else t for t, neg in zip(items, negated)]
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Add(t, out)
    return out


def _parse_scale(p: _Parser) -> Expr:
    if p.peek().kind == "number" and p.peek(1).kind == "*":
        tok = p.peek()
        coeff = p.number()
        if coeff <= 0:
            raise ParseError("scale constants must be positive", tok.line, tok.col)
        p.expect("*")
        return Scale(coeff, _parse_scale(p))
    return _parse_unary(p)


def _parse_unary(p: _Parser) -> Expr:
    if p.peek().kind == "-":
        p.next()
        inner = _parse_unary(p)
        if isinstance(inner, Const):
            return Const(-inner.value)
        return Neg(inner)
    return _parse_expr_atom(p)


def _parse_expr_atom(p: _Parser) -> Expr:
    tok = p.peek()
    if tok.kind == "(":
        p.next()
        e = _parse_expr(p)
        p.expect(")")
        return e
    if tok.kind == "number":
        return Const(p.number())
    if tok.kind == "ident":
        if tok.text == "inf":
            p.next()
            return Const(INF)
        if tok.text in ("cond", "conda"):
            p.next()
            p.expect("(")
            guard = _parse_expr(p)
            p.expect(",")
            low = _parse_expr(p)
            p.expect(",")
            high = _parse_expr(p)
            p.expect(")")
            return Cond(guard, low, high) if tok.text == "cond" else CondA(guard, low, high)
        if tok.text in ("eqinf", "eqninf"):
            p.next()
            p.expect("(")
            arg = _parse_expr(p)
            p.expect(")")
            return EqInf(arg) if tok.text == "eqinf" else EqNegInf(arg)
        return Var(p.variable())
    p.fail(f"expected an expression, got {tok.text or 'end of input'!r}")


def parse_expr(source: str) -> Expr:
    """A single expression; negation is eliminated."""
    p = _Parser(source)
    e = _parse_expr(p)
    p.expect("eof", "end of input")
    return eliminate_negation(e)


def parse_res(source: str) -> RES:
    p = _Parser(source)
    p.expect_word("res")
    equations = []
    seen = set()
    while p.peek().kind != "eof":
        tok = p.peek()
        if not (p.at_word("mu") or p.at_word("nu")):
            raise ParseError(f"expected 'mu' or 'nu', got {tok.text!r}", tok.line, tok.col)
        op = FixOp.MU if p.next().text == "mu" else FixOp.NU
        var_tok = p.peek()
        var = p.variable()
        if var in seen:
            raise ParseError(f"duplicate equation for {var}", var_tok.line, var_tok.col)
        seen.add(var)
        p.expect("=")
        rhs = _parse_expr(p)
        p.expect(";")
        equations.append(Equation(op, var, eliminate_negation(rhs)))
    return RES(tuple(equations))


# -- formulas (form files) -------------------------------------------------------


def _parse_formula(p: _Parser) -> modal.Formula:
    return _parse_form_or(p)


def _parse_binder(p: _Parser) -> modal.Formula:
    word = p.next().text
    var = p.variable()
    tok = p.peek()
    if tok.kind != ".":
        raise ParseError(
            "expected '.' after the binder variable (write 'mu X . body')", tok.line, tok.col
        )
    p.next()
    body = _parse_formula(p)
    return modal.Mu(var, body) if word == "mu" else modal.Nu(var, body)


def _parse_form_or(p: _Parser) -> modal.Formula:
    left = _parse_form_and(p)
    if p.peek().kind == "\\/":
        p.next()
        return modal.FOr(left, _parse_form_or(p))
    return left


def _parse_form_and(p: _Parser) -> modal.Formula:
    left = _parse_form_sum(p)
    if p.peek().kind == "/\\":
        p.next()
        return modal.FAnd(left, _parse_form_and(p))
    return left


def _parse_form_sum(p: _Parser) -> modal.Formula:
    left = _parse_form_prefix(p)
    if p.peek().kind == "+":
        p.next()
        return modal.FAdd(left, _parse_form_sum(p))
    return left


def _parse_form_prefix(p: _Parser) -> modal.Formula:
    tok = p.peek()
    if tok.kind == "number" and p.peek(1).kind == "*":
        coeff = p.number()
        if coeff <= 0:
            raise ParseError("scale constants must be positive", tok.line, tok.col)
        p.expect("*")
        return modal.FScale(coeff, _parse_form_prefix(p))
    if tok.kind == "<":
        p.next()
        action = p.variable()
        p.expect(">")
        return modal.Diamond(action, _parse_form_prefix(p))
    if tok.kind == "[":
        p.next()
        action = p.variable()
        p.expect("]")
        return modal.Box(action, _parse_form_prefix(p))
    return _parse_form_atom(p)


def _parse_form_atom(p: _Parser) -> modal.Formula:
    tok = p.peek()
    if tok.kind == "(":
        p.next()
        f = _parse_formula(p)
        p.expect(")")
        return f
    if tok.kind == "-":
        # negative constants only
        p.next()
        inner = p.peek()
        if inner.kind == "number":
            return modal.FConst(-p.number())
        if inner.kind == "ident" and inner.text == "inf":
            p.next()
            return modal.FConst(-INF)
        raise ParseError("'-' in formulas must precede a numeric literal", inner.line, inner.col)
    if tok.kind == "number":
        return modal.FConst(p.number())
    if tok.kind == "ident":
        if tok.text == "inf":
            p.next()
            return modal.FConst(INF)
        if tok.text in ("mu", "nu"):
            return _parse_binder(p)
        return modal.FVar(p.variable())
    p.fail(f"expected a formula, got {tok.text or 'end of input'!r}")


def parse_formula(source: str) -> modal.Formula:
    p = _Parser(source)
    p.expect_word("form")
    f = _parse_formula(p)
    p.expect("eof", "end of input")
    return f


# -- transition systems (plts files) ----------------------------------------------


def _parse_distribution(p: _Parser) -> list[tuple[str, Fraction]]:
    entries = []
    while True:
        state = p.variable()
        p.expect(":")
        tok = p.peek()
        prob = p.number()
        if prob <= 0:
            raise ParseError("probabilities must be positive", tok.line, tok.col)
        entries.append((state, prob))
        if p.peek().kind != ",":
            break
        p.next()
    if sum(prob for _, prob in entries) != 1:
        p.fail("probabilities must sum to exactly 1")
    return entries


def parse_plts(source: str) -> modal.PLTS:
    p = _Parser(source)
    p.expect_word("plts")
    p.expect_word("init")
    init = _parse_distribution(p)
    p.expect(";")

    states: list[str] = []
    actions: list[str] = []

    def note_state(s: str):
        if s not in states:
            states.append(s)

    for s, _ in init:
        note_state(s)

    transitions = []
    while p.peek().kind != "eof":
        p.expect_word("trans")
        source_state = p.variable()
        action = p.variable()
        p.expect("->")
        dist = _parse_distribution(p)
        p.expect(";")
        note_state(source_state)
        for s, _ in dist:
            note_state(s)
        if action not in actions:
            actions.append(action)
        transitions.append(modal.Transition(source_state, action, tuple(dist)))

    return modal.PLTS(tuple(states), tuple(actions), tuple(transitions), tuple(init))


# -- boolean systems (bes files) ---------------------------------------------------


def _parse_bool_or(p: _Parser) -> bes_mod.BoolExpr:
    left = _parse_bool_and(p)
    if p.peek().kind == "||":
        p.next()
        return bes_mod.BOr(left, _parse_bool_or(p))
    return left


def _parse_bool_and(p: _Parser) -> bes_mod.BoolExpr:
    left = _parse_bool_atom(p)
    if p.peek().kind == "&&":
        p.next()
        return bes_mod.BAnd(left, _parse_bool_and(p))
    return left


def _parse_bool_atom(p: _Parser) -> bes_mod.BoolExpr:
    tok = p.peek()
    if tok.kind == "(":
        p.next()
        e = _parse_bool_or(p)
        p.expect(")")
        return e
    if tok.kind == "ident":
        if tok.text == "true":
            p.next()
            return bes_mod.TRUE
        if tok.text == "false":
            p.next()
            return bes_mod.FALSE
        return bes_mod.BVar(p.variable())
    p.fail(f"expected a boolean expression, got {tok.text or 'end of input'!r}")


def parse_bes(source: str) -> bes_mod.BES:
    p = _Parser(source)
    p.expect_word("bes")
    equations = []
    seen = set()
    while p.peek().kind != "eof":
        tok = p.peek()
        if not (p.at_word("mu") or p.at_word("nu")):
            raise ParseError(f"expected 'mu' or 'nu', got {tok.text!r}", tok.line, tok.col)
        op = FixOp.MU if p.next().text == "mu" else FixOp.NU
        var_tok = p.peek()
        var = p.variable()
        if var in seen:
            raise ParseError(f"duplicate equation for {var}", var_tok.line, var_tok.col)
        seen.add(var)
        p.expect("=")
        rhs = _parse_bool_or(p)
        p.expect(";")
        equations.append(bes_mod.BesEquation(op, var, rhs))
    return bes_mod.BES(tuple(equations))


# -- printers ------------------------------------------------------------------------

_MAX, _MIN, _ADD, _SCALE, _UNARY, _ATOM = 1, 2, 3, 4, 5, 9


def _expr_level(e: Expr) -> int:
    match e:
        case Max(_, _):
            return _MAX
        case Min(_, _):
            return _MIN
        case Add(_, _):
            return _ADD
        case Scale(_, _):
            return _SCALE
        case Neg(_):
            return _UNARY
        case Const(v) if v < 0:
            return _UNARY
        case _:
            return _ATOM


def format_expr(e: Expr, context: int = 0) -> str:
    level = _expr_level(e)
    match e:
        case Var(name):
            body = name
        case Const(value):
            body = format_value(value)
        case Scale(coeff, arg):
            body = f"{format_value(coeff)} * {format_expr(arg, _SCALE)}"
        case Add(left, right):
            body = f"{format_expr(left, _ADD + 1)} + {format_expr(right, _ADD)}"
        case Min(left, right):
            body = f"{format_expr(left, _MIN + 1)} /\\ {format_expr(right, _MIN)}"
        case Max(left, right):
            body = f"{format_expr(left, _MAX + 1)} \\/ {format_expr(right, _MAX)}"
        case Cond(guard, low, high):
            body = f"cond({format_expr(guard)}, {format_expr(low)}, {format_expr(high)})"
        case CondA(guard, low, high):
            body = f"conda({format_expr(guard)}, {format_expr(low)}, {format_expr(high)})"
        case EqInf(arg):
            body = f"eqinf({format_expr(arg)})"
        case EqNegInf(arg):
            body = f"eqninf({format_expr(arg)})"
        case Neg(arg):
            body = f"-{format_expr(arg, _UNARY)}"
        case _:
            raise TypeError(f"not an expression: {e!r}")
    return f"({body})" if level < context else body


def format_equation(eq: Equation) -> str:
    return f"{eq.op.value} {eq.var} = {format_expr(eq.rhs)};"


def format_res(system: RES) -> str:
    return "res\n" + "".join(format_equation(eq) + "\n" for eq in system)


_F_BIND, _F_OR, _F_AND, _F_SUM, _F_PREFIX, _F_ATOM = 0, 1, 2, 3, 4, 9


def _formula_level(f: modal.Formula) -> int:
    match f:
        case modal.Mu(_, _) | modal.Nu(_, _):
            return _F_BIND
        case modal.FOr(_, _):
            return _F_OR
        case modal.FAnd(_, _):
            return _F_AND
        case modal.FAdd(_, _):
            return _F_SUM
        case modal.FScale(_, _) | modal.Diamond(_, _) | modal.Box(_, _):
            return _F_PREFIX
        case modal.FConst(v) if v < 0:
            return _F_PREFIX
        case _:
            return _F_ATOM


def format_formula(f: modal.Formula, context: int = 0) -> str:
    level = _formula_level(f)
    match f:
        case modal.FVar(name):
            body = name
        case modal.FConst(value):
            body = format_value(value)
        case modal.FScale(coeff, arg):
            body = f"{format_value(coeff)} * {format_formula(arg, _F_PREFIX)}"
        case modal.FAdd(left, right):
            body = f"{format_formula(left, _F_SUM + 1)} + {format_formula(right, _F_SUM)}"
        case modal.FAnd(left, right):
            body = f"{format_formula(left, _F_AND + 1)} /\\ {format_formula(right, _F_AND)}"
        case modal.FOr(left, right):
            body = f"{format_formula(left, _F_OR + 1)} \\/ {format_formula(right, _F_OR)}"
        case modal.Diamond(action, arg):
            body = f"< {action} > {format_formula(arg, _F_PREFIX)}"
        case modal.Box(action, arg):
            body = f"[ {action} ] {format_formula(arg, _F_PREFIX)}"
        case modal.Mu(var, bodyf):
            body = f"mu {var} . {format_formula(bodyf, _F_BIND)}"
        case modal.Nu(var, bodyf):
            body = f"nu {var} . {format_formula(bodyf, _F_BIND)}"
        case _:
            raise TypeError(f"not a formula: {f!r}")
    return f"({body})" if level < context else body


def format_formula_file(f: modal.Formula) -> str:
    return "form\n" + format_formula(f) + "\n"


def _format_distribution(dist) -> str:
    return ", ".join(f"{state}:{format_value(prob)}" for state, prob in dist)


def format_plts(model: modal.PLTS) -> str:
    lines = ["plts", f"init {_format_distribution(model.init)};"]
    for t in model.transitions:
        lines.append(f"trans {t.source} {t.action} -> {_format_distribution(t.dist)};")
    return "\n".join(lines) + "\n"


def format_bool_expr(e: bes_mod.BoolExpr, context: int = 0) -> str:
    match e:
        case bes_mod.BVar(name):
            return name
        case bes_mod.BConst(value):
            return "true" if value else "false"
        case bes_mod.BOr(left, right):
            body = f"{format_bool_expr(left, 2)} || {format_bool_expr(right, 1)}"
            return f"({body})" if context > 1 else body
        case bes_mod.BAnd(left, right):
            body = f"{format_bool_expr(left, 3)} && {format_bool_expr(right, 2)}"
            return f"({body})" if context > 2 else body
    raise TypeError(f"not a boolean expression: {e!r}")


def format_bes(system: bes_mod.BES) -> str:
    return "bes\n" + "".join(
        f"{eq.op.value} {eq.var} = {format_bool_expr(eq.rhs)};\n" for eq in system
    )
