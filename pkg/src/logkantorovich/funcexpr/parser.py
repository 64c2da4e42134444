"""Pratt parser and canonical printer for the function expression grammar.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" ( "-" unary | power ) ] ;      (* right associative *)
    atom    = number | "x" | "pi" | "e"
            | func "(" expr { "," expr } ")"
            | "(" expr ")" ;
    func    = "exp" | "ln" | "sin" | "cos" | "abs" | "lnmu" | "min" | "max" ;
    number  = digits [ "." [ digits ] ] [ exponent ] | "." digits [ exponent ] ;

Binding strength: ``^`` > unary ``-`` > ``* /`` > ``+ -``.  Implicit
multiplication (``2x``) is a syntax error.
"""

from __future__ import annotations

import re

from ..errors import ParseError, UnknownIdentifierError
from .ast import CONSTANTS, FUNCTIONS, BinOp, Call, Const, Neg, Num, Var

MAX_SOURCE_BYTES = 64 * 1024
MAX_NESTING = 200

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY_BP = 30
_OPERAND_START = {"number", "identifier", "(", "-"}
_AFTER_OPERAND = {"+", "-", "*", "/", "^", ")", ",", "end of input"}


class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind = kind
        self.text = text
        self.offset = offset

    def describe(self):
        return "end of input" if self.kind == "end" else repr(self.text)


def tokenize(src: str):
    tokens = []
    pos = 0
    if src.isascii():
        _byte_offset = lambda _src, index: index
    else:
        starts = [0]
        for ch in src:
            starts.append(starts[-1] + len(ch.encode("utf-8")))
        _byte_offset = lambda _src, index: starts[index]
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos), _OPERAND_START)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            tkind = text if kind == "op" else ("number" if kind == "num" else "identifier")
            tokens.append(_Token(tkind, text, _byte_offset(src, pos)))
        pos = m.end()
    tokens.append(_Token("end", "", len(src.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0
        self.nesting = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok.kind != kind:
            raise ParseError(f"unexpected {tok.describe()}", tok.offset, {kind})
        return tok

    def expression(self, rbp=0):
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise ParseError("expression nested too deeply", self.peek().offset)
        left = self.nud(self.advance())
        while True:
            tok = self.peek()
            if tok.kind in ("number", "identifier", "("):
                raise ParseError("implicit multiplication is not allowed", tok.offset, _AFTER_OPERAND)
            lbp = _LBP.get(tok.kind, 0)
            if lbp <= rbp:
                break
            self.advance()
            left = self.led(tok, left)
        self.nesting -= 1
        return left

    def nud(self, tok):
        if tok.kind == "number":
            return Num(float(tok.text))
        if tok.kind == "-":
            return Neg(self.expression(_UNARY_BP))
        if tok.kind == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if tok.kind == "identifier":
            name = tok.text
            if name in FUNCTIONS:
                self.expect("(")
                args = [self.expression(0)]
                while self.peek().kind == ",":
                    self.advance()
                    args.append(self.expression(0))
                close = self.expect(")")
                if len(args) != FUNCTIONS[name]:
                    raise ParseError(
                        f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}", close.offset
                    )
                return Call(name, tuple(args))
            if name == "x":
                return Var()
            if name in CONSTANTS:
                return Const(name)
            raise UnknownIdentifierError(f"unknown identifier {name!r}", tok.offset, {"x", "pi", "e", *FUNCTIONS})
        raise ParseError(f"unexpected {tok.describe()}", tok.offset, _OPERAND_START)

    def led(self, tok, left):
        if tok.kind == "^":
            return BinOp("^", left, self.expression(_LBP["^"] - 1))
        return BinOp(tok.kind, left, self.expression(_LBP[tok.kind]))


def parse_ast(src: str):
    if not isinstance(src, str):
        raise TypeError("expression source must be a string")
    if len(src.encode("utf-8")) > MAX_SOURCE_BYTES:
        raise ParseError("expression longer than 64 KiB", MAX_SOURCE_BYTES)
    tokens = tokenize(src)
    if tokens[0].kind == "end":
        raise ParseError("empty expression", 0, _OPERAND_START)
    parser = _Parser(tokens)
    node = parser.expression(0)
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected {tail.describe()}", tail.offset, _AFTER_OPERAND - {")", ","})
    return node


# --- canonical printer -------------------------------------------------------

_PREC = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _UNARY_BP
    return 100


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_source(node) -> str:
    """Print ``node`` with the minimal parentheses that re-parse to the same tree."""
    if isinstance(node, Num):
        return _format_number(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        if _prec(node.operand) < _UNARY_BP:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(node, Call):
        return f"{node.func}(" + ", ".join(to_source(a) for a in node.args) + ")"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = to_source(node.left)
        right = to_source(node.right)
        if node.op == "^":
            if _prec(node.left) < 100:
                left = f"({left})"
            if _prec(node.right) < p:
                right = f"({right})"
            return f"{left}^{right}"
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        sep = f" {node.op} " if p == 10 else node.op
        return f"{left}{sep}{right}"
    raise TypeError(f"not an expression node: {node!r}")
