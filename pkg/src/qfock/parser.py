"""Surface syntax for operator expressions.

Grammar (whitespace insignificant):

    expr  := sum
    sum   := prod (("+" | "-") prod)*
    prod  := coeff? atom+
    atom  := "a(" int ")" | "a+(" int ")" | "s(" int ")"
           | "alpha^" int "(" expr ")" | atom "^" uint | "(" expr ")"
    coeff := int | "q^" uint | int "*" "q^" uint

"alpha^k(...)" is lowered at parse time: the shift acts on generators by
translating mode indices, so the returned AST never contains a shift node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ExprSyntaxError
from .qcombinat import QPolynomial
from .wickalg import WickExpr, annihilator, creator, field_op

# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Creator:
    mode: int


@dataclass(frozen=True)
class Annihilator:
    mode: int


@dataclass(frozen=True)
class Field:
    """a(mode) + a+(mode), written s(mode)."""

    mode: int


@dataclass(frozen=True)
class Power:
    base: "ExprAst"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple["ExprAst", ...]


@dataclass(frozen=True)
class Term:
    """One summand: integer coefficient times q**qpow times a product."""

    coeff: int
    qpow: int
    body: "ExprAst"


@dataclass(frozen=True)
class Sum:
    terms: tuple[Term, ...]


ExprAst = Union[Creator, Annihilator, Field, Power, Product, Sum]


# -- tokenizer --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<aplus>a\+)|(?P<alpha>alpha)|(?P<a>a)|(?P<s>s)|(?P<q>q)"
    r"|(?P<int>-?\d+)|(?P<lpar>\()|(?P<rpar>\))|(?P<caret>\^)|(?P<star>\*)"
    r"|(?P<plus>\+)|(?P<minus>-))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unknown token {src[pos:pos+8]!r}", pos)
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    # token helpers

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.src)

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            raise ExprSyntaxError(f"expected {kind}, found {self.peek() or 'end of input'}", self.pos())
        tok = self.tokens[self.i]
        self.i += 1
        return tok[1]

    def take_int(self) -> int:
        return int(self.take("int"))

    def take_uint(self) -> int:
        n = self.take_int()
        if n <= 0:
            raise ExprSyntaxError(f"exponent must be positive, got {n}", self.pos())
        return n

    # grammar

    def parse(self) -> ExprAst:
        node = self.sum()
        if self.i < len(self.tokens):
            raise ExprSyntaxError("trailing input", self.pos())
        return node

    def sum(self) -> ExprAst:
        lead = 1
        if self.peek() == "minus":
            self.take("minus")
            lead = -1
        elif self.peek() == "plus":
            self.take("plus")
        terms = [self.term(sign=lead)]
        while self.peek() in ("plus", "minus"):
            sign = 1 if self.take(self.peek()) == "+" else -1
            terms.append(self.term(sign=sign))
        if len(terms) == 1 and terms[0].coeff == 1 and terms[0].qpow == 0:
            return terms[0].body
        return Sum(tuple(terms))

    def term(self, sign: int) -> Term:
        coeff, qpow = self.coeff()
        return Term(coeff=sign * coeff, qpow=qpow, body=self.prod())

    def coeff(self) -> tuple[int, int]:
        coeff, qpow = 1, 0
        if self.peek() == "int":
            coeff = self.take_int()
            if self.peek() == "star":
                self.take("star")
                self.take("q")
                self.take("caret")
                qpow = self.take_uint()
        elif self.peek() == "q":
            self.take("q")
            self.take("caret")
            qpow = self.take_uint()
        return coeff, qpow

    def prod(self) -> ExprAst:
        factors = [self.atom()]
        while self.peek() in ("a", "aplus", "s", "alpha", "lpar"):
            factors.append(self.atom())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def atom(self) -> ExprAst:
        kind = self.peek()
        if kind in ("a", "aplus", "s"):
            self.take(kind)
            self.take("lpar")
            mode = self.take_int()
            self.take("rpar")
            node: ExprAst = {"a": Annihilator, "aplus": Creator, "s": Field}[kind](mode)
        elif kind == "alpha":
            self.take("alpha")
            self.take("caret")
            k = self.take_int()
            self.take("lpar")
            node = _apply_shift(self.sum(), k)
            self.take("rpar")
        elif kind == "lpar":
            self.take("lpar")
            node = self.sum()
            self.take("rpar")
        else:
            raise ExprSyntaxError(
                f"expected an operator atom, found {kind or 'end of input'}", self.pos()
            )
        while self.peek() == "caret":
            self.take("caret")
            node = Power(node, self.take_uint())
        return node


def _apply_shift(node: ExprAst, k: int) -> ExprAst:
    """Translate every mode index by k (the shift automorphism on generators)."""
    if isinstance(node, (Creator, Annihilator, Field)):
        return type(node)(node.mode + k)
    if isinstance(node, Power):
        return Power(_apply_shift(node.base, k), node.exponent)
    if isinstance(node, Product):
        return Product(tuple(_apply_shift(f, k) for f in node.factors))
    if isinstance(node, Sum):
        return Sum(tuple(Term(t.coeff, t.qpow, _apply_shift(t.body, k)) for t in node.terms))
    raise TypeError(f"unexpected AST node {node!r}")


def parse_expr(src: str) -> ExprAst:
    if not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src).parse()


# -- canonical printing -----------------------------------------------------


def _print_atom(node: ExprAst) -> str:
    if isinstance(node, Creator):
        return f"a+({node.mode})"
    if isinstance(node, Annihilator):
        return f"a({node.mode})"
    if isinstance(node, Field):
        return f"s({node.mode})"
    if isinstance(node, Power):
        return f"{_print_atom(node.base)}^{node.exponent}"
    return f"({canonical_str(node)})"


def canonical_str(node: ExprAst) -> str:
    """Deterministic surface form that reparses to an equal AST."""
    if isinstance(node, Sum):
        parts = []
        for t in node.terms:
            body = canonical_str(t.body) if isinstance(t.body, (Creator, Annihilator, Field, Power, Product)) else _print_atom(t.body)
            mag = abs(t.coeff)
            prefix = ""
            if t.qpow > 0:
                prefix = f"q^{t.qpow} " if mag == 1 else f"{mag}*q^{t.qpow} "
            elif mag != 1:
                prefix = f"{mag} "
            piece = f"{prefix}{body}"
            if not parts:
                parts.append(piece if t.coeff > 0 else f"- {piece}")
            else:
                parts.append(f"+ {piece}" if t.coeff > 0 else f"- {piece}")
        return " ".join(parts)
    if isinstance(node, Product):
        return " ".join(_print_atom(f) for f in node.factors)
    return _print_atom(node)


# -- lowering to the symbolic algebra ---------------------------------------


def to_wick(node: ExprAst) -> WickExpr:
    if isinstance(node, Creator):
        return creator(node.mode)
    if isinstance(node, Annihilator):
        return annihilator(node.mode)
    if isinstance(node, Field):
        return field_op(node.mode)
    if isinstance(node, Power):
        return to_wick(node.base) ** node.exponent
    if isinstance(node, Product):
        out = WickExpr.scalar(1)
        for f in node.factors:
            out = out * to_wick(f)
        return out
    if isinstance(node, Sum):
        out = WickExpr.zero()
        for t in node.terms:
            out = out + to_wick(t.body).scale(QPolynomial.monomial(t.qpow, t.coeff))
        return out
    raise TypeError(f"unexpected AST node {node!r}")
