"""A small parser and exact evaluator for divisor-class expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := INT | NAME | 'K' | '-' factor | '(' expr ')' | factor '^' INT

``K`` denotes the canonical class of the model the expression is evaluated
against.  Powers are repeated intersection products, so exponents are
restricted to 1..3.  Degree checking happens at evaluation time, not at
parse time: the same syntax tree can be evaluated on a 3-fold (total
degree 3) and on a surface (total degree 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .chow import DivisorClass
from .errors import DegreeMismatch, ExprSyntaxError, UnknownName
from .models import SurfaceModel, ThreefoldModel


# ---------------------------------------------------------------------------
# Syntax trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Canonical:
    pass


@dataclass(frozen=True)
class Add:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Sub:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class Mul:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Pow:
    base: "ExprAst"
    exponent: int


ExprAst = Union[Lit, Name, Canonical, Add, Sub, Neg, Mul, Pow]


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # INT NAME OP EOF
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append(_Token("OP", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(i, "a token")
    tokens.append(_Token("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _expect_op(self, op: str) -> None:
        tok = self.current
        if tok.kind != "OP" or tok.text != op:
            raise ExprSyntaxError(tok.offset, f"'{op}'")
        self._advance()

    def parse(self) -> ExprAst:
        node = self.expr()
        tok = self.current
        if tok.kind != "EOF":
            raise ExprSyntaxError(tok.offset, "end of input")
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self.current.kind == "OP" and self.current.text in "+-":
            op = self._advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.current.kind == "OP" and self.current.text == "*":
            self._advance()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> ExprAst:
        tok = self.current
        if tok.kind == "OP" and tok.text == "-":
            self._advance()
            return Neg(self.factor())
        node = self._primary()
        while self.current.kind == "OP" and self.current.text == "^":
            caret = self._advance()
            exp_tok = self.current
            if exp_tok.kind != "INT":
                raise ExprSyntaxError(exp_tok.offset, "an integer exponent")
            self._advance()
            k = int(exp_tok.text)
            if not 1 <= k <= 3:
                raise ExprSyntaxError(exp_tok.offset, "an exponent between 1 and 3")
            node = Pow(node, k)
            del caret
        return node

    def _primary(self) -> ExprAst:
        tok = self.current
        if tok.kind == "INT":
            self._advance()
            return Lit(int(tok.text))
        if tok.kind == "NAME":
            self._advance()
            if tok.text == "K":
                return Canonical()
            return Name(tok.text)
        if tok.kind == "OP" and tok.text == "(":
            self._advance()
            node = self.expr()
            self._expect_op(")")
            return node
        raise ExprSyntaxError(tok.offset, "a number, a name or '('")


def parse(text: str) -> ExprAst:
    """Parse an expression; raises :class:`ExprSyntaxError` with the byte
    offset on malformed input."""
    return _Parser(text).parse()


def unparse(node: ExprAst) -> str:
    """Render a syntax tree back to text (fully parenthesized)."""
    if isinstance(node, Lit):
        return str(node.value)
    if isinstance(node, Name):
        return node.ident
    if isinstance(node, Canonical):
        return "K"
    if isinstance(node, Add):
        return f"({unparse(node.left)} + {unparse(node.right)})"
    if isinstance(node, Sub):
        return f"({unparse(node.left)} - {unparse(node.right)})"
    if isinstance(node, Neg):
        return f"(-{unparse(node.operand)})"
    if isinstance(node, Mul):
        return f"({unparse(node.left)} * {unparse(node.right)})"
    if isinstance(node, Pow):
        return f"({unparse(node.base)})^{node.exponent}"
    raise TypeError(f"not a syntax tree: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Poly:
    """Homogeneous element of the generator algebra: a degree together with
    integer coefficients on sorted generator monomials."""

    degree: int
    terms: tuple[tuple[tuple[str, ...], int], ...]

    @classmethod
    def scalar(cls, value: int) -> "_Poly":
        return cls(0, (((), value),) if value else ())

    @classmethod
    def from_class(cls, divisor: DivisorClass) -> "_Poly":
        return cls(1, tuple(((g,), v) for g, v in divisor.items))


def _poly_add(a: _Poly, b: _Poly, sign: int = 1) -> _Poly:
    if a.degree != b.degree:
        if not a.terms:
            a = _Poly(b.degree, ())
        elif not b.terms:
            b = _Poly(a.degree, ())
        else:
            raise DegreeMismatch(
                f"cannot add a degree-{a.degree} and a degree-{b.degree} expression"
            )
    merged = dict(a.terms)
    for mono, v in b.terms:
        merged[mono] = merged.get(mono, 0) + sign * v
    return _Poly(a.degree, tuple(sorted((m, v) for m, v in merged.items() if v)))


def _poly_mul(a: _Poly, b: _Poly, dim: int) -> _Poly:
    degree = a.degree + b.degree
    if degree > dim:
        raise DegreeMismatch(f"product has degree {degree} on a {dim}-dimensional model")
    merged: dict[tuple[str, ...], int] = {}
    for ma, va in a.terms:
        for mb, vb in b.terms:
            mono = tuple(sorted(ma + mb))
            merged[mono] = merged.get(mono, 0) + va * vb
    return _Poly(degree, tuple(sorted((m, v) for m, v in merged.items() if v)))


def _resolve(
    ident: str,
    generators: tuple[str, ...],
    classes: Mapping[str, DivisorClass],
) -> _Poly:
    if ident in classes:
        return _Poly.from_class(classes[ident])
    if ident in generators:
        return _Poly.from_class(DivisorClass.unit(ident))
    raise UnknownName(f"{ident!r} is neither a generator nor a tracked class")


def _eval_poly(
    node: ExprAst,
    generators: tuple[str, ...],
    canonical: DivisorClass,
    classes: Mapping[str, DivisorClass],
    dim: int,
) -> _Poly:
    if isinstance(node, Lit):
        return _Poly.scalar(node.value)
    if isinstance(node, Name):
        return _resolve(node.ident, generators, classes)
    if isinstance(node, Canonical):
        return _Poly.from_class(canonical)
    if isinstance(node, Add):
        return _poly_add(
            _eval_poly(node.left, generators, canonical, classes, dim),
            _eval_poly(node.right, generators, canonical, classes, dim),
        )
    if isinstance(node, Sub):
        return _poly_add(
            _eval_poly(node.left, generators, canonical, classes, dim),
            _eval_poly(node.right, generators, canonical, classes, dim),
            sign=-1,
        )
    if isinstance(node, Neg):
        inner = _eval_poly(node.operand, generators, canonical, classes, dim)
        return _Poly(inner.degree, tuple((m, -v) for m, v in inner.terms))
    if isinstance(node, Mul):
        return _poly_mul(
            _eval_poly(node.left, generators, canonical, classes, dim),
            _eval_poly(node.right, generators, canonical, classes, dim),
            dim,
        )
    if isinstance(node, Pow):
        base = _eval_poly(node.base, generators, canonical, classes, dim)
        out = base
        for _ in range(node.exponent - 1):
            out = _poly_mul(out, base, dim)
        return out
    raise TypeError(f"not a syntax tree: {node!r}")


def evaluate(
    node: ExprAst,
    model: Union[ThreefoldModel, SurfaceModel],
    classes: Optional[Mapping[str, DivisorClass]] = None,
) -> Fraction:
    """Evaluate an expression of full intersection degree against a model.

    On 3-fold models the total degree must be 3 and the result is an
    integer; on surfaces it must be 2 and may be half-integral on the cone.
    ``classes`` supplies extra names (tracked boundary classes and so on).
    """
    classes = dict(classes or {})
    if isinstance(model, ThreefoldModel):
        dim = 3
        generators = model.generators
        canonical = model.canonical
    else:
        if model.pairing is None or model.canonical is None:
            raise UnknownName(f"surface of kind {model.kind!r} has no pairing")
        dim = 2
        generators = model.pairing.generators
        canonical = model.canonical
    poly = _eval_poly(node, generators, canonical, classes, dim)
    if poly.degree != dim:
        raise DegreeMismatch(
            f"expression has degree {poly.degree}; the model needs degree {dim}"
        )
    total = Fraction(0)
    for mono, coeff in poly.terms:
        if isinstance(model, ThreefoldModel):
            total += coeff * model.form.value(*mono)
        else:
            assert model.pairing is not None
            total += coeff * model.pairing.value(*mono)
    return total


def evaluate_text(
    text: str,
    model: Union[ThreefoldModel, SurfaceModel],
    classes: Optional[Mapping[str, DivisorClass]] = None,
) -> Fraction:
    return evaluate(parse(text), model, classes)
