"""A small text language for declaring processes and asserting identities.

Grammar (EBNF):

    script   := { stmt } ;
    stmt     := "universe" ident {ident}
              | "process" ident "{" "delta" ":" memb ";" "gamma" ":" memb ";" "}"
              | "let" ident "=" expr
              | "assert" expr (("==" | "~=" | "<=") expr)? ;
    memb     := "{" [ ident "=" number { "," ident "=" number } ] "}" ;
    expr     := term { ("+" | "|") term } ;
    term     := factor { ("*" | "&") factor } ;
    factor   := "-" factor | ident | "OMEGA" | "TOP" | "BOT" | "(" expr ")" ;

"#" starts a line comment; whitespace is insignificant; LF and CRLF both
work. Numbers are rationals "n/d", exact decimals ("0.7" is 7/10), or
integers. Operators: "*" product, "+" sum, "&" meet, "|" join, unary "-"
reflection. "-" binds tightest, then "*"/"&" (left-associative, one
precedence level), then "+"/"|" (likewise); relations are lowest and
non-associative. A bare "assert expr" merely requires the expression to
evaluate.

A script declares exactly one universe, before anything else; names must be
defined before use and never redefined. Declared processes use the strict
blocking policy: a blocking execution in a script is treated as an authoring
error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Union

from .algebra import join, meet, product, reflect, sum_
from .core import (
    BlockingPolicy,
    ConstantKind,
    FuzzyProcess,
    Universe,
    constant,
    first_refinement_violation,
    first_support_difference,
    first_value_difference,
    make_process,
)
from .errors import (
    DuplicateDefinition,
    MissingUniverse,
    ParseError,
    UnknownIdentifier,
)

_KEYWORDS = {"universe", "process", "let", "assert", "delta", "gamma"}
_CONSTANTS = {
    "OMEGA": ConstantKind.OMEGA,
    "TOP": ConstantKind.TOP,
    "BOT": ConstantKind.BOTTOM,
}
_PUNCT = ("==", "~=", "<=", "{", "}", "(", ")", ":", ";", ",", "=", "+", "|", "*", "&", "-")


@dataclass(frozen=True)
class Token:
    kind: str  # keyword/punct literal, or "ident", "number", "const", "eof"
    text: str
    line: int
    column: int
    value: Fraction | None = None


def _is_ident_start(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z" or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or "0" <= ch <= "9"


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    column = 1
    last_pos = (1, 1)
    length = len(text)

    def error(message: str, at_line: int, at_column: int, found: str):
        raise ParseError(message, at_line, at_column, token=found)

    while pos < length:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            column = 1
            continue
        if ch in " \t\r":
            pos += 1
            column += 1
            continue
        if ch == "#":
            while pos < length and text[pos] != "\n":
                pos += 1
            continue
        start_line, start_column = line, column
        if _is_ident_start(ch):
            begin = pos
            while pos < length and _is_ident_char(text[pos]):
                pos += 1
                column += 1
            word = text[begin:pos]
            if word in _KEYWORDS:
                kind = word
            elif word in _CONSTANTS:
                kind = "const"
            else:
                kind = "ident"
            tokens.append(Token(kind, word, start_line, start_column))
        elif _is_digit(ch):
            begin = pos
            while pos < length and _is_digit(text[pos]):
                pos += 1
                column += 1
            if pos < length and text[pos] in "/.":
                sep = text[pos]
                pos += 1
                column += 1
                digits_start = pos
                while pos < length and _is_digit(text[pos]):
                    pos += 1
                    column += 1
                if pos == digits_start:
                    error(
                        f"malformed number {text[begin:pos]!r}",
                        start_line,
                        start_column,
                        text[begin:pos],
                    )
                if sep == "/" and int(text[digits_start:pos]) == 0:
                    error(
                        f"zero denominator in {text[begin:pos]!r}",
                        start_line,
                        start_column,
                        text[begin:pos],
                    )
            word = text[begin:pos]
            tokens.append(
                Token("number", word, start_line, start_column, value=Fraction(word))
            )
        else:
            matched = None
            for punct in _PUNCT:
                if text.startswith(punct, pos):
                    matched = punct
                    break
            if matched is None:
                error(f"unexpected character {ch!r}", start_line, start_column, ch)
            pos += len(matched)
            column += len(matched)
            tokens.append(Token(matched, matched, start_line, start_column))
        last_pos = (line, column - 1)
    tokens.append(Token("eof", "end of input", last_pos[0], last_pos[1]))
    return tokens


class BinaryOp(Enum):
    PRODUCT = "*"
    SUM = "+"
    MEET = "&"
    JOIN = "|"


class Relation(Enum):
    VALUE_EQ = "=="
    SUPPORT_EQ = "~="
    REFINES = "<="


@dataclass(frozen=True)
class Var:
    name: str
    line: int
    column: int


@dataclass(frozen=True)
class Const:
    kind: ConstantKind


@dataclass(frozen=True)
class Reflect:
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: BinaryOp
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[Var, Const, Reflect, Binary]


@dataclass(frozen=True)
class UniverseDecl:
    labels: tuple[str, ...]
    line: int
    column: int


@dataclass(frozen=True)
class ProcessDef:
    name: str
    delta_pairs: tuple[tuple[str, Fraction], ...]
    gamma_pairs: tuple[tuple[str, Fraction], ...]
    line: int
    column: int


@dataclass(frozen=True)
class LetBinding:
    name: str
    expr: Expr
    line: int
    column: int


@dataclass(frozen=True)
class Assertion:
    lhs: Expr
    relation: Relation | None
    rhs: Expr | None
    line: int
    column: int


Statement = Union[UniverseDecl, ProcessDef, LetBinding, Assertion]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]

    @property
    def universe_decl(self) -> UniverseDecl:
        return self.statements[0]

    @property
    def assertions(self) -> list[Assertion]:
        return [s for s in self.statements if isinstance(s, Assertion)]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    def _peek(self) -> Token:
        return self._tokens[self._pos]

    def _advance(self) -> Token:
        token = self._tokens[self._pos]
        if token.kind != "eof":
            self._pos += 1
        return token

    def _fail(self, expected: set[str], what: str) -> None:
        token = self._peek()
        raise ParseError(
            f"expected {what}, found {token.text!r}",
            token.line,
            token.column,
            token=token.text,
            expected=expected,
        )

    def _expect(self, kind: str, what: str | None = None) -> Token:
        token = self._peek()
        if token.kind != kind:
            self._fail({kind}, what or f"'{kind}'")
        return self._advance()

    def parse_script(self) -> Script:
        statements: list[Statement] = []
        while self._peek().kind != "eof":
            statements.append(self._statement())
        return Script(tuple(statements))

    def _statement(self) -> Statement:
        token = self._peek()
        if token.kind == "universe":
            return self._universe_decl()
        if token.kind == "process":
            return self._process_def()
        if token.kind == "let":
            return self._let_binding()
        if token.kind == "assert":
            return self._assertion()
        self._fail(
            {"universe", "process", "let", "assert"},
            "a statement (universe, process, let, or assert)",
        )

    def _universe_decl(self) -> UniverseDecl:
        keyword = self._advance()
        labels = [self._expect("ident", "a label").text]
        while self._peek().kind == "ident":
            labels.append(self._advance().text)
        return UniverseDecl(tuple(labels), keyword.line, keyword.column)

    def _process_def(self) -> ProcessDef:
        keyword = self._advance()
        name = self._expect("ident", "a process name").text
        self._expect("{")
        self._expect("delta", "'delta'")
        self._expect(":")
        delta_pairs = self._membership()
        self._expect(";")
        self._expect("gamma", "'gamma'")
        self._expect(":")
        gamma_pairs = self._membership()
        self._expect(";")
        self._expect("}")
        return ProcessDef(name, delta_pairs, gamma_pairs, keyword.line, keyword.column)

    def _membership(self) -> tuple[tuple[str, Fraction], ...]:
        self._expect("{")
        pairs: list[tuple[str, Fraction]] = []
        if self._peek().kind != "}":
            pairs.append(self._membership_pair())
            while self._peek().kind == ",":
                self._advance()
                pairs.append(self._membership_pair())
        self._expect("}")
        return tuple(pairs)

    def _membership_pair(self) -> tuple[str, Fraction]:
        label = self._expect("ident", "a label").text
        self._expect("=")
        number = self._expect("number", "a grade")
        return (label, number.value)

    def _let_binding(self) -> LetBinding:
        keyword = self._advance()
        name = self._expect("ident", "a name").text
        self._expect("=")
        expr = self._expression()
        return LetBinding(name, expr, keyword.line, keyword.column)

    def _assertion(self) -> Assertion:
        keyword = self._advance()
        lhs = self._expression()
        relation = None
        rhs = None
        if self._peek().kind in ("==", "~=", "<="):
            relation = Relation(self._advance().kind)
            rhs = self._expression()
        return Assertion(lhs, relation, rhs, keyword.line, keyword.column)

    def _expression(self) -> Expr:
        expr = self._term()
        while self._peek().kind in ("+", "|"):
            op = BinaryOp(self._advance().kind)
            expr = Binary(op, expr, self._term())
        return expr

    def _term(self) -> Expr:
        expr = self._factor()
        while self._peek().kind in ("*", "&"):
            op = BinaryOp(self._advance().kind)
            expr = Binary(op, expr, self._factor())
        return expr

    def _factor(self) -> Expr:
        token = self._peek()
        if token.kind == "-":
            self._advance()
            return Reflect(self._factor())
        if token.kind == "ident":
            self._advance()
            return Var(token.text, token.line, token.column)
        if token.kind == "const":
            self._advance()
            return Const(_CONSTANTS[token.text])
        if token.kind == "(":
            self._advance()
            expr = self._expression()
            self._expect(")")
            return expr
        self._fail(
            {"ident", "const", "-", "("},
            "a factor (name, OMEGA, TOP, BOT, '-' or '(')",
        )


def _walk_vars(expr: Expr) -> Iterator[Var]:
    if isinstance(expr, Var):
        yield expr
    elif isinstance(expr, Reflect):
        yield from _walk_vars(expr.operand)
    elif isinstance(expr, Binary):
        yield from _walk_vars(expr.lhs)
        yield from _walk_vars(expr.rhs)


def _validate(script: Script) -> Script:
    statements = script.statements
    if not statements or not isinstance(statements[0], UniverseDecl):
        if statements:
            first = statements[0]
            raise MissingUniverse(
                "the first statement must declare the universe",
                first.line,
                first.column,
            )
        raise MissingUniverse("a script must declare a universe", 1, 1)
    defined: set[str] = set()
    for statement in statements[1:]:
        if isinstance(statement, UniverseDecl):
            raise DuplicateDefinition(
                "the universe is already declared", statement.line, statement.column
            )
        if isinstance(statement, (LetBinding, Assertion)):
            exprs = (
                [statement.expr]
                if isinstance(statement, LetBinding)
                else [statement.lhs] + ([statement.rhs] if statement.rhs else [])
            )
            for expr in exprs:
                for var in _walk_vars(expr):
                    if var.name not in defined:
                        raise UnknownIdentifier(
                            f"unknown name {var.name!r}", var.line, var.column
                        )
        if isinstance(statement, (ProcessDef, LetBinding)):
            if statement.name in defined:
                raise DuplicateDefinition(
                    f"{statement.name!r} is already defined",
                    statement.line,
                    statement.column,
                )
            defined.add(statement.name)
    return script


def parse_script(text: str) -> Script:
    """Parse a script; the result satisfies the script invariants (single
    leading universe, defined-before-use, no redefinition)."""
    return _validate(_Parser(tokenize(text)).parse_script())


def parse_expression(text: str) -> Expr:
    """Parse a standalone expression (used by the command line)."""
    parser = _Parser(tokenize(text))
    expr = parser._expression()
    trailing = parser._peek()
    if trailing.kind != "eof":
        raise ParseError(
            f"unexpected {trailing.text!r} after expression",
            trailing.line,
            trailing.column,
            token=trailing.text,
            expected={"eof"},
        )
    return expr


@dataclass(frozen=True)
class AssertionResult:
    index: int  # 1-based position among the script's assertions
    relation: Relation | None
    holds: bool
    witness_label: str | None


@dataclass(frozen=True)
class EvalReport:
    universe: Universe
    bindings: dict[str, FuzzyProcess]
    assertions: tuple[AssertionResult, ...]

    @property
    def all_hold(self) -> bool:
        return all(result.holds for result in self.assertions)


_BINARY_FUNCTIONS = {
    BinaryOp.PRODUCT: product,
    BinaryOp.SUM: sum_,
    BinaryOp.MEET: meet,
    BinaryOp.JOIN: join,
}


def evaluate_expression(
    expr: Expr, universe: Universe, bindings: dict[str, FuzzyProcess]
) -> FuzzyProcess:
    if isinstance(expr, Var):
        try:
            return bindings[expr.name]
        except KeyError:
            raise UnknownIdentifier(
                f"unknown name {expr.name!r}", expr.line, expr.column
            ) from None
    if isinstance(expr, Const):
        return constant(expr.kind, universe)
    if isinstance(expr, Reflect):
        return reflect(evaluate_expression(expr.operand, universe, bindings))
    return _BINARY_FUNCTIONS[expr.op](
        evaluate_expression(expr.lhs, universe, bindings),
        evaluate_expression(expr.rhs, universe, bindings),
    )


def _check_assertion(
    index: int, assertion: Assertion, universe, bindings
) -> AssertionResult:
    lhs = evaluate_expression(assertion.lhs, universe, bindings)
    if assertion.relation is None:
        return AssertionResult(index, None, True, None)
    rhs = evaluate_expression(assertion.rhs, universe, bindings)
    if assertion.relation is Relation.VALUE_EQ:
        witness = first_value_difference(lhs, rhs)
    elif assertion.relation is Relation.SUPPORT_EQ:
        witness = first_support_difference(lhs, rhs)
    else:
        witness = first_refinement_violation(lhs, rhs)
    return AssertionResult(index, assertion.relation, witness is None, witness)


def evaluate(script: Script) -> EvalReport:
    """Run a script: build its processes (strict blocking policy), evaluate
    let bindings, and check every assertion. Evaluation continues past failed
    assertions; a failed one records the first differing or violating label
    in universe order."""
    universe = Universe(script.universe_decl.labels)
    bindings: dict[str, FuzzyProcess] = {}
    results: list[AssertionResult] = []
    index = 0
    for statement in script.statements[1:]:
        if isinstance(statement, ProcessDef):
            bindings[statement.name] = make_process(
                universe,
                statement.delta_pairs,
                statement.gamma_pairs,
                BlockingPolicy.STRICT,
            )
        elif isinstance(statement, LetBinding):
            bindings[statement.name] = evaluate_expression(
                statement.expr, universe, bindings
            )
        else:
            index += 1
            results.append(_check_assertion(index, statement, universe, bindings))
    return EvalReport(universe, bindings, tuple(results))


def format_universe(universe: Universe) -> str:
    return "universe " + " ".join(universe.labels)


def _format_membership(subset) -> str:
    return "{" + ", ".join(f"{x}={g}" for x, g in subset.items()) + "}"


def format_process(process: FuzzyProcess, name: str = "p") -> str:
    """Canonical one-line form; parsing it back (after a universe
    declaration) reproduces the process exactly."""
    return (
        f"process {name} {{ delta: {_format_membership(process.delta)}; "
        f"gamma: {_format_membership(process.gamma)}; }}"
    )


_PRECEDENCE = {
    BinaryOp.SUM: 1,
    BinaryOp.JOIN: 1,
    BinaryOp.PRODUCT: 2,
    BinaryOp.MEET: 2,
}


def format_expr(expr: Expr) -> str:
    """Render an expression with the fewest parentheses that preserve its
    shape under re-parsing."""

    def render(node: Expr, context: int) -> str:
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Const):
            return node.kind.value
        if isinstance(node, Reflect):
            return "-" + render(node.operand, 3)
        level = _PRECEDENCE[node.op]
        text = (
            render(node.lhs, level)
            + f" {node.op.value} "
            + render(node.rhs, level + 1)
        )
        return f"({text})" if level < context else text

    return render(expr, 0)
