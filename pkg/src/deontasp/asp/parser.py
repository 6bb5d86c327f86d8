"""Reader and printer for the DLV-like concrete syntax.

Accepted notation::

    O(X) v -O(X) :- act(X).          % disjunction: v, | or the unicode wedge
    :- Do(help), Do(meet).           % constraint
    :~ -O(help), Happens(emergency). [1:3]
    :~ pacman(A,B), blueGhost(C,D,1), E=C-A, E<=2, -F(east). [1:4]
    #maxint=40.

Inside argument lists an identifier starting with an uppercase letter or ``_``
is a variable.  In literal position any identifier is a predicate name, so the
capitalised deontic vocabulary (``O``, ``F``, ``Do``, ``Happens``) parses as
written.  ``not`` is reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import AspSyntaxError, Diagnostic, Span
from .syntax import (
    Arith,
    Comparison,
    Fn,
    Literal,
    Naf,
    Program,
    Rule,
    Var,
    WeakConstraint,
)

MAX_NESTING = 64


@dataclass(frozen=True)
class SourceProgram:
    text: str
    name: str = "<string>"


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<weak>:~|:∼)
  | (?P<directive>\#[A-Za-z_]+)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|<>|==|≤|≥|≠|=|<|>)
  | (?P<punct>[.,()\[\]:|+∨]|-|−|¬)
    """,
    re.VERBOSE,
)

_OP_CANON = {"==": "=", "<>": "!=", "≤": "<=", "≥": ">=", "≠": "!="}
_NEG_SIGNS = ("-", "−", "¬")
_DISJ = ("|", "∨")


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, name: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise _error(name, line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _error(name: str, line: int, col: int, message: str, length: int = 1) -> AspSyntaxError:
    span = Span(name, line, col, line, col + max(length, 1))
    return AspSyntaxError(Diagnostic("error", message, span))


class _Parser:
    def __init__(self, tokens: list[Token], name: str):
        self.toks = tokens
        self.i = 0
        self.name = name
        self.depth = 0

    # -- token helpers -----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        where = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise _error(self.name, tok.line, tok.col, f"{message} (at {where})", len(tok.text))

    def expect(self, text: str, what: str | None = None) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            self.fail(f"expected {what or repr(text)}")
        return self.advance()

    def is_punct(self, *texts: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text in texts

    # -- grammar -------------------------------------------------------------
    def program(self) -> Program:
        rules: list[Rule] = []
        weak: list[WeakConstraint] = []
        maxint = None
        while self.tok.kind != "eof":
            start = self.tok
            if start.kind == "directive":
                maxint = self.directive()
            elif start.kind == "weak":
                weak.append(self.weak_constraint())
            else:
                rules.append(self.rule())
        return Program(tuple(rules), tuple(weak), maxint)

    def directive(self) -> int:
        tok = self.advance()
        if tok.text != "#maxint":
            self.fail(f"unknown directive {tok.text}", tok)
        self.expect("=")
        if self.tok.kind != "int":
            self.fail("expected integer after #maxint=")
        value = int(self.advance().text)
        self.end_of_statement()
        return value

    def end_of_statement(self) -> None:
        if not self.is_punct("."):
            self.fail("missing period at end of statement")
        self.advance()

    def weak_constraint(self) -> WeakConstraint:
        start = self.advance()
        body = self.body()
        self.end_of_statement()
        if not self.is_punct("["):
            self.fail("weak constraint needs a [weight:level] annotation")
        self.advance()
        weight = self.annotation_int("weight")
        if not self.is_punct(":"):
            self.fail("malformed [weight:level] annotation, expected ':'")
        self.advance()
        level = self.annotation_int("level")
        if not self.is_punct("]"):
            self.fail("malformed [weight:level] annotation, expected ']'")
        self.advance()
        wc = WeakConstraint(tuple(body), weight, level)
        self._check_safety(wc, start)
        return wc

    def annotation_int(self, what: str) -> int:
        if self.tok.kind != "int":
            self.fail(f"malformed [weight:level] annotation, {what} must be a non-negative integer")
        return int(self.advance().text)

    def rule(self) -> Rule:
        start = self.tok
        head: list[Literal] = []
        if start.kind != "if":
            head.append(self.literal(in_head=True))
            while True:
                if self.is_punct(*_DISJ) or (self.tok.kind == "ident" and self.tok.text == "v"):
                    self.advance()
                    head.append(self.literal(in_head=True))
                else:
                    break
        body: list = []
        if self.tok.kind == "if":
            self.advance()
            body = self.body()
        elif not head:
            self.fail("expected a rule")
        self.end_of_statement()
        r = Rule(tuple(head), tuple(body))
        self._check_safety(r, start)
        return r

    def body(self) -> list:
        elems = [self.body_element()]
        while self.is_punct(","):
            self.advance()
            elems.append(self.body_element())
        return elems

    def body_element(self):
        tok = self.tok
        if tok.kind == "ident" and tok.text == "not":
            self.advance()
            return Naf(self.literal())
        if tok.kind == "punct" and tok.text in _NEG_SIGNS:
            return self.literal()
        if tok.kind == "int" or (tok.kind == "punct" and tok.text == "("):
            return self.comparison()
        if tok.kind == "ident":
            save = self.i
            self.literal(bare_ok=True)
            if self.tok.kind == "op" or self.is_punct("+", *_NEG_SIGNS):
                self.i = save
                return self.comparison()
            self.i = save
            return self.literal()
        self.fail("expected a body literal")

    def comparison(self) -> Comparison:
        left = self.arith()
        if self.tok.kind != "op":
            self.fail("expected comparison operator")
        op = self.advance().text
        op = _OP_CANON.get(op, op)
        right = self.arith()
        return Comparison(op, left, right)

    def arith(self):
        left = self.arith_primary()
        while self.is_punct("+", *_NEG_SIGNS):
            op = "+" if self.advance().text == "+" else "-"
            right = self.arith_primary()
            left = Arith(op, left, right)
        return left

    def arith_primary(self):
        if self.is_punct("("):
            self.enter()
            self.advance()
            inner = self.arith()
            self.expect(")")
            self.depth -= 1
            return inner
        return self.term()

    def enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail("nesting too deep")

    def literal(self, in_head: bool = False, bare_ok: bool = False) -> Literal:
        negated = False
        if self.tok.kind == "punct" and self.tok.text in _NEG_SIGNS:
            self.advance()
            negated = True
        tok = self.tok
        if tok.kind != "ident":
            self.fail("expected a predicate name")
        if tok.text == "not":
            self.fail("'not' is reserved" + (" and cannot appear in a rule head" if in_head else ""))
        self.advance()
        args: tuple = ()
        if self.is_punct("("):
            args = self.arguments()
        elif not bare_ok and (tok.text[0].isupper() or tok.text[0] == "_"):
            self.fail(
                f"{tok.text} reads as a variable, not a literal; predicate names without "
                "arguments start with a lowercase letter",
                tok,
            )
        return Literal(tok.text, args, negated)

    def arguments(self) -> tuple:
        self.enter()
        self.advance()
        args = [self.term()]
        while self.is_punct(","):
            self.advance()
            args.append(self.term())
        self.expect(")", "')' closing the argument list")
        self.depth -= 1
        return tuple(args)

    def term(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return int(tok.text)
        if tok.kind == "ident":
            if tok.text == "not":
                self.fail("'not' is reserved")
            self.advance()
            if tok.text[0].isupper() or tok.text[0] == "_":
                if self.is_punct("("):
                    self.fail("variables cannot take arguments")
                return Var(tok.text)
            if self.is_punct("("):
                return Fn(tok.text, self.arguments())
            return tok.text
        self.fail("expected a term")

    # -- static checks -------------------------------------------------------
    def _check_safety(self, stmt, tok: Token) -> None:
        bad = unsafe_variables(stmt)
        if bad:
            var = sorted(bad)[0]
            raise _error(
                self.name,
                tok.line,
                tok.col,
                f"unsafe variable {var}: it must occur in a positive body literal or a comparison",
            )


def unsafe_variables(stmt) -> set[str]:
    """Variables not bound by a positive body literal or a comparison.

    Variables that only occur in comparisons range over the integer domain
    ``0..maxint`` during grounding, so they count as safe.
    """
    bound: set[str] = set()
    for b in stmt.body:
        if isinstance(b, (Literal, Comparison)):
            bound |= b.vars()
    return stmt.vars() - bound


def parse(source: SourceProgram | str, name: str = "<string>") -> Program:
    """Parse program text; raises :class:`AspSyntaxError` on the first error."""
    if isinstance(source, SourceProgram):
        text, name = source.text, source.name
    else:
        text = source
    if not isinstance(text, str):
        raise TypeError("program text must be str")
    return _Parser(_tokenize(text, name), name).program()


def parse_file(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse(SourceProgram(fh.read(), str(path)))


def parse_literal(text: str) -> Literal:
    """Parse a single (possibly strongly negated) ground or non-ground literal."""
    p = _Parser(_tokenize(text, "<literal>"), "<literal>")
    lit = p.literal()
    if p.tok.kind != "eof":
        p.fail("trailing input after literal")
    return lit


def parse_body(text: str) -> tuple:
    """Parse a comma-separated body, e.g. ``"Happens(merge), not theft"``."""
    p = _Parser(_tokenize(text, "<body>"), "<body>")
    body = p.body()
    if p.tok.kind != "eof":
        p.fail("trailing input after body")
    return tuple(body)


def print_program(program: Program) -> str:
    lines = []
    if program.maxint is not None:
        lines.append(f"#maxint={program.maxint}.")
    lines.extend(str(r) for r in program.rules)
    lines.extend(str(w) for w in program.weak)
    return "".join(line + "\n" for line in lines)
