"""Lexer and parser for the target language's concrete syntax.

Grammar, loosest binding first:

    program  := def* expr
    def      := "def" IDENT "=" expr
    expr     := "\\" IDENT ":" type "." expr
              | "if" expr "then" expr "else" expr
              | "case" expr "of" "(" expr "," "[" IDENT "," IDENT "]" expr ")"
              | "fold" expr "of" "(" expr "," "[" IDENT "," IDENT "," IDENT "]" expr ")"
              | rel
    rel      := cons (("<" | "<=" | "=") cons)?      -- non-associative
    cons     := add ("::" cons)?                     -- right-associative
    add      := mul (("+" | "-") mul)*               -- left-associative
    mul      := app ("*" app)*                       -- left-associative
    app      := atom atom*                           -- juxtaposition
    atom     := INT | "-" INT | IDENT | "true" | "false" | "nil"
              | "[" (expr ("," expr)*)? "]"          -- sugar for cons chains
              | "(" expr ")"
    type     := btype ("->" type)?                   -- right-associative
    btype    := "int" "*"? | "bool" | "(" type ")"

"--" starts a comment that runs to end of line (even with no space before it,
so write "x - -3" rather than "x--3").  A leading "-" is part of a literal
only in atom position; in particular "f -3" is the subtraction f - 3, not an
application.  Outside parentheses and brackets,
an application argument must start on the same line as the function
(parenthesize to split across lines); without this, a `def` body would
swallow a following expression that starts with an atom.  `def` bodies
are expanded by substitution, in order, so a definition may use earlier
definitions but not itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    BOOL,
    INT,
    INT_LIST,
    INT_MAX,
    ArrowTy,
    App,
    Arith,
    BoolLit,
    Case,
    Cons,
    Expr,
    Fold,
    If,
    IntLit,
    Lam,
    Nil,
    Rel,
    Ty,
    Var,
    subst,
)

KEYWORDS = frozenset(
    ["if", "then", "else", "case", "fold", "of", "nil", "true", "false", "def", "int", "bool"]
)

_SYMBOLS = ["->", "::", "<=", "<", "=", "+", "-", "*", "(", ")", "[", "]", ",", ".", ":", "\\"]


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        # line 0 marks errors with no source position, like unreadable files
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "kw", or the symbol itself
    text: str
    line: int
    col: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_'"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            tokens.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.group = 0  # parenthesis/bracket nesting; relaxes the app line rule

    # ------------------------------------------------------------- plumbing

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            wanted = what or f"'{kind}'"
            raise ParseError(f"expected {wanted}, found {self._describe(tok)}", tok.line, tok.col)
        return self.next()

    def expect_kw(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "kw" or tok.text != word:
            raise ParseError(f"expected '{word}', found {self._describe(tok)}", tok.line, tok.col)
        return self.next()

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "kw" and tok.text == word

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else f"'{tok.text}'"

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind == "kw":
            raise ParseError(f"'{tok.text}' is a reserved word", tok.line, tok.col)
        return self.expect("ident", "an identifier").text

    # ------------------------------------------------------------- types

    def type_(self) -> Ty:
        dom = self.btype()
        if self.peek().kind == "->":
            self.next()
            return ArrowTy(dom, self.type_())
        return dom

    def btype(self) -> Ty:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "int":
            self.next()
            if self.peek().kind == "*":
                self.next()
                return INT_LIST
            return INT
        if tok.kind == "kw" and tok.text == "bool":
            self.next()
            return BOOL
        if tok.kind == "(":
            self.next()
            ty = self.type_()
            self.expect(")")
            return ty
        raise ParseError(f"expected a type, found {self._describe(tok)}", tok.line, tok.col)

    # ------------------------------------------------------------- expressions

    def expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "\\":
            self.next()
            param = self.ident()
            self.expect(":")
            param_ty = self.type_()
            self.expect(".")
            return Lam(param, param_ty, self.expr())
        if self.at_kw("if"):
            self.next()
            test = self.expr()
            self.expect_kw("then")
            then = self.expr()
            self.expect_kw("else")
            return If(test, then, self.expr())
        if self.at_kw("case"):
            self.next()
            scrutinee = self.expr()
            self.expect_kw("of")
            self.expect("(")
            self.group += 1
            nil_branch = self.expr()
            self.expect(",")
            self.expect("[")
            head = self.ident()
            self.expect(",")
            tail = self.ident()
            self.expect("]")
            cons_branch = self.expr()
            self.expect(")")
            self.group -= 1
            return Case(scrutinee, nil_branch, head, tail, cons_branch)
        if self.at_kw("fold"):
            self.next()
            scrutinee = self.expr()
            self.expect_kw("of")
            self.expect("(")
            self.group += 1
            nil_branch = self.expr()
            self.expect(",")
            self.expect("[")
            head = self.ident()
            self.expect(",")
            tail = self.ident()
            self.expect(",")
            acc = self.ident()
            self.expect("]")
            step = self.expr()
            self.expect(")")
            self.group -= 1
            return Fold(scrutinee, nil_branch, head, tail, acc, step)
        return self.rel()

    def rel(self) -> Expr:
        lhs = self.cons()
        tok = self.peek()
        if tok.kind in ("<", "<=", "="):
            self.next()
            return Rel(tok.kind, lhs, self.cons())
        return lhs

    def cons(self) -> Expr:
        head = self.add()
        if self.peek().kind == "::":
            self.next()
            return Cons(head, self.cons())
        return head

    def add(self) -> Expr:
        e = self.mul()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            e = Arith(op, e, self.mul())
        return e

    def mul(self) -> Expr:
        e = self.app()
        while self.peek().kind == "*":
            self.next()
            e = Arith("*", e, self.app())
        return e

    _ATOM_START = frozenset(["int", "ident", "[", "("])
    _ATOM_KWS = frozenset(["true", "false", "nil"])

    def _at_atom(self) -> bool:
        tok = self.peek()
        return tok.kind in self._ATOM_START or (tok.kind == "kw" and tok.text in self._ATOM_KWS)

    def app(self) -> Expr:
        # Outside parentheses, juxtaposition does not cross line breaks;
        # otherwise a `def` body would swallow a following expression that
        # starts with an atom.  Inside a group the next `,` or closer
        # delimits, so line breaks are free.
        e = self.atom()
        while self._at_atom() and (
                self.group > 0 or self.peek().line == self.tokens[self.pos - 1].line):
            e = App(e, self.atom())
        return e

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return self._int_lit(tok, int(tok.text))
        if tok.kind == "-" and self.peek(1).kind == "int":
            self.next()
            lit = self.next()
            return self._int_lit(tok, -int(lit.text))
        if tok.kind == "ident":
            self.next()
            return Var(tok.text)
        if tok.kind == "kw" and tok.text in self._ATOM_KWS:
            self.next()
            return {"true": BoolLit(True), "false": BoolLit(False), "nil": Nil()}[tok.text]
        if tok.kind == "[":
            self.next()
            self.group += 1
            items: list[Expr] = []
            if self.peek().kind != "]":
                items.append(self.expr())
                while self.peek().kind == ",":
                    self.next()
                    items.append(self.expr())
            self.expect("]")
            self.group -= 1
            out: Expr = Nil()
            for item in reversed(items):
                out = Cons(item, out)
            return out
        if tok.kind == "(":
            self.next()
            self.group += 1
            e = self.expr()
            self.expect(")")
            self.group -= 1
            return e
        raise ParseError(f"expected an expression, found {self._describe(tok)}", tok.line, tok.col)

    @staticmethod
    def _int_lit(tok: Token, value: int) -> IntLit:
        if not -(2**63) <= value <= INT_MAX:
            raise ParseError("integer literal out of 64-bit range", tok.line, tok.col)
        return IntLit(value)

    # ------------------------------------------------------------- programs

    def program(self) -> Expr:
        defs: dict[str, Expr] = {}
        while self.at_kw("def"):
            self.next()
            name = self.ident()
            self.expect("=")
            # Expand eagerly: a definition may use earlier names, not itself.
            body = subst(self.expr(), defs)
            defs[name] = body
        e = subst(self.expr(), defs)
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {self._describe(tok)} after expression", tok.line, tok.col)
        return e


def parse(text: str) -> Expr:
    """Parse a program (optional `def`s, then one expression) to an expression.

    Definitions are expanded by capture-avoiding substitution, so the result
    is a plain expression with no definition nodes.
    """
    return _Parser(tokenize(text)).program()
