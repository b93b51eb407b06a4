"""Abstract syntax for the target language.

The target language is a simply typed call-by-value language with integers,
booleans, integer lists, and functions.  Lists are consumed by `case` (one
step of pattern matching) and `fold` (structural recursion); there is no
general recursion, so every well-typed program terminates.

Invariants:
  - Expression and type nodes are immutable; sharing is safe.
  - `subst` is capture-avoiding and renames binders only when necessary.
  - `to_source` prints minimal parentheses and round-trips through the parser:
    parse(to_source(e)) == e for every well-formed expression e.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Mapping

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


# ---------------------------------------------------------------- types

class Ty:
    """Base class for target-language types."""


@dataclass(frozen=True)
class IntTy(Ty):
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class BoolTy(Ty):
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class ListTy(Ty):
    """Lists of integers; the only compound data type."""

    def __str__(self) -> str:
        return "int*"


@dataclass(frozen=True)
class ArrowTy(Ty):
    dom: Ty
    cod: Ty

    def __str__(self) -> str:
        # -> is right-associative, so only the domain ever needs parentheses.
        dom = f"({self.dom})" if isinstance(self.dom, ArrowTy) else str(self.dom)
        return f"{dom} -> {self.cod}"


INT = IntTy()
BOOL = BoolTy()
INT_LIST = ListTy()


# ---------------------------------------------------------------- expressions

class Expr:
    """Base class for target-language expressions."""


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class Nil(Expr):
    pass


@dataclass(frozen=True)
class Cons(Expr):
    head: Expr
    tail: Expr


@dataclass(frozen=True)
class Rel(Expr):
    """Comparison of two integers, yielding a boolean."""

    op: str  # one of REL_OPS
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Arith(Expr):
    """Arithmetic on two integers, yielding an integer."""

    op: str  # one of ARITH_OPS
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class If(Expr):
    test: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class Lam(Expr):
    param: str
    param_ty: Ty  # annotation is mandatory; typechecking never infers it
    body: Expr


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True)
class Case(Expr):
    """One-step list match: case r of (s, [x, xs] t)."""

    scrutinee: Expr
    nil_branch: Expr
    head: str
    tail: str
    cons_branch: Expr


@dataclass(frozen=True)
class Fold(Expr):
    """Structural list recursion: fold r of (s, [x, xs, w] t).

    In the step t, x is the head, xs the tail, and w the result of folding
    the tail.  This is the only recursion construct in the language.
    """

    scrutinee: Expr
    nil_branch: Expr
    head: str
    tail: str
    acc: str
    step: Expr


REL_OPS: Mapping[str, Callable[[int, int], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
}

ARITH_OPS: Mapping[str, Callable[[int, int], int]] = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
}


# ---------------------------------------------------------------- free variables

def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case IntLit() | BoolLit() | Nil():
            return frozenset()
        case Cons(head, tail):
            return free_vars(head) | free_vars(tail)
        case Rel(_, lhs, rhs) | Arith(_, lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case If(test, then, orelse):
            return free_vars(test) | free_vars(then) | free_vars(orelse)
        case Lam(param, _, body):
            return free_vars(body) - {param}
        case App(fn, arg):
            return free_vars(fn) | free_vars(arg)
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            branch = free_vars(cons_branch) - {head, tail}
            return free_vars(scrutinee) | free_vars(nil_branch) | branch
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            branch = free_vars(step) - {head, tail, acc}
            return free_vars(scrutinee) | free_vars(nil_branch) | branch
    raise TypeError(f"not an expression: {e!r}")


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """A name not in `avoid`, derived from `base` by priming."""
    name = base
    while name in avoid:
        name += "'"
    return name


# ---------------------------------------------------------------- substitution

def subst(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    """Simultaneous capture-avoiding substitution of bindings into e."""
    if not bindings:
        return e

    # Names that must not capture anything we substitute in.
    danger = frozenset().union(*(free_vars(v) for v in bindings.values()))

    def rename(binders: list[str], body_fvs: frozenset[str]) -> tuple[list[str], dict[str, Expr]]:
        # Binders shadow left to right, later binders over earlier ones.  A
        # fresh name must also avoid sibling binders or it would re-capture.
        taken = set(danger) | set(body_fvs) | set(binders)
        out: list[str] = []
        renaming: dict[str, Expr] = {}
        for b in binders:
            if b in danger:
                nb = fresh_name(b, taken)
                taken.add(nb)
                renaming[b] = Var(nb)
                out.append(nb)
            else:
                out.append(b)
        return out, renaming

    def go_under(binders: list[str], body: Expr) -> tuple[list[str], Expr]:
        inner = {k: v for k, v in bindings.items() if k not in binders}
        new_binders, renaming = rename(binders, free_vars(body))
        if renaming:
            body = subst(body, renaming)
        return new_binders, subst(body, inner) if inner else body

    match e:
        case Var(name):
            return bindings.get(name, e)
        case IntLit() | BoolLit() | Nil():
            return e
        case Cons(head, tail):
            return Cons(subst(head, bindings), subst(tail, bindings))
        case Rel(op, lhs, rhs):
            return Rel(op, subst(lhs, bindings), subst(rhs, bindings))
        case Arith(op, lhs, rhs):
            return Arith(op, subst(lhs, bindings), subst(rhs, bindings))
        case If(test, then, orelse):
            return If(subst(test, bindings), subst(then, bindings), subst(orelse, bindings))
        case Lam(param, param_ty, body):
            (new_param,), new_body = go_under([param], body)
            return Lam(new_param, param_ty, new_body)
        case App(fn, arg):
            return App(subst(fn, bindings), subst(arg, bindings))
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            (nh, nt), nb = go_under([head, tail], cons_branch)
            return Case(subst(scrutinee, bindings), subst(nil_branch, bindings), nh, nt, nb)
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            (nh, nt, na), ns = go_under([head, tail, acc], step)
            return Fold(subst(scrutinee, bindings), subst(nil_branch, bindings), nh, nt, na, ns)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------- printing

# Precedence levels, loosest to tightest.  Binders and branching forms extend
# as far right as possible, so they only parenthesize when used as operands.
_PREC_OPEN = 0  # \ if case fold
_PREC_REL = 1
_PREC_CONS = 2
_PREC_ADD = 3
_PREC_MUL = 4
_PREC_APP = 5
_PREC_ATOM = 6

_ARITH_PREC = {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL}


def to_source(e: Expr) -> str:
    """Concrete syntax for e, with minimal parentheses."""
    return _show(e, 0)


def _show(e: Expr, ctx: int) -> str:
    match e:
        case Var(name):
            return name
        case IntLit(value):
            # Negative literals are atoms only inside parentheses.
            return str(value) if value >= 0 else _wrap(str(value), True)
        case BoolLit(value):
            return "true" if value else "false"
        case Nil():
            return "nil"
        case Cons(head, tail):
            s = f"{_show(head, _PREC_CONS + 1)} :: {_show(tail, _PREC_CONS)}"
            return _wrap(s, ctx > _PREC_CONS)
        case Rel(op, lhs, rhs):
            s = f"{_show(lhs, _PREC_REL + 1)} {op} {_show(rhs, _PREC_REL + 1)}"
            return _wrap(s, ctx > _PREC_REL)
        case Arith(op, lhs, rhs):
            prec = _ARITH_PREC[op]
            s = f"{_show(lhs, prec)} {op} {_show(rhs, prec + 1)}"
            return _wrap(s, ctx > prec)
        case If(test, then, orelse):
            s = f"if {_show(test, 0)} then {_show(then, 0)} else {_show(orelse, 0)}"
            return _wrap(s, ctx > _PREC_OPEN)
        case Lam(param, param_ty, body):
            s = f"\\{param}:{param_ty}. {_show(body, 0)}"
            return _wrap(s, ctx > _PREC_OPEN)
        case App(fn, arg):
            s = f"{_show(fn, _PREC_APP)} {_show(arg, _PREC_APP + 1)}"
            return _wrap(s, ctx > _PREC_APP)
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            s = (f"case {_show(scrutinee, 0)} of ({_show(nil_branch, 0)}, "
                 f"[{head}, {tail}] {_show(cons_branch, 0)})")
            return _wrap(s, ctx > _PREC_OPEN)
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            s = (f"fold {_show(scrutinee, 0)} of ({_show(nil_branch, 0)}, "
                 f"[{head}, {tail}, {acc}] {_show(step, 0)})")
            return _wrap(s, ctx > _PREC_OPEN)
    raise TypeError(f"not an expression: {e!r}")


def _wrap(s: str, needed: bool) -> str:
    return f"({s})" if needed else s
