"""Typechecker for the target language.

Typing is syntax-directed: lambda parameters carry annotations, so no
inference is needed and every well-formed expression has at most one type.
`typecheck` raises TypeCheckError with the offending subexpression rendered
back to source.
"""

from __future__ import annotations

from typing import Mapping

from .syntax import (
    ARITH_OPS,
    BOOL,
    INT,
    INT_LIST,
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
    to_source,
)


class TypeCheckError(Exception):
    pass


def _mismatch(e: Expr, expected: str, actual: Ty) -> TypeCheckError:
    return TypeCheckError(f"expected {expected}, got {actual} in: {to_source(e)}")


def check(ctx: Mapping[str, Ty], e: Expr, expected: Ty, where: Expr) -> None:
    actual = typecheck(ctx, e)
    if actual != expected:
        raise _mismatch(where, str(expected), actual)


def typecheck(ctx: Mapping[str, Ty], e: Expr) -> Ty:
    """Return the type of e under ctx, or raise TypeCheckError."""
    match e:
        # ---------------------------------------------------------
        #  x : τ ∈ Γ
        # -----------
        #  Γ ⊢ x : τ
        case Var(name):
            ty = ctx.get(name)
            if ty is None:
                raise TypeCheckError(f"unbound variable: {name}")
            return ty

        # Γ ⊢ n : int        Γ ⊢ true/false : bool        Γ ⊢ nil : int*
        case IntLit():
            return INT
        case BoolLit():
            return BOOL
        case Nil():
            return INT_LIST

        #  Γ ⊢ r : int   Γ ⊢ s : int*
        # ----------------------------
        #  Γ ⊢ r :: s : int*
        case Cons(head, tail):
            check(ctx, head, INT, e)
            check(ctx, tail, INT_LIST, e)
            return INT_LIST

        #  Γ ⊢ r : int   Γ ⊢ s : int
        # ---------------------------       R ∈ {<, <=, =}
        #  Γ ⊢ r R s : bool
        case Rel(_, lhs, rhs):
            check(ctx, lhs, INT, e)
            check(ctx, rhs, INT, e)
            return BOOL

        #  Γ ⊢ r : int   Γ ⊢ s : int
        # ---------------------------       op ∈ {+, -, *}
        #  Γ ⊢ r op s : int
        case Arith(op, lhs, rhs):
            if op not in ARITH_OPS:
                raise TypeCheckError(f"unknown operator: {op}")
            check(ctx, lhs, INT, e)
            check(ctx, rhs, INT, e)
            return INT

        #  Γ ⊢ r : bool   Γ ⊢ s : τ   Γ ⊢ t : τ
        # --------------------------------------
        #  Γ ⊢ if r then s else t : τ
        case If(test, then, orelse):
            check(ctx, test, BOOL, e)
            then_ty = typecheck(ctx, then)
            check(ctx, orelse, then_ty, e)
            return then_ty

        #  Γ, x : σ ⊢ r : τ
        # --------------------------
        #  Γ ⊢ \x:σ. r : σ -> τ
        case Lam(param, param_ty, body):
            return ArrowTy(param_ty, typecheck({**ctx, param: param_ty}, body))

        #  Γ ⊢ r : σ -> τ   Γ ⊢ s : σ
        # ----------------------------
        #  Γ ⊢ r s : τ
        case App(fn, arg):
            fn_ty = typecheck(ctx, fn)
            if not isinstance(fn_ty, ArrowTy):
                raise _mismatch(e, "a function", fn_ty)
            check(ctx, arg, fn_ty.dom, e)
            return fn_ty.cod

        #  Γ ⊢ r : int*   Γ ⊢ s : τ   Γ, x : int, xs : int* ⊢ t : τ
        # ----------------------------------------------------------
        #  Γ ⊢ case r of (s, [x, xs] t) : τ
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            check(ctx, scrutinee, INT_LIST, e)
            nil_ty = typecheck(ctx, nil_branch)
            branch_ctx = {**ctx, head: INT, tail: INT_LIST}
            check(branch_ctx, cons_branch, nil_ty, e)
            return nil_ty

        #  Γ ⊢ r : int*   Γ ⊢ s : τ   Γ, x : int, xs : int*, w : τ ⊢ t : τ
        # -----------------------------------------------------------------
        #  Γ ⊢ fold r of (s, [x, xs, w] t) : τ
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            check(ctx, scrutinee, INT_LIST, e)
            nil_ty = typecheck(ctx, nil_branch)
            step_ctx = {**ctx, head: INT, tail: INT_LIST, acc: nil_ty}
            check(step_ctx, step, nil_ty, e)
            return nil_ty

    raise TypeCheckError(f"not an expression: {e!r}")
