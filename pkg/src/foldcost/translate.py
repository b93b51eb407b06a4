"""Translation of target programs into complexity-language recurrences.

Every target expression of type τ becomes a complexity expression of type
‖τ‖ = N x ⟨τ⟩, where ⟨int⟩ = ⟨bool⟩ = ⟨int*⟩ = N (ints and booleans have
potential 1, a list's potential bounds its length) and
⟨σ -> τ⟩ = ⟨σ⟩ -> ‖τ‖.  The cost component bounds the evaluation cost of the
expression; the potential component bounds the size of its value.

The translation is compositional and syntax-directed.  Conditionals and list
matches cannot know which branch will run, so both are translated and joined
with max; `fold` becomes `pfold`, primitive recursion on the scrutinee's
potential, which dominates the actual recursion on the list because the
potential bounds the length.  Extra cost charged onto a pair (for the rule
instances the original program will execute) is written by adding to the
cost component; the helper below shares the wrapped pair between both
projections rather than copying it.

Substitution here (`csubst`) replaces the head/tail variables of a branch
with pairs built from the fresh potential variables the pcase/pfold binds;
it is capture-avoiding in general.
"""

from __future__ import annotations

from typing import Mapping

from . import syntax
from .complexity import (
    NAT,
    ArrowPotTy,
    CLam,
    CMax,
    CNum,
    CPair,
    CPlus,
    CplxExpr,
    CostOf,
    CTy,
    CVar,
    PCase,
    PFold,
    PotOf,
    ProdTy,
    StarApp,
    cplx_free_vars,
)
from .syntax import (
    App,
    Arith,
    ArrowTy,
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
    fresh_name,
)


# ---------------------------------------------------------------- types

def pot_ty(ty: Ty) -> CTy:
    """The potential type of a target type."""
    if isinstance(ty, ArrowTy):
        return ArrowPotTy(pot_ty(ty.dom), translate_ty(ty.cod))
    return NAT


def translate_ty(ty: Ty) -> ProdTy:
    """The full cost/potential type of a target type."""
    return ProdTy(pot_ty(ty))


def translate_ctx(ctx: Mapping[str, Ty]) -> dict[str, CTy]:
    return {name: translate_ty(ty) for name, ty in ctx.items()}


# ---------------------------------------------------------------- substitution

def csubst(e: CplxExpr, bindings: Mapping[str, CplxExpr]) -> CplxExpr:
    """Simultaneous capture-avoiding substitution of bindings into e.

    Shared subterms stay shared: a node reached twice (the cost-charging
    wrapper below references its pair from both projections) is rewritten
    once and reused, so substitution does not blow up the term DAG and
    downstream evaluation can keep deduplicating.
    """
    if not bindings:
        return e
    return _csubst(e, bindings, {})


def _csubst(e: CplxExpr, bindings: Mapping[str, CplxExpr], seen: dict) -> CplxExpr:
    cached = seen.get(id(e))
    if cached is not None:
        return cached[1]

    danger = frozenset().union(*(cplx_free_vars(v) for v in bindings.values()))

    def go(sub: CplxExpr) -> CplxExpr:
        return _csubst(sub, bindings, seen)

    def go_under(binders: list[str], body: CplxExpr) -> tuple[list[str], CplxExpr]:
        inner = {k: v for k, v in bindings.items() if k not in binders}
        taken = set(danger) | set(cplx_free_vars(body)) | set(binders)
        out: list[str] = []
        renaming: dict[str, CplxExpr] = {}
        for b in binders:
            if b in danger:
                nb = fresh_name(b, taken)
                taken.add(nb)
                renaming[b] = CVar(nb)
                out.append(nb)
            else:
                out.append(b)
        if renaming:
            body = csubst(body, renaming)
        return out, csubst(body, inner) if inner else body

    match e:
        case CVar(name):
            result = bindings.get(name, e)
        case CNum():
            result = e
        case CPlus(lhs, rhs):
            result = CPlus(go(lhs), go(rhs))
        case CMax(lhs, rhs):
            result = CMax(go(lhs), go(rhs))
        case CPair(cost, pot):
            result = CPair(go(cost), go(pot))
        case CostOf(pair):
            result = CostOf(go(pair))
        case PotOf(pair):
            result = PotOf(go(pair))
        case CLam(param, param_ty, body):
            (new_param,), new_body = go_under([param], body)
            result = CLam(new_param, param_ty, new_body)
        case StarApp(fn, arg):
            result = StarApp(go(fn), go(arg))
        case PCase(scrut, zero, p, ps, succ):
            (np_, nps), nsucc = go_under([p, ps], succ)
            result = PCase(go(scrut), go(zero), np_, nps, nsucc)
        case PFold(scrut, zero, p, ps, w, succ):
            (np_, nps, nw), nsucc = go_under([p, ps, w], succ)
            result = PFold(go(scrut), go(zero), np_, nps, nw, nsucc)
        case _:
            raise TypeError(f"not a complexity expression: {e!r}")

    seen[id(e)] = (e, result)
    return result


# ---------------------------------------------------------------- translation

def charge(extra: CplxExpr, pair: CplxExpr) -> CplxExpr:
    """Add extra cost onto a pair: (extra + pair_c, pair_p).

    The pair expression is shared between the two projections, not copied,
    so downstream evaluation can reuse one result for both.
    """
    return CPair(CPlus(extra, CostOf(pair)), PotOf(pair))


def translate(e: Expr) -> CplxExpr:
    """The cost/potential recurrence of a target expression.

    Free target variables appear free in the result, at their translated
    types; a closed program translates to a closed recurrence.
    """
    match e:
        case Var(name):
            return CVar(name)
        case IntLit() | BoolLit():
            return CPair(CNum(1), CNum(1))
        case Nil():
            return CPair(CNum(1), CNum(0))
        case Cons(head, tail):
            th, tt = translate(head), translate(tail)
            return CPair(
                CPlus(CNum(1), CPlus(CostOf(th), CostOf(tt))),
                CPlus(CNum(1), PotOf(tt)),
            )
        case Rel(_, lhs, rhs) | Arith(_, lhs, rhs):
            tl, tr = translate(lhs), translate(rhs)
            return CPair(CPlus(CNum(2), CPlus(CostOf(tl), CostOf(tr))), CNum(1))
        case If(test, then, orelse):
            tt = translate(test)
            joined = CMax(translate(then), translate(orelse))
            return charge(CPlus(CNum(1), CostOf(tt)), joined)
        case Lam(param, param_ty, body):
            return CLam(param, pot_ty(param_ty), translate(body))
        case App(fn, arg):
            return StarApp(translate(fn), translate(arg))
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            ts = translate(scrutinee)
            tz = translate(nil_branch)
            tb, p, ps = _translate_branch(cons_branch, head, tail, avoid=frozenset())
            return charge(CPlus(CNum(1), CostOf(ts)), PCase(PotOf(ts), tz, p, ps, tb))
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            ts = translate(scrutinee)
            tz = translate(nil_branch)
            tb, p, ps = _translate_branch(step, head, tail, avoid=frozenset((acc,)), acc=acc)
            return charge(CPlus(CNum(1), CostOf(ts)), PFold(PotOf(ts), tz, p, ps, acc, tb))
    raise TypeError(f"not an expression: {e!r}")


def _translate_branch(
    branch: Expr, head: str, tail: str, avoid: frozenset[str], acc: str | None = None
) -> tuple[CplxExpr, str, str]:
    """Translate a cons branch, replacing head/tail with potential pairs.

    The head is a value of potential at most 1 (an int); the tail a value
    whose potential is one less than the scrutinee's.  Both are substituted
    as pairs (1, p) and (1, ps) over fresh variables that the surrounding
    pcase/pfold then binds.
    """
    taken = (syntax.free_vars(branch) - {head, tail}) | avoid | {head, tail}
    p = fresh_name("p", taken)
    ps = fresh_name("ps", taken | {p})
    tb = translate(branch)
    bindings: dict[str, CplxExpr] = {}
    # Respect target scoping: later binders shadow earlier ones, and a fold's
    # accumulator shadows both.
    bindings[head] = CPair(CNum(1), CVar(p))
    bindings[tail] = CPair(CNum(1), CVar(ps))
    if acc is not None:
        bindings.pop(acc, None)
    return csubst(tb, bindings), p, ps
