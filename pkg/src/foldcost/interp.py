"""Big-step evaluator with evaluation-cost instrumentation.

The cost of running a program is the size of its big-step derivation: every
rule instance contributes 1, and comparison/arithmetic rules contribute one
extra unit for their operator side condition.  So literals, variables, and
lambdas cost 1; `r R s` and `r op s` cost 2 plus their operands; `if` pays
for the test and the taken branch only; application pays for function,
argument, and body; `fold` over a k-element list unrolls into k+1 rule
instances, with each unrolling after the first reading the remaining tail
from a fresh variable (one unit per lookup).

Evaluation is total on well-typed terms except for two checked limits, both
reported as distinct errors: 64-bit integer overflow and the cost budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .syntax import (
    ARITH_OPS,
    INT_MAX,
    INT_MIN,
    REL_OPS,
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
    ArrowTy,
    Var,
)

DEFAULT_BUDGET = 10_000_000


class EvalError(Exception):
    pass


class BudgetExceededError(EvalError):
    def __init__(self, budget: int):
        super().__init__(f"evaluation exceeded the cost budget of {budget}")
        self.budget = budget


class ArithOverflowError(EvalError):
    pass


# ---------------------------------------------------------------- values

class Value:
    pass


@dataclass(frozen=True)
class VInt(Value):
    value: int


@dataclass(frozen=True)
class VBool(Value):
    value: bool


@dataclass(frozen=True)
class VList(Value):
    items: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class VClosure(Value):
    param: str
    body: Expr
    env: Mapping[str, Value]


ValueEnv = Mapping[str, Value]


def render_value(v: Value) -> str:
    match v:
        case VInt(n):
            return str(n)
        case VBool(b):
            return "true" if b else "false"
        case VList(items):
            return "[" + ",".join(str(n) for n in items) + "]"
        case VClosure():
            return "<fun>"
    raise TypeError(f"not a value: {v!r}")


def value_size(v: Value, ty: Ty | None = None) -> int:
    """Size of a first-order value: 1 for ints and booleans, length for lists.

    Function values have no size measure; bounding them is the harness's job
    (it probes them pointwise).
    """
    match v:
        case VInt() | VBool():
            return 1
        case VList(items):
            return len(items)
    if isinstance(v, VClosure) or isinstance(ty, ArrowTy):
        raise ValueError("function values have no size measure")
    raise TypeError(f"not a value: {v!r}")


# ---------------------------------------------------------------- evaluator

@dataclass(frozen=True)
class EvalResult:
    value: Value
    cost: int


class _Counter:
    __slots__ = ("cost", "budget")

    def __init__(self, budget: int):
        self.cost = 0
        self.budget = budget

    def tick(self, n: int = 1) -> None:
        self.cost += n
        if self.cost > self.budget:
            raise BudgetExceededError(self.budget)


def _checked(op: str, a: int, b: int) -> int:
    n = ARITH_OPS[op](a, b)
    if not INT_MIN <= n <= INT_MAX:
        raise ArithOverflowError(f"64-bit overflow: {a} {op} {b}")
    return n


def eval_expr(e: Expr, env: ValueEnv | None = None, budget: int = DEFAULT_BUDGET) -> EvalResult:
    """Evaluate e under env, returning its value and evaluation cost."""
    counter = _Counter(budget)
    value = _eval(e, dict(env or {}), counter)
    return EvalResult(value, counter.cost)


def _eval(e: Expr, env: ValueEnv, counter: _Counter) -> Value:
    counter.tick()  # this rule instance
    match e:
        case Var(name):
            v = env.get(name)
            if v is None:
                raise EvalError(f"unbound variable at runtime: {name}")
            return v
        case IntLit(n):
            return VInt(n)
        case BoolLit(b):
            return VBool(b)
        case Nil():
            return VList(())
        case Lam(param, _, body):
            return VClosure(param, body, env)
        case Cons(head, tail):
            h = _as_int(_eval(head, env, counter))
            t = _as_list(_eval(tail, env, counter))
            return VList((h, *t))
        case Rel(op, lhs, rhs):
            a = _as_int(_eval(lhs, env, counter))
            b = _as_int(_eval(rhs, env, counter))
            counter.tick()  # operator side condition
            return VBool(REL_OPS[op](a, b))
        case Arith(op, lhs, rhs):
            a = _as_int(_eval(lhs, env, counter))
            b = _as_int(_eval(rhs, env, counter))
            counter.tick()  # operator side condition
            return VInt(_checked(op, a, b))
        case If(test, then, orelse):
            t = _eval(test, env, counter)
            taken = then if _as_bool(t) else orelse
            return _eval(taken, env, counter)
        case App(fn, arg):
            f = _eval(fn, env, counter)
            a = _eval(arg, env, counter)
            if not isinstance(f, VClosure):
                raise EvalError(f"applied a non-function: {render_value(f)}")
            return _eval(f.body, {**f.env, f.param: a}, counter)
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            items = _as_list(_eval(scrutinee, env, counter))
            if not items:
                return _eval(nil_branch, env, counter)
            env1 = {**env, head: VInt(items[0]), tail: VList(items[1:])}
            return _eval(cons_branch, env1, counter)
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            items = _as_list(_eval(scrutinee, env, counter))
            # Unrolling the recursion: each level below the first re-reads the
            # remaining tail through a fresh variable, so it costs one rule
            # instance plus one lookup.  Iterating (rather than recursing via
            # that fresh variable, as the derivation oracle does) keeps long
            # lists off the Python stack; the cost and the evaluation order
            # (k unrolling instances, then the nil branch, then the steps from
            # the last element back to the first) are identical.
            counter.tick(2 * len(items))
            v = _eval(nil_branch, env, counter)
            for j in reversed(range(len(items))):
                env1 = {**env, head: VInt(items[j]), tail: VList(items[j + 1:]), acc: v}
                v = _eval(step, env1, counter)
            return v
    raise EvalError(f"not an expression: {e!r}")


def _as_int(v: Value) -> int:
    if not isinstance(v, VInt):
        raise EvalError(f"expected an integer, got: {render_value(v)}")
    return v.value


def _as_bool(v: Value) -> bool:
    if not isinstance(v, VBool):
        raise EvalError(f"expected a boolean, got: {render_value(v)}")
    return v.value


def _as_list(v: Value) -> tuple[int, ...]:
    if not isinstance(v, VList):
        raise EvalError(f"expected a list, got: {render_value(v)}")
    return v.items


# ---------------------------------------------------------------- derivation oracle

@dataclass(frozen=True, eq=False)
class Derivation:
    """A materialized big-step derivation, for cross-checking the counter.

    `side_conditions` is 1 on comparison/arithmetic nodes (the operator
    hypothesis) and 0 elsewhere.  The derivation size is the node count plus
    the side conditions, which must equal the evaluator's cost exactly.
    """

    rule: str
    value: Value
    children: tuple["Derivation", ...]
    side_conditions: int = 0

    def size(self) -> int:
        return 1 + self.side_conditions + sum(c.size() for c in self.children)


def derive(e: Expr, env: ValueEnv | None = None) -> Derivation:
    """Build the full evaluation derivation of e.

    Independent of eval_expr by construction: this follows the rules
    literally, including recursion through a fresh `$fold<n>` variable bound
    to the remaining tail at each fold unrolling.  Intended for
    cross-validation at test scale, not for production evaluation.
    """
    return _derive(e, dict(env or {}))


def _fresh_fold_var(env: ValueEnv) -> str:
    n = 0
    while f"$fold{n}" in env:
        n += 1
    return f"$fold{n}"


def _derive(e: Expr, env: ValueEnv) -> Derivation:
    match e:
        case Var(name):
            return Derivation("var", env[name], ())
        case IntLit(n):
            return Derivation("int", VInt(n), ())
        case BoolLit(b):
            return Derivation("bool", VBool(b), ())
        case Nil():
            return Derivation("nil", VList(()), ())
        case Lam(param, _, body):
            return Derivation("lam", VClosure(param, body, env), ())
        case Cons(head, tail):
            dh, dt = _derive(head, env), _derive(tail, env)
            items = (_as_int(dh.value), *_as_list(dt.value))
            return Derivation("cons", VList(items), (dh, dt))
        case Rel(op, lhs, rhs):
            dl, dr = _derive(lhs, env), _derive(rhs, env)
            out = VBool(REL_OPS[op](_as_int(dl.value), _as_int(dr.value)))
            return Derivation("rel", out, (dl, dr), side_conditions=1)
        case Arith(op, lhs, rhs):
            dl, dr = _derive(lhs, env), _derive(rhs, env)
            out = VInt(_checked(op, _as_int(dl.value), _as_int(dr.value)))
            return Derivation("arith", out, (dl, dr), side_conditions=1)
        case If(test, then, orelse):
            dt = _derive(test, env)
            db = _derive(then if _as_bool(dt.value) else orelse, env)
            return Derivation("if", db.value, (dt, db))
        case App(fn, arg):
            df, da = _derive(fn, env), _derive(arg, env)
            clo = df.value
            if not isinstance(clo, VClosure):
                raise EvalError(f"applied a non-function: {render_value(clo)}")
            db = _derive(clo.body, {**clo.env, clo.param: da.value})
            return Derivation("app", db.value, (df, da, db))
        case Case(scrutinee, nil_branch, head, tail, cons_branch):
            ds = _derive(scrutinee, env)
            items = _as_list(ds.value)
            if not items:
                db = _derive(nil_branch, env)
                return Derivation("case-nil", db.value, (ds, db))
            env1 = {**env, head: VInt(items[0]), tail: VList(items[1:])}
            db = _derive(cons_branch, env1)
            return Derivation("case-cons", db.value, (ds, db))
        case Fold(scrutinee, nil_branch, head, tail, acc, step):
            ds = _derive(scrutinee, env)
            items = _as_list(ds.value)
            if not items:
                db = _derive(nil_branch, env)
                return Derivation("fold-nil", db.value, (ds, db))
            fresh = _fresh_fold_var(env)
            env_rec = {**env, fresh: VList(items[1:])}
            rec = Fold(Var(fresh), nil_branch, head, tail, acc, step)
            dr = _derive(rec, env_rec)
            env1 = {**env, head: VInt(items[0]), tail: VList(items[1:]), acc: dr.value}
            db = _derive(step, env1)
            return Derivation("fold-cons", db.value, (ds, dr, db))
    raise EvalError(f"not an expression: {e!r}")


def derivation_nodes(d: Derivation) -> Iterator[Derivation]:
    stack = [d]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)
