"""Differential checking of measured costs against translated bounds.

The soundness claim under test: for a closed well-typed program, the
translated recurrence denotes a pair (c, p) with the actual evaluation cost
at most c and the size of the resulting value at most p (length for lists, 1
for ints and booleans).  For function results there is no finite size;
instead the potential is a function, and a closure is bounded by it when, for
every bounded argument, running the body costs no more than the potential
says and the result is recursively bounded.  That quantifier is approximated
here by probing: finitely many sampled arguments, each paired with a
potential that bounds it by construction.  A probe failure is a real
counterexample; probe success is evidence, not proof.

Everything is deterministic given the config seed.  Trials that hit the cost
budget or 64-bit overflow prove nothing either way and are reported as
inconclusive rather than as verdicts.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence, Union

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
    NatOverflowError,
    NatTy,
    PCase,
    PFold,
    PotOf,
    ProdTy,
    SFun,
    SPair,
    SemVal,
    StarApp,
    ctypecheck,
    denote,
    nat_add,
)
from .interp import (
    ArithOverflowError,
    BudgetExceededError,
    DEFAULT_BUDGET,
    EvalResult,
    VBool,
    VClosure,
    VInt,
    VList,
    Value,
    eval_expr,
    value_size,
)
from .syntax import (
    BOOL,
    INT,
    INT_LIST,
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
    to_source,
)
from .translate import translate, translate_ty
from .typecheck import typecheck


@dataclass(frozen=True)
class ProbeConfig:
    """Knobs for generation, probing, and campaign size."""

    trials: int = 100
    depth: int = 4
    max_list: int = 8
    int_lo: int = -9
    int_hi: int = 9
    seed: int = 0
    budget: int = DEFAULT_BUDGET


DEFAULT_CONFIG = ProbeConfig()


class _Violation(Exception):
    """A measured run exceeded its bound; carries the counterexample."""


class _Inconclusive(Exception):
    """The run hit a checked limit, so no verdict is possible."""


# ---------------------------------------------------------------- term generation

_BASE_TYPES: tuple[Ty, ...] = (INT, BOOL, INT_LIST)


def gen_typed_term(seed: int, depth: int, ty: Ty, ctx: Mapping[str, Ty] | None = None) -> Expr:
    """Generate a well-typed term of the given type, deterministically.

    Biased toward case/fold/application nodes so generated programs exercise
    the interesting cost rules; falls back to canonical leaves at depth 0.
    """
    rng = random.Random(seed)
    return _gen(rng, depth, ty, dict(ctx or {}), ProbeConfig())


def _gen(rng: random.Random, depth: int, ty: Ty, ctx: dict[str, Ty], cfg: ProbeConfig) -> Expr:
    if depth <= 0:
        return _gen_leaf(rng, ty, ctx, cfg)

    # Bias toward the constructs whose cost rules matter most.
    if rng.random() < 0.30:
        pick = rng.choice(("case", "fold", "app"))
        if pick == "app":
            arg_ty = _gen_arg_ty(rng, depth)
            fn = _gen(rng, depth - 1, ArrowTy(arg_ty, ty), ctx, cfg)
            arg = _gen(rng, depth - 1, arg_ty, ctx, cfg)
            return App(fn, arg)
        scrut = _gen(rng, depth - 1, INT_LIST, ctx, cfg)
        nil_branch = _gen(rng, depth - 1, ty, ctx, cfg)
        ctx1 = dict(ctx)
        head = _fresh_var(ctx1)
        ctx1[head] = INT
        tail = _fresh_var(ctx1)
        ctx1[tail] = INT_LIST
        if pick == "case":
            branch = _gen(rng, depth - 1, ty, ctx1, cfg)
            return Case(scrut, nil_branch, head, tail, branch)
        acc = _fresh_var(ctx1)
        ctx1[acc] = ty
        step = _gen(rng, depth - 1, ty, ctx1, cfg)
        return Fold(scrut, nil_branch, head, tail, acc, step)

    if isinstance(ty, ArrowTy):
        if rng.random() < 0.15:
            test = _gen(rng, depth - 1, BOOL, ctx, cfg)
            return If(test, _gen(rng, depth - 1, ty, ctx, cfg), _gen(rng, depth - 1, ty, ctx, cfg))
        param = _fresh_var(ctx)
        body = _gen(rng, depth - 1, ty.cod, {**ctx, param: ty.dom}, cfg)
        return Lam(param, ty.dom, body)

    roll = rng.random()
    if roll < 0.15:
        test = _gen(rng, depth - 1, BOOL, ctx, cfg)
        return If(test, _gen(rng, depth - 1, ty, ctx, cfg), _gen(rng, depth - 1, ty, ctx, cfg))
    if ty == INT:
        if roll < 0.70:
            op = rng.choice(("+", "-", "*"))
            return Arith(op, _gen(rng, depth - 1, INT, ctx, cfg), _gen(rng, depth - 1, INT, ctx, cfg))
        return _gen_leaf(rng, ty, ctx, cfg)
    if ty == BOOL:
        if roll < 0.70:
            op = rng.choice(("<", "<=", "="))
            return Rel(op, _gen(rng, depth - 1, INT, ctx, cfg), _gen(rng, depth - 1, INT, ctx, cfg))
        return _gen_leaf(rng, ty, ctx, cfg)
    if ty == INT_LIST:
        if roll < 0.70:
            return Cons(_gen(rng, depth - 1, INT, ctx, cfg), _gen(rng, depth - 1, INT_LIST, ctx, cfg))
        return _gen_leaf(rng, ty, ctx, cfg)
    raise TypeError(f"not a type: {ty!r}")


def _gen_arg_ty(rng: random.Random, depth: int) -> Ty:
    if depth >= 3 and rng.random() < 0.15:
        return ArrowTy(rng.choice(_BASE_TYPES), rng.choice(_BASE_TYPES))
    return rng.choice(_BASE_TYPES)


def _gen_leaf(rng: random.Random, ty: Ty, ctx: dict[str, Ty], cfg: ProbeConfig) -> Expr:
    # Prefer a variable of the right type when one is in scope.
    candidates = sorted(name for name, t in ctx.items() if t == ty)
    if candidates and rng.random() < 0.5:
        return Var(rng.choice(candidates))
    if ty == INT:
        return IntLit(rng.randint(cfg.int_lo, cfg.int_hi))
    if ty == BOOL:
        return BoolLit(rng.random() < 0.5)
    if ty == INT_LIST:
        items = [IntLit(rng.randint(cfg.int_lo, cfg.int_hi)) for _ in range(rng.randint(0, 2))]
        out: Expr = Nil()
        for item in reversed(items):
            out = Cons(item, out)
        return out
    if isinstance(ty, ArrowTy):
        param = _fresh_var(ctx)
        return Lam(param, ty.dom, _gen_leaf(rng, ty.cod, {**ctx, param: ty.dom}, cfg))
    raise TypeError(f"not a type: {ty!r}")


def _fresh_var(ctx: Mapping[str, Ty]) -> str:
    n = len(ctx)
    while f"v{n}" in ctx:
        n += 1
    return f"v{n}"


# ---------------------------------------------------------------- bounding checks

def check_closed_base(e: Expr, cfg: ProbeConfig = DEFAULT_CONFIG) -> "Report":
    """Check a closed program of base type against its translated bound."""
    ty = typecheck({}, e)
    if isinstance(ty, ArrowTy):
        raise ValueError(f"program has function type {ty}; use check_program")
    return check_program(e, cfg)


def check_program(e: Expr, cfg: ProbeConfig = DEFAULT_CONFIG) -> "Report":
    """Check a closed program of any type against its translated bound.

    Base-typed results compare cost and size directly; function-typed
    results are probed per the bounding relation.
    """
    ty = typecheck({}, e)
    cplx = translate(e)
    cty = ctypecheck({}, cplx)
    if cty != translate_ty(ty):
        raise AssertionError(f"translation changed the type: {cty} vs {translate_ty(ty)}")

    source = to_source(e)
    try:
        chi = denote(cplx)
        result = eval_expr(e, budget=cfg.budget)
        if not isinstance(chi, SPair):
            raise AssertionError("translated program denoted a non-pair")
        if result.cost > chi.cost:
            return Report(source, "fail", result.cost, chi.cost, None, None,
                          detail=f"cost {result.cost} > bound {chi.cost}")
        if not isinstance(ty, ArrowTy):
            size = value_size(result.value)
            pot = chi.pot if isinstance(chi.pot, int) else None
            if pot is None or size > pot:
                return Report(source, "fail", result.cost, chi.cost, size, pot,
                              detail=f"size {size} > potential {pot}")
            return Report(source, "pass", result.cost, chi.cost, size, pot)
        # Function-typed program: probe the closure against its potential.
        rng = random.Random(cfg.seed)
        checked, skipped = _probe_closure(
            result.value, lambda: denote(cplx).pot, ty, cfg, rng)
        if checked == 0:
            return Report(source, "inconclusive", result.cost, chi.cost, None, None,
                          detail="all probes hit evaluation limits",
                          probes_checked=checked, probes_skipped=skipped)
        return Report(source, "pass", result.cost, chi.cost, None, None,
                      probes_checked=checked, probes_skipped=skipped)
    except _Violation as v:
        return Report(source, "fail", None, None, None, None, detail=str(v))
    except _Inconclusive as i:
        return Report(source, "inconclusive", None, None, None, None, detail=str(i))
    except BudgetExceededError:
        return Report(source, "inconclusive", None, None, None, None, detail="budget-exceeded")
    except ArithOverflowError:
        return Report(source, "inconclusive", None, None, None, None, detail="int-overflow")
    except NatOverflowError:
        return Report(source, "inconclusive", None, None, None, None, detail="nat-overflow")


@dataclass(frozen=True)
class Report:
    """Outcome of checking one program against its translated bound."""

    program: str
    status: str  # "pass" | "fail" | "inconclusive"
    cost: int | None
    bound_cost: int | None
    size: int | None
    pot: int | None
    detail: str = ""
    probes_checked: int | None = None
    probes_skipped: int | None = None


def check_value_bounded(v: Value, pot: SemVal, ty: Ty, cfg: ProbeConfig = DEFAULT_CONFIG) -> bool:
    """Does potential `pot` bound value `v` at type `ty`?

    For base types this is exact (1 for ints and booleans, length for
    lists).  For functions it probes: sampled bounded arguments, with the
    body's cost and result checked against the potential applied to the
    argument's potential.  Exact when it answers False.
    """
    try:
        _check_value(v, lambda: pot, ty, cfg, random.Random(cfg.seed))
    except _Violation:
        return False
    return True


def _check_value(
    v: Value,
    pot_maker: Callable[[], SemVal],
    ty: Ty,
    cfg: ProbeConfig,
    rng: random.Random,
) -> None:
    if not isinstance(ty, ArrowTy):
        pot = pot_maker()
        size = value_size(v)
        if not isinstance(pot, int) or size > pot:
            raise _Violation(f"size {size} > potential {pot!r}")
        return
    checked, skipped = _probe_closure(v, pot_maker, ty, cfg, rng)
    if checked == 0:
        raise _Inconclusive("all probes hit evaluation limits")


def _probe_closure(
    v: Value,
    pot_maker: Callable[[], SemVal],
    ty: ArrowTy,
    cfg: ProbeConfig,
    rng: random.Random,
    per_level: int | None = None,
) -> tuple[int, int]:
    """Probe a closure against a function potential; returns (checked, skipped).

    The potential is re-derived per probe through `pot_maker` so no
    evaluation state accumulates across probes.  Raises _Violation on the
    first counterexample.
    """
    if not isinstance(v, VClosure):
        raise _Violation(f"expected a closure at type {ty}")
    if per_level is None:
        per_level = _probes_per_level(cfg.trials, _arrow_depth(ty))
    checked = skipped = 0
    for z, q in _probe_args(ty.dom, per_level, cfg, rng):
        try:
            result = eval_expr(v.body, {**v.env, v.param: z}, budget=cfg.budget)
        except (BudgetExceededError, ArithOverflowError):
            skipped += 1
            continue
        out = _apply_pot(pot_maker, q)
        if result.cost > out.cost:
            raise _Violation(
                f"at argument {_render_arg(z)}: body cost {result.cost} > bound {out.cost}")
        if isinstance(ty.cod, ArrowTy):
            sub_checked, sub_skipped = _probe_closure(
                result.value, lambda out=out: out.pot, ty.cod, cfg, rng, per_level)
            checked += sub_checked
            skipped += sub_skipped
        else:
            size = value_size(result.value)
            pot = out.pot
            if not isinstance(pot, int) or size > pot:
                raise _Violation(
                    f"at argument {_render_arg(z)}: size {size} > potential {pot!r}")
            checked += 1
    return checked, skipped


def _apply_pot(pot_maker: Callable[[], SemVal], q: SemVal) -> SPair:
    pot = pot_maker()
    if not isinstance(pot, SFun):
        raise _Violation(f"expected a function potential, got {pot!r}")
    out = pot.fn(q)
    if not isinstance(out, SPair):
        raise _Violation(f"potential application returned a non-pair: {out!r}")
    return out


def _arrow_depth(ty: Ty) -> int:
    depth = 0
    while isinstance(ty, ArrowTy):
        depth += 1
        ty = ty.cod
    return depth


def _probes_per_level(trials: int, levels: int) -> int:
    """Spread a total probe budget across nested arrow levels.

    One level gets all of it; deeper spines get roughly the levels-th root
    each, so the total number of probe vectors stays near `trials`.
    """
    if levels <= 1:
        return max(1, trials)
    return max(2, round(trials ** (1.0 / levels)))


def _probe_args(
    dom: Ty, count: int, cfg: ProbeConfig, rng: random.Random
) -> Iterator[tuple[Value, SemVal]]:
    """Sample argument values paired with potentials that bound them.

    Base arguments are bounded by construction (ints and booleans by 1,
    lists by their length).  Function arguments are generated as closed
    terms and paired with their own translated potentials.
    """
    for _ in range(count):
        if dom == INT:
            yield VInt(rng.randint(cfg.int_lo, cfg.int_hi)), 1
        elif dom == BOOL:
            yield VBool(rng.random() < 0.5), 1
        elif dom == INT_LIST:
            items = tuple(
                rng.randint(cfg.int_lo, cfg.int_hi) for _ in range(rng.randint(0, cfg.max_list)))
            yield VList(items), len(items)
        elif isinstance(dom, ArrowTy):
            term = _gen(rng, min(cfg.depth, 3), dom, {}, cfg)
            value = eval_expr(term, budget=cfg.budget).value
            pot = denote(translate(term))
            if not isinstance(pot, SPair):
                raise AssertionError("translated function denoted a non-pair")
            yield value, pot.pot
        else:
            raise TypeError(f"not a type: {dom!r}")


def _render_arg(v: Value) -> str:
    from .interp import render_value

    return render_value(v)


# ---------------------------------------------------------------- fuzz campaign

@dataclass(frozen=True)
class Trial:
    index: int
    seed: int
    report: Report


@dataclass(frozen=True)
class CampaignSummary:
    cfg: ProbeConfig
    trials: tuple[Trial, ...]
    passed: int
    failed: int
    inconclusive: int

    def counterexamples(self) -> list[Trial]:
        return [t for t in self.trials if t.report.status == "fail"]

    def lines(self, as_json: bool = False) -> list[str]:
        out = [_trial_line(t, as_json) for t in self.trials]
        if as_json:
            out.append(json.dumps({
                "passed": self.passed,
                "failed": self.failed,
                "inconclusive": self.inconclusive,
                "trials": len(self.trials),
            }))
        else:
            out.append(
                f"passed={self.passed} failed={self.failed} "
                f"inconclusive={self.inconclusive} trials={len(self.trials)}")
        return out


def _trial_line(t: Trial, as_json: bool) -> str:
    r = t.report
    if as_json:
        payload = {
            "trial": t.index,
            "seed": t.seed,
            "cost": r.cost,
            "bound": r.bound_cost,
            "size": r.size,
            "pot": r.pot,
            "verdict": r.status,
        }
        if r.status != "pass":
            payload["detail"] = r.detail
            payload["program"] = r.program
        return json.dumps(payload)
    if r.status == "inconclusive":
        return f"trial={t.index} seed={t.seed} error={r.detail} verdict=inconclusive"
    line = (f"trial={t.index} seed={t.seed} cost={r.cost} bound={r.bound_cost} "
            f"size={r.size} pot={r.pot} verdict={r.status}")
    if r.status == "fail":
        line += f" detail={r.detail!r} program={r.program!r}"
    return line


def trial_seed(seed: int, index: int) -> int:
    return (seed * 1_000_003 + index) % (2**63)


def fuzz_campaign(cfg: ProbeConfig = DEFAULT_CONFIG) -> CampaignSummary:
    """Generate closed base-type programs and check each against its bound.

    Deterministic in cfg.seed: each trial derives its own printed seed, so
    any single line can be reproduced in isolation.  Budget and overflow
    stops are inconclusive, not failures.
    """
    trials: list[Trial] = []
    passed = failed = inconclusive = 0
    for k in range(cfg.trials):
        s = trial_seed(cfg.seed, k)
        rng = random.Random(s)
        ty = rng.choice(_BASE_TYPES)
        program = _gen(rng, cfg.depth, ty, {}, cfg)
        report = check_program(program, cfg)
        if report.status == "pass":
            passed += 1
        elif report.status == "fail":
            failed += 1
        else:
            inconclusive += 1
        trials.append(Trial(k, s, report))
    return CampaignSummary(cfg, tuple(trials), passed, failed, inconclusive)


# ---------------------------------------------------------------- bound tables

@dataclass(frozen=True)
class SweepArg:
    """The argument position whose potential is swept over a range."""


@dataclass(frozen=True)
class FixedArg:
    """A fixed cost/potential pair standing for an already-built argument."""

    cost: int = 1
    pot: int = 1


@dataclass(frozen=True)
class TermArg:
    """A closed target term supplied as the argument; its translated pair
    is used, so function arguments get honest function potentials."""

    term: Expr


ArgSpec = Union[SweepArg, FixedArg, TermArg]


@dataclass(frozen=True)
class BoundRow:
    n: int
    cost: int
    pot: int


@dataclass(frozen=True)
class BoundTable:
    rows: tuple[BoundRow, ...]

    def costs(self) -> list[int]:
        return [r.cost for r in self.rows]

    def pots(self) -> list[int]:
        return [r.pot for r in self.rows]


def tabulate(e: Expr, args: Sequence[ArgSpec], ns: Sequence[int]) -> BoundTable:
    """Bound cost/potential of applying e to the given arguments, per n.

    Exactly one argument must be a SweepArg; it is modeled as a value
    (cost 1) of potential n.  The application is performed in the
    denotational semantics, charging one unit plus both sides' costs per
    application, which matches evaluating `f a1 .. ak` with the function and
    arguments already bound to variables.
    """
    ty = typecheck({}, e)
    if sum(isinstance(a, SweepArg) for a in args) != 1:
        raise ValueError("exactly one argument must be swept")
    doms: list[Ty] = []
    result_ty = ty
    for spec in args:
        if not isinstance(result_ty, ArrowTy):
            raise ValueError(f"too many arguments for type {ty}")
        doms.append(result_ty.dom)
        result_ty = result_ty.cod
    if isinstance(result_ty, ArrowTy):
        raise ValueError(f"result type {result_ty} is a function; supply more arguments")
    for spec, dom in zip(args, doms):
        if isinstance(spec, (SweepArg, FixedArg)) and isinstance(dom, ArrowTy):
            raise ValueError(f"argument of type {dom} needs a term, not a scalar potential")
        if isinstance(spec, TermArg) and typecheck({}, spec.term) != dom:
            raise ValueError(f"argument term does not have type {dom}")

    cplx = translate(e)
    term_pairs = {
        i: denote(translate(spec.term))
        for i, spec in enumerate(args) if isinstance(spec, TermArg)
    }
    rows = []
    for n in ns:
        if n < 0:
            raise ValueError("potentials are nonnegative")
        # A fresh denotation per row keeps each row's working set independent.
        val = denote(cplx)
        for i, spec in enumerate(args):
            if isinstance(spec, SweepArg):
                arg = SPair(1, n)
            elif isinstance(spec, FixedArg):
                arg = SPair(spec.cost, spec.pot)
            else:
                arg = term_pairs[i]
            if not isinstance(val, SPair) or not isinstance(val.pot, SFun):
                raise ValueError("applied a non-function bound")
            out = val.pot.fn(arg.pot)
            if not isinstance(out, SPair):
                raise ValueError("potential application returned a non-pair")
            val = SPair(nat_add(1, val.cost, arg.cost, out.cost), out.pot)
        if not isinstance(val, SPair) or not isinstance(val.pot, int):
            raise ValueError("bound did not come out at base type")
        rows.append(BoundRow(n, val.cost, val.pot))
    return BoundTable(tuple(rows))


# ---------------------------------------------------------------- measured runs

def measure_application(
    e: Expr, arg_values: Sequence[Value], budget: int = DEFAULT_BUDGET
) -> EvalResult:
    """Cost of applying e to already-evaluated argument values.

    The function and each argument are bound to variables, so each costs one
    lookup, mirroring how `tabulate` charges arguments: the returned cost is
    directly comparable to the tabulated bound at the arguments' potentials.
    """
    clo = eval_expr(e, budget=budget).value
    env: dict[str, Value] = {"$f": clo}
    expr: Expr = Var("$f")
    for i, v in enumerate(arg_values):
        env[f"$a{i}"] = v
        expr = App(expr, Var(f"$a{i}"))
    return eval_expr(expr, env, budget=budget)


def descending_list(n: int) -> VList:
    return VList(tuple(range(n, 0, -1)))


def binary_lists(n: int) -> Iterator[VList]:
    """All 0/1 lists of length n; adversarial inputs for small n."""
    for bits in range(2**n):
        yield VList(tuple((bits >> i) & 1 for i in range(n)))


# ---------------------------------------------------------------- lemma probes

def canonical_semval(cty: CTy, k: int) -> SemVal:
    """A deterministic inhabitant of a complexity type, scaled by k."""
    if isinstance(cty, NatTy):
        return k
    if isinstance(cty, ProdTy):
        return SPair(k, canonical_semval(cty.pot, k))
    if isinstance(cty, ArrowPotTy):
        dom, cod = cty.dom, cty.cod
        def fn(q: SemVal, cod=cod, k=k) -> SemVal:
            bump = q if isinstance(q, int) else 1
            return canonical_semval(cod, min(k + bump, 64))
        return SFun(fn)
    raise TypeError(f"not a complexity type: {cty!r}")


def semval_le(a: SemVal, b: SemVal, cty: CTy, probes: Sequence[int] = range(6)) -> bool:
    """Pointwise order on semantic values, probing function types."""
    if isinstance(cty, NatTy):
        return a <= b
    if isinstance(cty, ProdTy):
        return a.cost <= b.cost and semval_le(a.pot, b.pot, cty.pot, probes)
    if isinstance(cty, ArrowPotTy):
        return all(
            semval_le(a.fn(_probe_pot(cty.dom, i)), b.fn(_probe_pot(cty.dom, i)), cty.cod, probes)
            for i in probes)
    raise TypeError(f"not a complexity type: {cty!r}")


def _probe_pot(cty: CTy, i: int) -> SemVal:
    return i if isinstance(cty, NatTy) else canonical_semval(cty, i)


# ---------------------------------------------------------------- complexity-term generation

def gen_cplx_term(seed: int, depth: int, cty: CTy, ctx: Mapping[str, CTy] | None = None) -> CplxExpr:
    """Generate a well-typed complexity expression, deterministically.

    Used by the property tests for the semantic lemmas (max as upper bound,
    substitution commuting with denotation, pfold dominating its base)."""
    rng = random.Random(seed)

    def vars_of(t: CTy, c: Mapping[str, CTy]) -> list[str]:
        return sorted(name for name, ty in c.items() if ty == t)

    def leaf(t: CTy, c: dict[str, CTy]) -> CplxExpr:
        names = vars_of(t, c)
        if names and rng.random() < 0.5:
            return CVar(rng.choice(names))
        if isinstance(t, NatTy):
            return CNum(rng.randint(0, 5))
        if isinstance(t, ProdTy):
            return CPair(CNum(rng.randint(0, 5)), leaf(t.pot, c))
        if isinstance(t, ArrowPotTy):
            param = _fresh_cplx_var(c)
            inner = CLam(param, t.dom, leaf(t.cod, {**c, param: ProdTy(t.dom)}))
            return PotOf(inner)
        raise TypeError(f"not a complexity type: {t!r}")

    def go(d: int, t: CTy, c: dict[str, CTy]) -> CplxExpr:
        if d <= 0:
            return leaf(t, c)
        if isinstance(t, NatTy):
            roll = rng.random()
            if roll < 0.30:
                return CPlus(go(d - 1, t, c), go(d - 1, t, c))
            if roll < 0.50:
                return CMax(go(d - 1, t, c), go(d - 1, t, c))
            if roll < 0.70:
                return CostOf(go(d - 1, ProdTy(NAT), c))
            if roll < 0.85:
                return PotOf(go(d - 1, ProdTy(NAT), c))
            return leaf(t, c)
        if isinstance(t, ProdTy):
            roll = rng.random()
            if roll < 0.30:
                return CPair(go(d - 1, NAT, c), go_pot(d - 1, t.pot, c))
            if roll < 0.45:
                return CMax(go(d - 1, t, c), go(d - 1, t, c))
            if roll < 0.60:
                c1 = dict(c)
                p = _fresh_cplx_var(c1)
                c1[p] = NAT
                ps = _fresh_cplx_var(c1)
                c1[ps] = NAT
                return PCase(go(d - 1, NAT, c), go(d - 1, t, c), p, ps, go(d - 1, t, c1))
            if roll < 0.75:
                c1 = dict(c)
                p = _fresh_cplx_var(c1)
                c1[p] = NAT
                ps = _fresh_cplx_var(c1)
                c1[ps] = NAT
                w = _fresh_cplx_var(c1)
                c1[w] = t
                return PFold(go(d - 1, NAT, c), go(d - 1, t, c), p, ps, w, go(d - 1, t, c1))
            if roll < 0.85:
                fn = go(d - 1, ProdTy(ArrowPotTy(NAT, t)), c)
                return StarApp(fn, go(d - 1, ProdTy(NAT), c))
            if isinstance(t.pot, ArrowPotTy):
                param = _fresh_cplx_var(c)
                body = go(d - 1, t.pot.cod, {**c, param: ProdTy(t.pot.dom)})
                return CLam(param, t.pot.dom, body)
            return leaf(t, c)
        if isinstance(t, ArrowPotTy):
            return go_pot(d, t, c)
        raise TypeError(f"not a complexity type: {t!r}")

    def go_pot(d: int, t: CTy, c: dict[str, CTy]) -> CplxExpr:
        # Potential position: naturals are ordinary terms; arrows come from
        # projecting a generated pair.
        if isinstance(t, NatTy):
            return go(d, t, c)
        return PotOf(go(d, ProdTy(t), c))

    return go(depth, cty, dict(ctx or {}))


def _fresh_cplx_var(ctx: Mapping[str, CTy]) -> str:
    n = len(ctx)
    while f"u{n}" in ctx:
        n += 1
    return f"u{n}"
