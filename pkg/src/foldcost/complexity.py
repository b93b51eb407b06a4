"""The complexity language: recurrences over costs and potentials.

Programs in the target language are translated (see translate.py) into this
first-order-data language of naturals, cost/potential pairs, and potential
functions.  A pair (c, p) reads as "costs at most c to produce a value of
potential at most p"; potentials of functions map argument potentials to
pairs for the result.

Expressions: variables; numerals; + and max; pairs with projections `_c` and
`_p`; costed lambdas and applications (an application charges one unit plus
both sides' costs); `pcase`, a one-step match on a natural; and `pfold`,
primitive recursion on a natural.  Branch results of pcase/pfold are combined
with max rather than chosen, so the denotation is an upper bound regardless
of which branch a run of the original program takes.

Denotations use checked nonnegative 64-bit arithmetic: costs and potentials
that overflow raise NatOverflowError rather than wrapping.  `denote` is pure;
it stages the expression into closures and caches shared subexpressions per
environment, which only short-circuits re-deriving equal values
(environments are immutable), never changes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

NAT_MAX = 2**63 - 1


class CplxTypeError(Exception):
    pass


class DenoteError(Exception):
    pass


class NatOverflowError(DenoteError):
    pass


# ---------------------------------------------------------------- types

class CTy:
    """Base class for complexity-language types."""


@dataclass(frozen=True)
class NatTy(CTy):
    """Naturals: costs, and the potentials of ints, booleans, and lists."""

    def __str__(self) -> str:
        return "N"


@dataclass(frozen=True)
class ArrowPotTy(CTy):
    """Potential of a function: argument potential to result pair."""

    dom: CTy
    cod: CTy

    def __str__(self) -> str:
        dom = str(self.dom)
        if isinstance(self.dom, (ArrowPotTy, ProdTy)):
            dom = f"({dom})"
        return f"{dom} -> {self.cod}"


@dataclass(frozen=True)
class ProdTy(CTy):
    """A cost paired with a potential; the cost side is always N."""

    pot: CTy

    def __str__(self) -> str:
        pot = str(self.pot)
        if isinstance(self.pot, ArrowPotTy):
            pot = f"({pot})"
        return f"N x {pot}"


NAT = NatTy()
NAT_PAIR = ProdTy(NAT)


def is_potential(ty: CTy) -> bool:
    return isinstance(ty, (NatTy, ArrowPotTy))


# ---------------------------------------------------------------- expressions

class CplxExpr:
    """Base class for complexity-language expressions."""


@dataclass(frozen=True)
class CVar(CplxExpr):
    name: str


@dataclass(frozen=True)
class CNum(CplxExpr):
    value: int


@dataclass(frozen=True)
class CPlus(CplxExpr):
    lhs: CplxExpr
    rhs: CplxExpr


@dataclass(frozen=True)
class CMax(CplxExpr):
    lhs: CplxExpr
    rhs: CplxExpr


@dataclass(frozen=True)
class CPair(CplxExpr):
    cost: CplxExpr
    pot: CplxExpr


@dataclass(frozen=True)
class CostOf(CplxExpr):
    pair: CplxExpr


@dataclass(frozen=True)
class PotOf(CplxExpr):
    pair: CplxExpr


@dataclass(frozen=True)
class CLam(CplxExpr):
    """Costed lambda: a pair of cost 1 and a potential function."""

    param: str
    param_ty: CTy  # the argument's potential type
    body: CplxExpr


@dataclass(frozen=True)
class StarApp(CplxExpr):
    """Costed application: one unit plus both sides' costs plus the body."""

    fn: CplxExpr
    arg: CplxExpr


@dataclass(frozen=True)
class PCase(CplxExpr):
    """One-step match on a natural: at q+1 the branches are max-ed, with the
    head potential fixed at 1 and ps bound to q."""

    scrut: CplxExpr
    zero: CplxExpr
    p: str
    ps: str
    succ: CplxExpr


@dataclass(frozen=True)
class PFold(CplxExpr):
    """Primitive recursion on a natural.

    At q+1 the recursive pair w is computed at q, its cost is charged along
    with two units for the unrolling, and the potential is the max of the
    zero branch and the step's potential.
    """

    scrut: CplxExpr
    zero: CplxExpr
    p: str
    ps: str
    w: str
    succ: CplxExpr


def cplx_free_vars(e: CplxExpr) -> frozenset[str]:
    match e:
        case CVar(name):
            return frozenset((name,))
        case CNum():
            return frozenset()
        case CPlus(lhs, rhs) | CMax(lhs, rhs):
            return cplx_free_vars(lhs) | cplx_free_vars(rhs)
        case CPair(cost, pot):
            return cplx_free_vars(cost) | cplx_free_vars(pot)
        case CostOf(pair) | PotOf(pair):
            return cplx_free_vars(pair)
        case CLam(param, _, body):
            return cplx_free_vars(body) - {param}
        case StarApp(fn, arg):
            return cplx_free_vars(fn) | cplx_free_vars(arg)
        case PCase(scrut, zero, p, ps, succ):
            branch = cplx_free_vars(succ) - {p, ps}
            return cplx_free_vars(scrut) | cplx_free_vars(zero) | branch
        case PFold(scrut, zero, p, ps, w, succ):
            branch = cplx_free_vars(succ) - {p, ps, w}
            return cplx_free_vars(scrut) | cplx_free_vars(zero) | branch
    raise TypeError(f"not a complexity expression: {e!r}")


# ---------------------------------------------------------------- typechecking

def ctypecheck(ctx: Mapping[str, CTy], e: CplxExpr) -> CTy:
    """Return the type of e under ctx, or raise CplxTypeError.

    Translated expressions are DAGs (a cost charge references its pair from
    both projections), so revisits of a shared node under the same context
    are answered from a cache rather than re-walked; the cache pins the
    nodes and contexts it keys by identity.
    """
    return _ctypecheck(ctx, e, {})


def _ctypecheck(ctx: Mapping[str, CTy], e: CplxExpr, memo: dict) -> CTy:
    key = (id(e), id(ctx))
    hit = memo.get(key)
    if hit is not None:
        return hit[2]
    ty = _ctype_node(ctx, e, memo)
    memo[key] = (e, ctx, ty)
    return ty


def _ctype_node(ctx: Mapping[str, CTy], e: CplxExpr, memo: dict) -> CTy:
    match e:
        case CVar(name):
            ty = ctx.get(name)
            if ty is None:
                raise CplxTypeError(f"unbound variable: {name}")
            return ty
        case CNum(value):
            if not 0 <= value <= NAT_MAX:
                raise CplxTypeError(f"numeral out of natural range: {value}")
            return NAT
        case CPlus(lhs, rhs):
            _check(ctx, lhs, NAT, "left operand of +", memo)
            _check(ctx, rhs, NAT, "right operand of +", memo)
            return NAT
        case CMax(lhs, rhs):
            lt = _ctypecheck(ctx, lhs, memo)
            rt = _ctypecheck(ctx, rhs, memo)
            if lt != rt:
                raise CplxTypeError(f"max of mismatched types: {lt} and {rt}")
            return lt
        case CPair(cost, pot):
            _check(ctx, cost, NAT, "cost component", memo)
            pt = _ctypecheck(ctx, pot, memo)
            if not is_potential(pt):
                raise CplxTypeError(f"pair potential has non-potential type {pt}")
            return ProdTy(pt)
        case CostOf(pair):
            _pair_ty(ctx, pair, memo)
            return NAT
        case PotOf(pair):
            return _pair_ty(ctx, pair, memo).pot
        case CLam(param, param_ty, body):
            if not is_potential(param_ty):
                raise CplxTypeError(f"lambda parameter has non-potential type {param_ty}")
            body_ty = _ctypecheck({**ctx, param: ProdTy(param_ty)}, body, memo)
            return ProdTy(ArrowPotTy(param_ty, body_ty))
        case StarApp(fn, arg):
            fn_ty = _pair_ty(ctx, fn, memo)
            if not isinstance(fn_ty.pot, ArrowPotTy):
                raise CplxTypeError(f"applied a non-function of type {fn_ty}")
            arg_ty = _pair_ty(ctx, arg, memo)
            if arg_ty.pot != fn_ty.pot.dom:
                raise CplxTypeError(
                    f"argument potential {arg_ty.pot} does not match parameter {fn_ty.pot.dom}")
            return fn_ty.pot.cod
        case PCase(scrut, zero, p, ps, succ):
            _check(ctx, scrut, NAT, "pcase scrutinee", memo)
            zero_ty = _ctypecheck(ctx, zero, memo)
            succ_ty = _ctypecheck({**ctx, p: NAT, ps: NAT}, succ, memo)
            if succ_ty != zero_ty:
                raise CplxTypeError(f"pcase branches disagree: {zero_ty} and {succ_ty}")
            return zero_ty
        case PFold(scrut, zero, p, ps, w, succ):
            _check(ctx, scrut, NAT, "pfold scrutinee", memo)
            zero_ty = _ctypecheck(ctx, zero, memo)
            if not isinstance(zero_ty, ProdTy):
                raise CplxTypeError(f"pfold branches must be pairs, got {zero_ty}")
            succ_ty = _ctypecheck({**ctx, p: NAT, ps: NAT, w: zero_ty}, succ, memo)
            if succ_ty != zero_ty:
                raise CplxTypeError(f"pfold branches disagree: {zero_ty} and {succ_ty}")
            return zero_ty
    raise CplxTypeError(f"not a complexity expression: {e!r}")


def _check(ctx: Mapping[str, CTy], e: CplxExpr, expected: CTy, what: str, memo: dict) -> None:
    actual = _ctypecheck(ctx, e, memo)
    if actual != expected:
        raise CplxTypeError(f"{what}: expected {expected}, got {actual}")


def _pair_ty(ctx: Mapping[str, CTy], e: CplxExpr, memo: dict) -> ProdTy:
    ty = _ctypecheck(ctx, e, memo)
    if not isinstance(ty, ProdTy):
        raise CplxTypeError(f"expected a cost/potential pair, got {ty}")
    return ty


# ---------------------------------------------------------------- semantic values

@dataclass(frozen=True)
class SPair:
    cost: int
    pot: "SemVal"


@dataclass(frozen=True, eq=False)
class SFun:
    fn: Callable[["SemVal"], "SemVal"]


SemVal = Union[int, SPair, SFun]


def nat_add(*ns: int) -> int:
    total = sum(ns)
    if total > NAT_MAX:
        raise NatOverflowError("cost/potential arithmetic overflowed 64 bits")
    return total


def sem_max(a: SemVal, b: SemVal) -> SemVal:
    """Least upper bound of two semantic values of the same type.

    Pointwise on pairs; on functions it is computed lazily, by taking the max
    of the two results at every argument.
    """
    if isinstance(a, int) and isinstance(b, int):
        return max(a, b)
    if isinstance(a, SPair) and isinstance(b, SPair):
        return SPair(max(a.cost, b.cost), sem_max(a.pot, b.pot))
    if isinstance(a, SFun) and isinstance(b, SFun):
        return SFun(lambda q: sem_max(a.fn(q), b.fn(q)))
    raise DenoteError(f"max of mismatched values: {a!r} and {b!r}")


def dally(extra: int, pair: SPair) -> SPair:
    """Charge `extra` additional cost units onto a pair."""
    return SPair(nat_add(extra, pair.cost), pair.pot)


# ---------------------------------------------------------------- environments

class Env:
    """Immutable variable environment; extension copies.

    Environments are compared by identity (each extension is a new object),
    which is what makes them usable as cache keys inside `denote`.
    """

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Mapping[str, SemVal] | None = None):
        object.__setattr__(self, "_bindings", dict(bindings or {}))

    def lookup(self, name: str) -> SemVal:
        try:
            return self._bindings[name]
        except KeyError:
            raise DenoteError(f"unbound variable at denotation time: {name}") from None

    def extend(self, more: Mapping[str, SemVal]) -> "Env":
        return Env({**self._bindings, **more})

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("environments are immutable")


EMPTY_ENV = Env()


# ---------------------------------------------------------------- denotation

def denote(e: CplxExpr, env: Env | Mapping[str, SemVal] | None = None) -> SemVal:
    """Evaluate a complexity expression to its semantic value.

    The expression is first staged into nested closures, one per distinct
    node; a node referenced more than once (translation shares, rather than
    copies, the pair inside a cost charge) caches its value per environment,
    so the shared work is done once.  Staging changes nothing observable:
    evaluation is pure and the caches are keyed by immutable environments.
    """
    if not isinstance(env, Env):
        env = Env(env)
    refs: dict[int, int] = {}
    _count_refs(e, refs)
    return _stage(e, refs, {})(env)


def _count_refs(e: CplxExpr, refs: dict[int, int]) -> None:
    stack = [e]
    while stack:
        node = stack.pop()
        key = id(node)
        refs[key] = refs.get(key, 0) + 1
        if refs[key] > 1:
            continue
        match node:
            case CVar() | CNum():
                pass
            case CPlus(lhs, rhs) | CMax(lhs, rhs) | CPair(lhs, rhs) | StarApp(lhs, rhs):
                stack.append(lhs)
                stack.append(rhs)
            case CostOf(pair) | PotOf(pair):
                stack.append(pair)
            case CLam(_, _, body):
                stack.append(body)
            case PCase(scrut, zero, _, _, succ) | PFold(scrut, zero, _, _, _, succ):
                stack.append(scrut)
                stack.append(zero)
                stack.append(succ)
            case _:
                raise DenoteError(f"not a complexity expression: {node!r}")


def _stage(e: CplxExpr, refs: dict[int, int], staged: dict) -> Callable[[Env], SemVal]:
    done = staged.get(id(e))
    if done is not None:
        return done[1]

    fn: Callable[[Env], SemVal]
    match e:
        case CVar(name):
            def fn(env: Env, name=name) -> SemVal:
                return env.lookup(name)
        case CNum(value):
            def fn(env: Env, value=value) -> SemVal:
                return value
        case CPlus(lhs, rhs):
            lf, rf = _stage(lhs, refs, staged), _stage(rhs, refs, staged)

            def fn(env: Env, lf=lf, rf=rf) -> SemVal:
                a, b = lf(env), rf(env)
                if not isinstance(a, int) or not isinstance(b, int):
                    raise DenoteError("operands of + must be naturals")
                n = a + b
                if n > NAT_MAX:
                    raise NatOverflowError("cost/potential arithmetic overflowed 64 bits")
                return n
        case CMax(lhs, rhs):
            lf, rf = _stage(lhs, refs, staged), _stage(rhs, refs, staged)

            def fn(env: Env, lf=lf, rf=rf) -> SemVal:
                return sem_max(lf(env), rf(env))
        case CPair(cost, pot):
            cf, pf = _stage(cost, refs, staged), _stage(pot, refs, staged)

            def fn(env: Env, cf=cf, pf=pf) -> SemVal:
                return SPair(_as_nat(cf(env)), pf(env))
        case CostOf(pair):
            pf = _stage(pair, refs, staged)

            def fn(env: Env, pf=pf) -> SemVal:
                return _as_pair(pf(env)).cost
        case PotOf(pair):
            pf = _stage(pair, refs, staged)

            def fn(env: Env, pf=pf) -> SemVal:
                return _as_pair(pf(env)).pot
        case CLam(param, _, body):
            bf = _stage(body, refs, staged)

            # The parameter is bound to a pair of cost 1 (it is a value) and
            # the argument's potential.
            def fn(env: Env, param=param, bf=bf) -> SemVal:
                def apply(q: SemVal) -> SemVal:
                    return bf(env.extend({param: SPair(1, q)}))

                return SPair(1, SFun(apply))
        case StarApp(fn_e, arg_e):
            ff, af = _stage(fn_e, refs, staged), _stage(arg_e, refs, staged)

            def fn(env: Env, ff=ff, af=af) -> SemVal:
                f = _as_pair(ff(env))
                if not isinstance(f.pot, SFun):
                    raise DenoteError("applied a value with non-function potential")
                a = _as_pair(af(env))
                out = _as_pair(f.pot.fn(a.pot))
                return dally(nat_add(1, f.cost, a.cost), out)
        case PCase(scrut, zero, p, ps, succ):
            sf = _stage(scrut, refs, staged)
            zf = _stage(zero, refs, staged)
            tf = _stage(succ, refs, staged)

            def fn(env: Env, sf=sf, zf=zf, tf=tf, p=p, ps=ps) -> SemVal:
                n = _as_nat(sf(env))
                if n == 0:
                    return zf(env)
                return sem_max(zf(env), tf(env.extend({p: 1, ps: n - 1})))
        case PFold(scrut, zero, p, ps, w, succ):
            sf = _stage(scrut, refs, staged)
            zf = _stage(zero, refs, staged)
            tf = _stage(succ, refs, staged)

            # Primitive recursion, bottom up to keep long recursions off the
            # Python stack: acc is the value at q, starting at 0.
            def fn(env: Env, sf=sf, zf=zf, tf=tf, p=p, ps=ps, w=w) -> SemVal:
                n = _as_nat(sf(env))
                acc = _as_pair(zf(env))
                zero_pot = acc.pot
                for q in range(n):
                    env1 = env.extend({p: 1, ps: q, w: SPair(1, acc.pot)})
                    step = _as_pair(tf(env1))
                    cost = 2 + acc.cost + step.cost
                    if cost > NAT_MAX:
                        raise NatOverflowError(
                            "cost/potential arithmetic overflowed 64 bits")
                    acc = SPair(cost, sem_max(zero_pot, step.pot))
                return acc
        case _:
            raise DenoteError(f"not a complexity expression: {e!r}")

    if refs.get(id(e), 0) > 1 and not isinstance(e, (CVar, CNum)):
        fn = _shared(fn)
    staged[id(e)] = (e, fn)
    return fn


def _shared(inner: Callable[[Env], SemVal]) -> Callable[[Env], SemVal]:
    cache: dict[Env, SemVal] = {}

    def fn(env: Env) -> SemVal:
        val = cache.get(env)
        if val is None:
            val = inner(env)
            cache[env] = val
        return val

    return fn


def _as_nat(v: SemVal) -> int:
    if not isinstance(v, int):
        raise DenoteError(f"expected a natural, got: {v!r}")
    return v


def _as_pair(v: SemVal) -> SPair:
    if not isinstance(v, SPair):
        raise DenoteError(f"expected a cost/potential pair, got: {v!r}")
    return v


# ---------------------------------------------------------------- printing

_PREC_CO_OPEN = 0  # \* pcase pfold
_PREC_PLUS = 1
_PREC_STAR = 2
_PREC_PROJ = 3


def cplx_to_source(e: CplxExpr) -> str:
    """Concrete rendering of a complexity expression."""
    return _cshow(e, 0)


def _cshow(e: CplxExpr, ctx: int) -> str:
    match e:
        case CVar(name):
            return name
        case CNum(value):
            return str(value)
        case CPlus(lhs, rhs):
            s = f"{_cshow(lhs, _PREC_PLUS)} + {_cshow(rhs, _PREC_PLUS + 1)}"
            return _cwrap(s, ctx > _PREC_PLUS)
        case CMax(lhs, rhs):
            return f"max({_cshow(lhs, 0)}, {_cshow(rhs, 0)})"
        case CPair(cost, pot):
            return f"({_cshow(cost, 0)}, {_cshow(pot, 0)})"
        case CostOf(pair):
            return f"{_cshow(pair, _PREC_PROJ)}_c"
        case PotOf(pair):
            return f"{_cshow(pair, _PREC_PROJ)}_p"
        case CLam(param, param_ty, body):
            s = f"\\*{param}:{param_ty}. {_cshow(body, 0)}"
            return _cwrap(s, ctx > _PREC_CO_OPEN)
        case StarApp(fn, arg):
            s = f"{_cshow(fn, _PREC_STAR)} * {_cshow(arg, _PREC_STAR + 1)}"
            return _cwrap(s, ctx > _PREC_STAR)
        case PCase(scrut, zero, p, ps, succ):
            s = (f"pcase {_cshow(scrut, 0)} of ({_cshow(zero, 0)}, "
                 f"[{p}, {ps}] {_cshow(succ, 0)})")
            return _cwrap(s, ctx > _PREC_CO_OPEN)
        case PFold(scrut, zero, p, ps, w, succ):
            s = (f"pfold {_cshow(scrut, 0)} of ({_cshow(zero, 0)}, "
                 f"[{p}, {ps}, {w}] {_cshow(succ, 0)})")
            return _cwrap(s, ctx > _PREC_CO_OPEN)
    raise TypeError(f"not a complexity expression: {e!r}")


def _cwrap(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def render_semval(v: SemVal) -> str:
    match v:
        case int():
            return str(v)
        case SPair(cost, pot):
            return f"({cost}, {render_semval(pot)})"
        case SFun():
            return "<potential fun>"
    raise TypeError(f"not a semantic value: {v!r}")
