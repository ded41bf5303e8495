"""Generators, relation encodings, and executable checks for the metatheory.

Weakening, narrowing, and environment substitution are encoded as small data
types with structural validators mirroring their inductive constructors; each
lemma becomes a check_* function that validates the hypotheses and then tests
the conclusion through the type checker.  Lemma failures are kernel bugs,
never expected.

Inhabitation search is goal-directed and complete up to its stated bounds:
intermediate types (application domains, type-application arguments) are drawn
from a bounded universe of well-formed types plus goal-derived candidates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .contexts import (
    EMPTY,
    ETVar,
    EVar,
    Env,
    get_var,
    remove_var,
    term_binding_count,
    type_binding_count,
    wf_typ,
)
from .hereditary import HsubstInput, normalize
from .measure import term_size
from .reduction import is_neutral
from .syntax import (
    Abs,
    All,
    App,
    Arrow,
    Kind,
    TAbs,
    TApp,
    TVar,
    Term,
    Typ,
    Var,
    shift,
    shift_typ,
    subst,
    subst_typ,
    tshift,
    tsubst,
)
from .typecheck import check_kinding, infer_kind, infer_type, try_infer_type


def term_bindings(e: Env) -> list[tuple[int, Typ]]:
    """All (index, type) term bindings visible in e."""
    out = []
    for i in range(term_binding_count(e)):
        ty = get_var(e, i)
        assert ty is not None
        out.append((i, ty))
    return out


# -- random generation -------------------------------------------------------


def rand_wf_type(rng: random.Random, e: Env, size: int, max_kind: int = 2) -> Typ:
    """A random type that is well-formed in e."""
    tvs = type_binding_count(e)
    if size <= 1:
        if tvs:
            return TVar(rng.randrange(tvs))
        return All(rng.randint(0, max_kind), TVar(0))
    r = rng.random()
    if tvs and r < 0.35:
        return TVar(rng.randrange(tvs))
    if r < 0.7:
        k = rng.randint(0, max_kind)
        return All(k, rand_wf_type(rng, ETVar(e, k), size - 1, max_kind))
    return Arrow(
        rand_wf_type(rng, e, size // 2, max_kind),
        rand_wf_type(rng, e, size // 2, max_kind),
    )


def rand_env(rng: random.Random, max_depth: int = 3) -> Env:
    e: Env = EMPTY
    for _ in range(rng.randint(0, max_depth)):
        if rng.random() < 0.5:
            e = ETVar(e, rng.randint(0, 2))
        else:
            e = EVar(e, rand_wf_type(rng, e, 3))
    return e


def _synth(rng: random.Random, e: Env, goal: Typ, fuel: int) -> Term | None:
    """Some term of exactly the given type, or None when the search gives up."""
    if fuel <= 0:
        return None
    candidates = [Var(i) for i, ty in term_bindings(e) if ty == goal]
    if candidates and rng.random() < 0.6:
        return rng.choice(candidates)
    match goal:
        case Arrow(dom, cod):
            body = _synth(rng, EVar(e, dom), cod, fuel - 1)
            return None if body is None else Abs(dom, body)
        case All(k, body_ty):
            body = _synth(rng, ETVar(e, k), body_ty, fuel - 1)
            return None if body is None else TAbs(k, body)
        case TVar(_):
            return candidates[0] if candidates else None
    return None


def _gen(rng: random.Random, e: Env, budget: int) -> tuple[Term, Typ]:
    bindings = term_bindings(e)

    def leaf() -> tuple[Term, Typ]:
        if bindings and rng.random() < 0.7:
            i, ty = rng.choice(bindings)
            return Var(i), ty
        ty = rand_wf_type(rng, e, 2)
        return Abs(ty, Var(0)), Arrow(ty, ty)

    if budget <= 1:
        return leaf()
    shapes = ["abs", "tabs", "tapp"]
    if budget >= 3:
        shapes.append("app")
    if bindings:
        shapes += ["var", "var"]
    shape = rng.choice(shapes)
    if shape == "var":
        i, ty = rng.choice(bindings)
        if isinstance(ty, Arrow) and budget >= 2:
            arg = _synth(rng, e, ty.dom, 6)
            if arg is not None and term_size(arg) <= budget - 1:
                return App(Var(i), arg), ty.cod
        if isinstance(ty, All):
            for _ in range(4):
                targ = rand_wf_type(rng, e, 2)
                mk = infer_kind(e, targ)
                if mk is not None and mk <= ty.bound:
                    return TApp(Var(i), targ), tsubst(ty.body, 0, targ)
        return Var(i), ty
    if shape == "abs":
        ty = rand_wf_type(rng, e, 3)
        body, bty = _gen(rng, EVar(e, ty), budget - 1)
        return Abs(ty, body), Arrow(ty, bty)
    if shape == "tabs":
        k = rng.randint(0, 2)
        body, bty = _gen(rng, ETVar(e, k), budget - 1)
        return TAbs(k, body), All(k, bty)
    if shape == "tapp":
        targ = rand_wf_type(rng, e, 2)
        mk = infer_kind(e, targ)
        assert mk is not None  # rand_wf_type is well-formed and e is wf
        k = mk + rng.randint(0, 1)
        if budget >= 3:
            body, bty = _gen(rng, ETVar(e, k), budget - 2)
            return TApp(TAbs(k, body), targ), tsubst(bty, 0, targ)
        return leaf()
    # app: build a guaranteed redex so normalization has work to do
    b1 = (budget - 2) // 2
    b2 = budget - 2 - b1
    arg, aty = _gen(rng, e, max(b2, 1))
    body, bty = _gen(rng, EVar(e, aty), max(b1, 1))
    return App(Abs(aty, body), arg), bty


def gen_well_typed(seed: int, size_budget: int, env: Env = EMPTY) -> tuple[Term, Typ]:
    """A deterministic well-typed term with term_size <= size_budget."""
    rng = random.Random(seed)
    return _gen(rng, env, size_budget)


def gen_pre_instance(seed: int) -> tuple[Env, Typ, HsubstInput]:
    """A deterministic instance satisfying the hereditary precondition."""
    rng = random.Random(seed)
    base = rand_env(rng, 2)
    u0, _ = _gen(rng, base, rng.randint(1, 6))
    u = normalize(u0)
    var_type = infer_type(base, u)
    lead = 0
    cur = base
    while isinstance(cur, EVar):
        lead += 1
        cur = cur.rest
    x = rng.randint(0, lead)
    env = insert_var_env(base, x, var_type)
    t0, _ = _gen(rng, env, rng.randint(1, 6))
    target = normalize(t0)
    goal = infer_type(env, target)
    return env, goal, HsubstInput(var_type, target, u, x)


# -- environment reshaping relations -----------------------------------------


def insert_var_env(e: Env, x: int, ty: Typ) -> Env:
    """Insert a term binding so that remove_var at x gives e back.

    Valid when the first x bindings of e are term bindings, so the stored
    annotation needs no shifting.
    """
    if x == 0:
        return EVar(e, ty)
    if isinstance(e, EVar):
        return EVar(insert_var_env(e.rest, x - 1, ty), e.annot)
    raise ValueError("insertion point is past a type binding")


@dataclass(frozen=True)
class InsertKind:
    """A type binding inserted at type index `position`."""

    position: int
    before: Env
    after: Env

    def is_valid(self) -> bool:
        return is_insert_kind(self.position, self.before, self.after)


def is_insert_kind(x: int, before: Env, after: Env) -> bool:
    if x == 0 and isinstance(after, ETVar) and after.rest == before:
        return True
    match before, after:
        case (EVar(e1, t1), EVar(e2, t2)):
            return t2 == tshift(x, t1) and is_insert_kind(x, e1, e2)
        case (ETVar(e1, k1), ETVar(e2, k2)):
            return x >= 1 and k1 == k2 and is_insert_kind(x - 1, e1, e2)
    return False


def make_insert_kind(rng: random.Random, e: Env, x: int, k: Kind) -> InsertKind:
    """Construct a random valid insertion of kind k at type index x into e."""

    def build(e: Env, x: int) -> Env:
        if x == 0 and not (isinstance(e, EVar) and rng.random() < 0.5):
            return ETVar(e, k)
        if isinstance(e, EVar):
            return EVar(build(e.rest, x), tshift(x, e.annot))
        assert isinstance(e, ETVar) and x >= 1
        return ETVar(build(e.rest, x - 1), e.bound)

    return InsertKind(x, e, build(e, x))


@dataclass(frozen=True)
class Narrow:
    """One type-binding bound lowered strictly, everything else unchanged."""

    position: int
    before: Env
    after: Env

    def is_valid(self) -> bool:
        return is_narrow(self.position, self.before, self.after)


def is_narrow(x: int, before: Env, after: Env) -> bool:
    match before, after:
        case (ETVar(e1, k1), ETVar(e2, k2)):
            if x == 0:
                return e1 == e2 and k2 < k1
            return k1 == k2 and is_narrow(x - 1, e1, e2)
        case (EVar(e1, t1), EVar(e2, t2)):
            return t1 == t2 and wf_typ(e2, t2) and is_narrow(x, e1, e2)
    return False


def lower_bound_at(e: Env, x: int, new_k: Kind) -> Env:
    """e with the x-th type binding's bound replaced by new_k."""
    match e:
        case EVar(rest, ty):
            return EVar(lower_bound_at(rest, x, new_k), ty)
        case ETVar(rest, k):
            if x == 0:
                return ETVar(rest, new_k)
            return ETVar(lower_bound_at(rest, x - 1, new_k), k)
    raise ValueError("no type binding at that index")


@dataclass(frozen=True)
class EnvSubst:
    """A type binding at `position` discharged by substituting `replacement`."""

    position: int
    replacement: Typ
    before: Env
    after: Env

    def is_valid(self) -> bool:
        return is_env_subst(self.position, self.replacement, self.before, self.after)


def untshift(cutoff: int, ty: Typ) -> Typ | None:
    """Inverse of tshift at cutoff; None when index `cutoff` occurs."""
    match ty:
        case TVar(i):
            if i < cutoff:
                return ty
            if i == cutoff:
                return None
            return TVar(i - 1)
        case Arrow(a, b):
            ua = untshift(cutoff, a)
            ub = untshift(cutoff, b)
            return None if ua is None or ub is None else Arrow(ua, ub)
        case All(k, body):
            ub = untshift(cutoff + 1, body)
            return None if ub is None else All(k, ub)
    raise TypeError(f"not a type: {ty!r}")


def is_env_subst(x: int, repl: Typ, before: Env, after: Env) -> bool:
    if x == 0 and isinstance(before, ETVar) and before.rest == after:
        return check_kinding(after, repl, before.bound)
    match before, after:
        case (EVar(e1, t1), EVar(e2, t2)):
            return t2 == tsubst(t1, x, repl) and is_env_subst(x, repl, e1, e2)
        case (ETVar(e1, k1), ETVar(e2, k2)):
            if x < 1 or k1 != k2:
                return False
            inner = untshift(0, repl)
            return inner is not None and is_env_subst(x - 1, inner, e1, e2)
    return False


def env_subst_here(e: Env, repl: Typ, k: Kind) -> EnvSubst:
    assert check_kinding(e, repl, k)
    return EnvSubst(0, repl, ETVar(e, k), e)


def env_subst_lift_var(es: EnvSubst, ty: Typ) -> EnvSubst:
    return EnvSubst(
        es.position,
        es.replacement,
        EVar(es.before, ty),
        EVar(es.after, tsubst(ty, es.position, es.replacement)),
    )


def env_subst_lift_kind(es: EnvSubst, k: Kind) -> EnvSubst:
    return EnvSubst(
        es.position + 1,
        tshift(0, es.replacement),
        ETVar(es.before, k),
        ETVar(es.after, k),
    )


# -- lemma checks -------------------------------------------------------------


def check_weakening(iw: InsertKind, t: Term, ty: Typ) -> bool:
    """Typing survives inserting a type binding, with indices shifted."""
    expected = tshift(iw.position, ty)
    return try_infer_type(iw.after, shift_typ(iw.position, t)) == expected


def check_weakening_var(e: Env, extra: Typ, t: Term, ty: Typ) -> bool:
    """Typing survives an unused term binding, with term indices shifted."""
    if not wf_typ(e, extra):
        return True
    return try_infer_type(EVar(e, extra), shift(0, t)) == ty


def check_narrowing(nw: Narrow, t: Term, ty: Typ) -> bool:
    """Typing survives lowering a type binding's bound."""
    return try_infer_type(nw.after, t) == ty


def check_subst_term_lemma(e: Env, x: int, t: Term, u: Term) -> bool:
    """Substituting a well-typed term for a bound variable preserves typing."""
    v = try_infer_type(e, t)
    w = get_var(e, x)
    e2 = remove_var(e, x)
    if v is None or w is None or try_infer_type(e2, u) != w:
        return True  # hypotheses fail, vacuously fine
    return try_infer_type(e2, subst(t, x, u)) == v


def check_subst_typ_lemma(e: Env, t: Term, repl: Typ, k: Kind) -> bool:
    """Substituting a kinded type for the innermost type binding preserves
    typing, with the result type substituted the same way."""
    u = try_infer_type(ETVar(e, k), t)
    if u is None or not check_kinding(e, repl, k):
        return True
    return try_infer_type(e, subst_typ(t, 0, repl)) == tsubst(u, 0, repl)


def check_subst_lemmas(e: Env, x: int, t: Term, u: Term) -> bool:
    """Both substitution lemmas on one instance.

    The type-substitution half is exercised whenever t is a type-application
    redex, whose reduct is exactly an instance of that lemma.
    """
    ok = check_subst_term_lemma(e, x, t, u)
    if isinstance(t, TApp) and isinstance(t.fn, TAbs):
        ok = ok and check_subst_typ_lemma(e, t.fn.body, t.arg, t.fn.bound)
    return ok


def check_env_subst(es: EnvSubst, t: Term, ty: Typ) -> bool:
    """Typing is coherent under environment substitution."""
    if try_infer_type(es.before, t) != ty:
        return True
    return try_infer_type(
        es.after, subst_typ(t, es.position, es.replacement)
    ) == tsubst(ty, es.position, es.replacement)


# -- exhaustive enumeration ----------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_types(e: Env, max_size: int, max_kind: int) -> tuple[Typ, ...]:
    """All well-formed types in e up to a node-count size bound."""
    out: list[Typ] = []
    for i in range(type_binding_count(e)):
        out.append(TVar(i))
    if max_size >= 2:
        for k in range(max_kind + 1):
            for body in enumerate_types(ETVar(e, k), max_size - 1, max_kind):
                out.append(All(k, body))
    if max_size >= 3:
        for left_size in range(1, max_size - 1):
            for a in _types_exact(e, left_size, max_kind):
                for b in enumerate_types(e, max_size - 1 - left_size, max_kind):
                    out.append(Arrow(a, b))
    # dedupe, keep a deterministic order
    seen = set()
    unique = []
    for ty in out:
        if ty not in seen and _type_size(ty) <= max_size:
            seen.add(ty)
            unique.append(ty)
    return tuple(unique)


def _type_size(ty: Typ) -> int:
    match ty:
        case TVar(_):
            return 1
        case Arrow(a, b):
            return 1 + _type_size(a) + _type_size(b)
        case All(_, body):
            return 1 + _type_size(body)
    raise TypeError(f"not a type: {ty!r}")


def _types_exact(e: Env, size: int, max_kind: int) -> list[Typ]:
    return [ty for ty in enumerate_types(e, size, max_kind) if _type_size(ty) == size]


@lru_cache(maxsize=None)
def anti_tsubst(goal: Typ, x: int, targ: Typ) -> tuple[Typ, ...]:
    """All G with tsubst(G, x, targ) == goal; exact inverse image."""
    out: list[Typ] = []
    if goal == targ:
        out.append(TVar(x))
    match goal:
        case TVar(i):
            out.append(TVar(i if i < x else i + 1))
        case Arrow(a, b):
            out.extend(
                Arrow(ga, gb)
                for ga in anti_tsubst(a, x, targ)
                for gb in anti_tsubst(b, x, targ)
            )
        case All(k, body):
            out.extend(All(k, gb) for gb in anti_tsubst(body, x + 1, tshift(0, targ)))
    seen: set[Typ] = set()
    unique = []
    for g in out:
        if g not in seen:
            seen.add(g)
            unique.append(g)
    return tuple(unique)


@lru_cache(maxsize=None)
def _inhabitants_exact(
    e: Env, goal: Typ, size: int, type_size: int, max_kind: int
) -> tuple[Term, ...]:
    out: list[Term] = []
    if size == 0:
        out.extend(Var(i) for i, ty in term_bindings(e) if ty == goal)
        return tuple(out)
    budget = size - 1
    if isinstance(goal, Arrow):
        out.extend(
            Abs(goal.dom, b)
            for b in _inhabitants_exact(
                EVar(e, goal.dom), goal.cod, budget, type_size, max_kind
            )
        )
    if isinstance(goal, All):
        out.extend(
            TAbs(goal.bound, b)
            for b in _inhabitants_exact(
                ETVar(e, goal.bound), goal.body, budget, type_size, max_kind
            )
        )
    # type application: t1 : forall k. G with G[targ] = goal; G by anti-substitution
    for targ in enumerate_types(e, type_size, max_kind):
        mk = infer_kind(e, targ)
        if mk is None:
            continue
        for body in anti_tsubst(goal, 0, targ):
            for k in range(mk, max_kind + 1):
                out.extend(
                    TApp(t1, targ)
                    for t1 in _inhabitants_exact(
                        e, All(k, body), budget, type_size, max_kind
                    )
                )
    # application: the argument's type is drawn from the bounded candidate
    # set; the function is then searched at the concrete arrow goal
    for aty in app_arg_type_candidates(e, goal, type_size, max_kind):
        for s2 in range(budget + 1):
            fns = _inhabitants_exact(
                e, Arrow(aty, goal), budget - s2, type_size, max_kind
            )
            if not fns:
                continue
            args = _inhabitants_exact(e, aty, s2, type_size, max_kind)
            out.extend(App(fn, arg) for fn in fns for arg in args)
    return tuple(out)


def _spine_domains(ty: Typ) -> list[Typ]:
    out = []
    while isinstance(ty, Arrow):
        out.append(ty.dom)
        ty = ty.cod
    return out


@lru_cache(maxsize=None)
def app_arg_type_candidates(
    e: Env, goal: Typ, type_size: int, max_kind: int
) -> tuple[Typ, ...]:
    """Types an application argument may take in the bounded search grammar:
    the type universe plus arrow domains visible in bindings and the goal."""
    out: list[Typ] = list(enumerate_types(e, type_size, max_kind))
    seen = set(out)
    for _, ty in term_bindings(e):
        for dom in _spine_domains(ty):
            if dom not in seen:
                seen.add(dom)
                out.append(dom)
    for dom in _spine_domains(goal):
        if dom not in seen:
            seen.add(dom)
            out.append(dom)
    return tuple(out)


def enumerate_terms(
    e: Env, goal: Typ, max_size: int, type_size: int = 3, max_kind: int = 2
) -> list[Term]:
    """All terms of the goal type up to the size bound, in deterministic order.

    Complete relative to the bounded universe used for intermediate types;
    see the module docstring.
    """
    out: list[Term] = []
    for size in range(max_size + 1):
        block = sorted(
            set(_inhabitants_exact(e, goal, size, type_size, max_kind)),
            key=repr,
        )
        out.extend(block)
    return out


@lru_cache(maxsize=None)
def _typed_terms_exact(
    e: Env, size: int, annot_size: int, max_kind: int
) -> tuple[tuple[Term, Typ], ...]:
    out: list[tuple[Term, Typ]] = []
    if size == 0:
        out.extend((Var(i), ty) for i, ty in term_bindings(e))
        return tuple(out)
    budget = size - 1
    annots = enumerate_types(e, annot_size, max_kind)
    for annot in annots:
        for body, bty in _typed_terms_exact(EVar(e, annot), budget, annot_size, max_kind):
            out.append((Abs(annot, body), Arrow(annot, bty)))
    for k in range(max_kind + 1):
        for body, bty in _typed_terms_exact(ETVar(e, k), budget, annot_size, max_kind):
            out.append((TAbs(k, body), All(k, bty)))
    for fn, fty in _typed_terms_exact(e, budget, annot_size, max_kind):
        if isinstance(fty, All):
            for targ in annots:
                mk = infer_kind(e, targ)
                if mk is not None and mk <= fty.bound:
                    out.append((TApp(fn, targ), tsubst(fty.body, 0, targ)))
    for s1 in range(budget + 1):
        by_dom: dict[Typ, list[tuple[Term, Typ]]] = {}
        for fn, fty in _typed_terms_exact(e, s1, annot_size, max_kind):
            if isinstance(fty, Arrow):
                by_dom.setdefault(fty.dom, []).append((fn, fty))
        if not by_dom:
            continue
        for arg, aty in _typed_terms_exact(e, budget - s1, annot_size, max_kind):
            for fn, fty in by_dom.get(aty, ()):
                out.append((App(fn, arg), fty.cod))
    return tuple(out)


def enumerate_well_typed(
    e: Env, max_size: int, annot_size: int = 2, max_kind: int = 1
) -> list[tuple[Term, Typ]]:
    """Every well-typed term up to the size bound whose annotations come from
    the bounded type universe; the exhaustive desk-scale corpus."""
    out: list[tuple[Term, Typ]] = []
    for size in range(max_size + 1):
        out.extend(_typed_terms_exact(e, size, annot_size, max_kind))
    return out


def check_neutral_tvar(
    k: Kind,
    max_size: int,
    type_size: int = 4,
    max_kind: int = 2,
    search_type_size: int = 2,
) -> bool:
    """No neutral term types in the one-type-variable environment.

    The "any type" quantifier is bounded: goals range over well-formed types
    up to type_size; the inner search uses its own smaller universe.
    """
    env = ETVar(EMPTY, k)
    for goal in enumerate_types(env, type_size, max_kind):
        for t in enumerate_terms(env, goal, max_size, search_type_size, max_kind):
            if is_neutral(t):
                return False
    return True
