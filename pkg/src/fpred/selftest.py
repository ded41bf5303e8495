"""Property suites behind the `selftest` CLI subcommand.

Each suite draws deterministic instances from the testkit generators, runs the
corresponding check, and reports one TAP-style line.  A failing instance is a
kernel bug, never an expected outcome.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .contexts import EMPTY, ETVar, EVar, get_kind, wf_env, wf_typ
from .hereditary import hsubst_checked, normalize_instrumented
from .measure import (
    KindBag,
    dm_lt_oracle,
    kinds_of,
    mul_sum,
    multiset_lt,
    term_size,
    type_order,
)
from .reduction import is_normal, normalize_fuel
from .surface import parse_term, print_term
from .syntax import All, Arrow, TVar, Typ, Var, tshift, tsubst
from .testkit import (
    Narrow,
    check_env_subst,
    check_narrowing,
    check_neutral_tvar,
    check_subst_term_lemma,
    check_subst_typ_lemma,
    check_weakening,
    check_weakening_var,
    enumerate_terms,
    env_subst_here,
    env_subst_lift_kind,
    env_subst_lift_var,
    gen_pre_instance,
    gen_well_typed,
    lower_bound_at,
    make_insert_kind,
    rand_env,
    rand_wf_type,
    type_binding_count,
    _gen,
)
from .typecheck import check_kinding, infer_kind, try_infer_type


@dataclass
class SuiteResult:
    name: str
    instances: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def tap_line(self, number: int) -> str:
        status = "ok" if self.ok else "not ok"
        line = f"{status} {number} - {self.name} ({self.instances} instances)"
        if self.failures:
            line += f" [{len(self.failures)} failed, first: {self.failures[0]}]"
        return line


def _collect(
    name: str,
    seed: int,
    cases: int,
    instance_fn: Callable[[random.Random], bool | None],
) -> SuiteResult:
    """Run instance_fn until `cases` non-vacuous instances accumulate.

    instance_fn returns None for a vacuous draw, True/False otherwise.
    """
    rng = random.Random(f"{seed}:{name}")
    result = SuiteResult(name, 0)
    attempts = 0
    while result.instances < cases and attempts < cases * 20:
        attempts += 1
        verdict = instance_fn(rng)
        if verdict is None:
            continue
        result.instances += 1
        if not verdict:
            result.failures.append(f"attempt {attempts}")
    return result


def suite_weakening_kind(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 3)
        t, ty = _gen(rng, e, rng.randint(1, 7))
        x = rng.randint(0, type_binding_count(e))
        iw = make_insert_kind(rng, e, x, rng.randint(0, 2))
        if not iw.is_valid():
            return False
        return check_weakening(iw, t, ty)

    return _collect("weakening-kind", seed, cases, one)


def suite_weakening_var(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 3)
        t, ty = _gen(rng, e, rng.randint(1, 7))
        extra = rand_wf_type(rng, e, 3)
        return check_weakening_var(e, extra, t, ty)

    return _collect("weakening-var", seed, cases, one)


def suite_subst_term(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        env, _, inp = gen_pre_instance(rng.randrange(1 << 30))
        return check_subst_term_lemma(env, inp.index, inp.target, inp.substituend)

    return _collect("subst-term", seed, cases, one)


def suite_subst_typ(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 2)
        k = rng.randint(0, 2)
        t, _ = _gen(rng, ETVar(e, k), rng.randint(1, 6))
        repl = rand_wf_type(rng, e, 3)
        if not check_kinding(e, repl, k):
            return None
        return check_subst_typ_lemma(e, t, repl, k)

    return _collect("subst-typ", seed, cases, one)


def suite_narrowing(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 3)
        positions = [
            x
            for x in range(type_binding_count(e))
            if (k := get_kind(e, x)) is not None and k >= 1
        ]
        if not positions:
            return None
        x = rng.choice(positions)
        k = get_kind(e, x)
        assert k is not None
        nw = Narrow(x, e, lower_bound_at(e, x, rng.randrange(k)))
        if not nw.is_valid():
            return False
        t, ty = _gen(rng, e, rng.randint(1, 7))
        return check_narrowing(nw, t, ty)

    return _collect("narrowing", seed, cases, one)


def suite_kinding_transitive(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 3)
        ty = rand_wf_type(rng, e, 4)
        mk = infer_kind(e, ty)
        if mk is None:
            return False  # rand_wf_type output must be kindable in a wf env
        k = mk + rng.randint(0, 3)
        if not check_kinding(e, ty, k):
            return False
        return check_kinding(e, ty, k + rng.randint(0, 3))

    return _collect("kinding-transitive", seed, cases, one)


def suite_kinding_wf(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 3)
        ty = rand_wf_type(rng, e, 4)
        if infer_kind(e, ty) is None:
            return None
        return wf_env(e) and wf_typ(e, ty)

    return _collect("kinding-wf", seed, cases, one)


def suite_regularity(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        e = rand_env(rng, 3)
        t, ty = _gen(rng, e, rng.randint(1, 7))
        if try_infer_type(e, t) != ty:
            return False
        return infer_kind(e, ty) is not None

    return _collect("regularity", seed, cases, one)


def suite_env_subst(seed: int, cases: int) -> SuiteResult:
    def one(rng: random.Random) -> bool | None:
        base = rand_env(rng, 2)
        repl = rand_wf_type(rng, base, 3)
        mk = infer_kind(base, repl)
        if mk is None:
            return None
        es = env_subst_here(base, repl, mk + rng.randint(0, 1))
        for _ in range(rng.randint(0, 2)):
            if rng.random() < 0.5:
                es = env_subst_lift_var(es, rand_wf_type(rng, es.before, 3))
            else:
                es = env_subst_lift_kind(es, rng.randint(0, 2))
        if not es.is_valid():
            return False
        t, ty = _gen(rng, es.before, rng.randint(1, 6))
        return check_env_subst(es, t, ty)

    return _collect("env-subst", seed, cases, one)


def suite_neutral_tvar(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("neutral-tvar", 0)
    for k in (0, 1, 2):
        result.instances += 1
        if not check_neutral_tvar(k, 4, type_size=3, max_kind=2):
            result.failures.append(f"kind {k}")
    return result


def suite_multiset_order(seed: int, cases: int) -> SuiteResult:
    bags = [
        KindBag.from_elements(elems)
        for n in range(0, 5)
        for elems in itertools.combinations_with_replacement(range(4), n)
    ]
    result = SuiteResult("multiset-order", 0)
    for a in bags:
        for b in bags:
            result.instances += 1
            if multiset_lt(a, b) != dm_lt_oracle(a, b):
                result.failures.append(f"{a} vs {b}")
    return result


def _count_tvar(ty: Typ, x: int) -> int:
    match ty:
        case TVar(i):
            return 1 if i == x else 0
        case Arrow(a, b):
            return _count_tvar(a, x) + _count_tvar(b, x)
        case All(_, body):
            return _count_tvar(body, x + 1)
    raise TypeError(f"not a type: {ty!r}")


def suite_kinds_of_lemmas(seed: int, cases: int) -> list[SuiteResult]:
    kinded = SuiteResult("kinds-of-kinded", 0)
    shifted = SuiteResult("kinds-of-tshift", 0)
    substed = SuiteResult("kinds-of-tsubst", 0)
    subst_all = SuiteResult("kinds-of-tsubst-all", 0)
    rng = random.Random(f"{seed}:kinds-of")
    while kinded.instances < cases:
        e = rand_env(rng, 2)
        ty = rand_wf_type(rng, e, 5)
        mk = infer_kind(e, ty)
        if mk is None:
            continue
        k = mk + rng.randint(0, 1)
        kinded.instances += 1
        if not multiset_lt(kinds_of(ty), KindBag.singleton(k)):
            kinded.failures.append(str(ty))
        x = rng.randint(0, 3)
        shifted.instances += 1
        if kinds_of(tshift(x, ty)) != kinds_of(ty):
            shifted.failures.append(str(ty))
        # occurrence identity under substitution
        k0 = rng.randint(0, 2)
        u = rand_wf_type(rng, ETVar(e, k0), 4)
        repl = rand_wf_type(rng, e, 3)
        n = _count_tvar(u, 0)
        substed.instances += 1
        if kinds_of(tsubst(u, 0, repl)) != kinds_of(u) + mul_sum(n, kinds_of(repl)):
            substed.failures.append(f"{u} / {repl}")
        # strict decrease for well-kinded instantiation
        if check_kinding(e, repl, k0):
            subst_all.instances += 1
            if not multiset_lt(kinds_of(tsubst(u, 0, repl)), kinds_of(All(k0, u))):
                subst_all.failures.append(f"{u} / {repl}")
    return [kinded, shifted, substed, subst_all]


def suite_order_laws(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("order-laws", 0)
    rng = random.Random(f"{seed}:order-laws")
    env = ETVar(ETVar(EMPTY, 1), 0)
    types = [rand_wf_type(rng, env, rng.randint(1, 4)) for _ in range(24)]
    for a in types:
        result.instances += 1
        if type_order(a, a):
            result.failures.append(f"irreflexivity: {a}")
        for b in types:
            result.instances += 1
            if not type_order(a, Arrow(a, b)) or not type_order(b, Arrow(a, b)):
                result.failures.append("arrow comparison")
            if not type_order(a, b):
                continue
            for c in types:
                if type_order(b, c) and not type_order(a, c):
                    result.failures.append("transitivity")
    return result


def suite_hsubst_contract(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("hsubst-contract", 0)
    for i in range(cases):
        env, goal, inp = gen_pre_instance(seed * 1_000_003 + i)
        result.instances += 1
        try:
            hsubst_checked(env, goal, inp)
        except Exception as err:  # noqa: BLE001 - report any contract breach
            result.failures.append(f"seed {seed * 1_000_003 + i}: {err}")
    return result


def suite_normalize_oracle(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("normalize-oracle", 0)
    for i in range(cases):
        t, ty = gen_well_typed(seed * 7_919 + i, 10)
        result.instances += 1
        n, records = normalize_instrumented(t)
        if any(not r.decrease for r in records):
            result.failures.append(f"measure violation on seed {seed * 7_919 + i}")
        elif n != normalize_fuel(t):
            result.failures.append(f"oracle mismatch on seed {seed * 7_919 + i}")
        elif not is_normal(n):
            result.failures.append(f"not normal on seed {seed * 7_919 + i}")
        elif try_infer_type(EMPTY, n) != ty:
            result.failures.append(f"type changed on seed {seed * 7_919 + i}")
    return result


def suite_consistency(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("consistency", 0)
    for k in (0, 1, 2):
        result.instances += 1
        if enumerate_terms(EMPTY, All(k, TVar(0)), 4, type_size=3, max_kind=2):
            result.failures.append(f"kind {k} inhabited")
    probe = enumerate_terms(EVar(EMPTY, All(0, TVar(0))), All(0, TVar(0)), 2)
    result.instances += 1
    if Var(0) not in probe:
        result.failures.append("sanity probe missed the bound variable")
    return result


def suite_roundtrip(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("print-parse-roundtrip", 0)
    for i in range(cases):
        t, _ = gen_well_typed(seed * 104_729 + i, 9)
        result.instances += 1
        if parse_term(print_term(t)) != t:
            result.failures.append(f"seed {seed * 104_729 + i}")
    return result


def suite_generator(seed: int, cases: int) -> SuiteResult:
    result = SuiteResult("generator", 0)
    distinct = set()
    trials = max(cases, 100)
    for i in range(trials):
        t, ty = gen_well_typed(seed + i, 8)
        result.instances += 1
        if gen_well_typed(seed + i, 8) != (t, ty):
            result.failures.append("nondeterministic output")
        if try_infer_type(EMPTY, t) != ty:
            result.failures.append(f"ill-typed output at seed {seed + i}")
        if term_size(t) > 8:
            result.failures.append(f"budget exceeded at seed {seed + i}")
        distinct.add(t)
    if len(distinct) < min(100, trials // 10):
        result.failures.append(f"diversity floor missed: {len(distinct)} distinct")
    return result


def run_selftest(seed: int = 0, cases: int = 300) -> list[SuiteResult]:
    results: list[SuiteResult] = []
    results.append(suite_weakening_kind(seed, cases))
    results.append(suite_weakening_var(seed, cases))
    results.append(suite_subst_term(seed, cases))
    results.append(suite_subst_typ(seed, cases))
    results.append(suite_narrowing(seed, cases))
    results.append(suite_kinding_transitive(seed, cases))
    results.append(suite_kinding_wf(seed, cases))
    results.append(suite_regularity(seed, cases))
    results.append(suite_env_subst(seed, cases))
    results.append(suite_neutral_tvar(seed, cases))
    results.append(suite_multiset_order(seed, cases))
    results.extend(suite_kinds_of_lemmas(seed, max(min(cases, 500), 100)))
    results.append(suite_order_laws(seed, cases))
    results.append(suite_hsubst_contract(seed, min(cases, 300)))
    results.append(suite_normalize_oracle(seed, min(cases, 300)))
    results.append(suite_consistency(seed, cases))
    results.append(suite_roundtrip(seed, min(cases, 300)))
    results.append(suite_generator(seed, cases))
    return results


def format_tap(results: list[SuiteResult]) -> str:
    lines = [f"1..{len(results)}"]
    lines.extend(r.tap_line(i + 1) for i, r in enumerate(results))
    return "\n".join(lines)
