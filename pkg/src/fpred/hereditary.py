"""Hereditary substitution and the normalizer built on it.

hsubst substitutes a normal term into a normal term and eagerly re-normalizes
any beta redex it creates; the hereditary call in the application case runs at
a strictly smaller type, which is what makes the recursion terminate.  The
checked variants validate the semantic pre/postconditions at runtime,
including reachability through the independent reduction oracle; the
instrumented variants record the termination measure at every recursive call.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contexts import Env, get_var, remove_var
from .measure import depth, her_less, kinds_of, ordtyp, term_size, KindBag
from .reduction import DEFAULT_FUEL, FuelExhausted, is_normal, normalize_fuel
from .syntax import (
    Abs,
    App,
    TAbs,
    TApp,
    Term,
    Typ,
    Var,
    shift,
    shift_typ,
    subst,
    subst_typ,
    tshift,
)
from .typecheck import TypingError, infer_type


@dataclass(frozen=True, slots=True)
class HsubstInput:
    """Raw inputs of hereditary substitution.

    var_type is the type of the substituted variable; target is the term
    substituted into; substituend replaces variable `index` of target.
    """

    var_type: Typ
    target: Term
    substituend: Term
    index: int


@dataclass(frozen=True, slots=True)
class CallRecord:
    """One recursive hsubst call: measure of the child input and whether it
    strictly decreased below its parent."""

    level: int
    bag: KindBag
    tydepth: int
    tsize: int
    decrease: bool

    def format(self) -> str:
        dec = "yes" if self.decrease else "no"
        return (
            f"CALL depth={self.level} bag={self.bag} "
            f"tydepth={self.tydepth} tsize={self.tsize} DECREASE={dec}"
        )


class InternalInvariantViolation(Exception):
    """The termination measure failed to decrease at a recursive call."""


class CheckError(Exception):
    """A checked-run contract was violated; subclasses name the clause."""


class PreViolated(CheckError):
    pass


class PostNotNormal(CheckError):
    pass


class PostTypeMismatch(CheckError):
    pass


class PostNotReachable(CheckError):
    pass


class PostOrdtypViolated(CheckError):
    pass


def is_abs(t: Term) -> bool:
    """True exactly for term and type abstractions."""
    return isinstance(t, (Abs, TAbs))


def _hs(
    var_type: Typ,
    target: Term,
    u: Term,
    x: int,
    records: list[CallRecord] | None,
    level: int,
    strict: bool,
) -> Term:
    def recurse(vt: Typ, tgt: Term, u2: Term, x2: int) -> Term:
        if records is not None:
            dec = her_less((vt, tgt), (var_type, target))
            records.append(
                CallRecord(level + 1, kinds_of(vt), depth(vt), term_size(tgt), dec)
            )
            if strict and not dec:
                raise InternalInvariantViolation(
                    f"measure did not decrease at recursion level {level + 1}"
                )
        return _hs(vt, tgt, u2, x2, records, level + 1, strict)

    match target:
        case Var(i):
            if i < x:
                return target
            if i == x:
                return u
            return Var(i - 1)
        case Abs(annot, body):
            return Abs(annot, recurse(var_type, body, shift(0, u), x + 1))
        case TAbs(k, body):
            return TAbs(k, recurse(tshift(0, var_type), body, shift_typ(0, u), x))
        case TApp(fn, targ):
            r = recurse(var_type, fn, u, x)
            if isinstance(r, TAbs):
                return subst_typ(r.body, 0, targ)
            return TApp(r, targ)
        case App(t1, t2):
            # the order is observable through instrumentation: argument first
            r2 = recurse(var_type, t2, u, x)
            r1 = recurse(var_type, t1, u, x)
            if isinstance(r1, Abs):
                # hereditary call at the smaller type annotating the abstraction
                return recurse(r1.annot, r1.body, r2, 0)
            return App(r1, r2)
    raise TypeError(f"not a term: {target!r}")


def hsubst(inp: HsubstInput) -> Term:
    """Hereditary substitution on raw inputs, no runtime checking."""
    return _hs(inp.var_type, inp.target, inp.substituend, inp.index, None, 0, False)


def hsubst_instrumented(
    inp: HsubstInput, strict: bool = False
) -> tuple[Term, list[CallRecord]]:
    """hsubst recording the measure at every recursive call.

    With strict=True a non-decreasing call raises InternalInvariantViolation.
    """
    records: list[CallRecord] = []
    r = _hs(inp.var_type, inp.target, inp.substituend, inp.index, records, 0, strict)
    return r, records


def precondition_failure(e: Env, goal: Typ, inp: HsubstInput) -> str | None:
    """Why the semantic precondition fails for (e, goal), or None if it holds."""
    bound = get_var(e, inp.index)
    if bound != inp.var_type:
        return f"environment does not bind variable {inp.index} at the given type"
    try:
        tty = infer_type(e, inp.target)
    except TypingError as err:
        return f"target is ill-typed: {err}"
    if tty != goal:
        return "target does not have the goal type"
    if not is_normal(inp.target):
        return "target is not in normal form"
    e2 = remove_var(e, inp.index)
    try:
        uty = infer_type(e2, inp.substituend)
    except TypingError as err:
        return f"substituend is ill-typed: {err}"
    if uty != inp.var_type:
        return "substituend does not have the substituted variable's type"
    if not is_normal(inp.substituend):
        return "substituend is not in normal form"
    return None


def precondition_holds(e: Env, goal: Typ, inp: HsubstInput) -> bool:
    return precondition_failure(e, goal, inp) is None


def postcondition_failure(
    e: Env, goal: Typ, inp: HsubstInput, result: Term, fuel: int = DEFAULT_FUEL
) -> CheckError | None:
    """Check the result against the postcondition; None when everything holds."""
    if not is_normal(result):
        return PostNotNormal("result is not in normal form")
    e2 = remove_var(e, inp.index)
    try:
        rty = infer_type(e2, result)
    except TypingError as err:
        return PostTypeMismatch(f"result is ill-typed: {err}")
    if rty != goal:
        return PostTypeMismatch("result does not have the goal type")
    plain = subst(inp.target, inp.index, inp.substituend)
    try:
        nf = normalize_fuel(plain, fuel)
    except FuelExhausted:
        return PostNotReachable("oracle ran out of fuel on the plain substitution")
    if nf != result:
        return PostNotReachable("result differs from the oracle normal form")
    if not is_abs(inp.target) and is_abs(result) and not ordtyp(goal, inp.var_type):
        return PostOrdtypViolated(
            "abstraction appeared although the goal type is not below the variable type"
        )
    return None


def postcondition_holds(
    e: Env, goal: Typ, inp: HsubstInput, result: Term, fuel: int = DEFAULT_FUEL
) -> bool:
    return postcondition_failure(e, goal, inp, result, fuel) is None


def hsubst_checked(
    e: Env, goal: Typ, inp: HsubstInput, fuel: int = DEFAULT_FUEL
) -> Term:
    """hsubst with the full contract enforced.

    Raises PreViolated / InternalInvariantViolation / Post* on failure.
    """
    reason = precondition_failure(e, goal, inp)
    if reason is not None:
        raise PreViolated(reason)
    result, _ = hsubst_instrumented(inp, strict=True)
    err = postcondition_failure(e, goal, inp, result, fuel)
    if err is not None:
        raise err
    return result


def _norm(t: Term, records: list[CallRecord] | None, strict: bool) -> Term:
    match t:
        case Var(_):
            return t
        case Abs(annot, body):
            return Abs(annot, _norm(body, records, strict))
        case App(t1, t2):
            n2 = _norm(t2, records, strict)
            n1 = _norm(t1, records, strict)
            if isinstance(n1, Abs):
                return _hs(n1.annot, n1.body, n2, 0, records, 0, strict)
            return App(n1, n2)
        case TAbs(k, body):
            return TAbs(k, _norm(body, records, strict))
        case TApp(fn, targ):
            n = _norm(fn, records, strict)
            if isinstance(n, TAbs):
                return subst_typ(n.body, 0, targ)
            return TApp(n, targ)
    raise TypeError(f"not a term: {t!r}")


def normalize(t: Term) -> Term:
    """Normal form of t by hereditary substitution (t should be well-typed)."""
    return _norm(t, None, False)


def normalize_instrumented(
    t: Term, strict: bool = False
) -> tuple[Term, list[CallRecord]]:
    """normalize recording measures of every hsubst recursion it triggers."""
    records: list[CallRecord] = []
    n = _norm(t, records, strict)
    return n, records


def normalize_checked(e: Env, goal: Typ, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """normalize with the full contract enforced against the oracle."""
    try:
        tty = infer_type(e, t)
    except TypingError as err:
        raise PreViolated(f"input is ill-typed: {err}") from err
    if tty != goal:
        raise PreViolated("input does not have the goal type")
    n, _ = normalize_instrumented(t, strict=True)
    if not is_normal(n):
        raise PostNotNormal("result is not in normal form")
    try:
        nty = infer_type(e, n)
    except TypingError as err:
        raise PostTypeMismatch(f"result is ill-typed: {err}") from err
    if nty != goal:
        raise PostTypeMismatch("result does not have the goal type")
    try:
        nf = normalize_fuel(t, fuel)
    except FuelExhausted as err:
        raise PostNotReachable("oracle ran out of fuel") from err
    if nf != n:
        raise PostNotReachable("result differs from the oracle normal form")
    return n
