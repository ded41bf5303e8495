"""Kinding with cumulativity and syntax-directed typing.

Kinding is decided by minimal-kind inference: the kind rules are monotone, so
a type checks at k exactly when its minimal kind is <= k.  A brute-force
derivation search over the three kinding rules is kept alongside as a
cross-validation oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .contexts import ETVar, EVar, Env, get_kind, get_var, wf_env, wf_typ
from .syntax import Abs, All, App, Arrow, Kind, TAbs, TApp, TVar, Term, Typ, Var, tsubst

Path = tuple[int, ...]


class ErrorKind(enum.Enum):
    UNBOUND_TERM_VAR = "UnboundTermVar"
    UNBOUND_TYPE_VAR = "UnboundTypeVar"
    NOT_AN_ARROW = "NotAnArrow"
    NOT_A_FORALL = "NotAForall"
    ARG_TYPE_MISMATCH = "ArgTypeMismatch"
    KIND_TOO_LARGE = "KindTooLarge"
    ILL_FORMED_ENV = "IllFormedEnv"


@dataclass
class TypingError(Exception):
    """Typing failure: which rule premise failed, where, and why.

    ``location`` is a path of child indices into the checked term
    (0 = left/only child, 1 = right child).
    """

    kind: ErrorKind
    location: Path = ()
    detail: str = ""

    def __str__(self) -> str:
        where = ".".join(map(str, self.location)) if self.location else "root"
        return f"{self.kind.value} at {where}: {self.detail}"


def infer_kind(e: Env, ty: Typ) -> Kind | None:
    """Minimal derivable kind of ty in e; None when no kind is derivable."""
    if not wf_env(e):
        return None
    return _min_kind(e, ty)


def _min_kind(e: Env, ty: Typ) -> Kind | None:
    match ty:
        case TVar(i):
            return get_kind(e, i)
        case Arrow(a, b):
            ka = _min_kind(e, a)
            kb = _min_kind(e, b)
            if ka is None or kb is None:
                return None
            return max(ka, kb)
        case All(k, body):
            kb = _min_kind(ETVar(e, k), body)
            if kb is None:
                return None
            return max(k + 1, kb)
    raise TypeError(f"not a type: {ty!r}")


def check_kinding(e: Env, ty: Typ, k: Kind) -> bool:
    """True iff ty is kindable at k (its minimal kind exists and is <= k)."""
    mk = infer_kind(e, ty)
    return mk is not None and mk <= k


@lru_cache(maxsize=None)
def kinding_search_oracle(e: Env, ty: Typ, k: Kind, bound: int) -> bool:
    """Relational kinding decided by exhaustive derivation search.

    True iff a derivation tree for "ty has kind k in e" exists with every
    intermediate kind <= bound.  Independent of infer_kind; test oracle only.
    """
    if k > bound:
        return False
    match ty:
        case TVar(i):
            k0 = get_kind(e, i)
            return wf_env(e) and k0 is not None and k0 <= k
        case Arrow(a, b):
            for ka in range(bound + 1):
                for kb in range(bound + 1):
                    if max(ka, kb) != k:
                        continue
                    if kinding_search_oracle(e, a, ka, bound) and kinding_search_oracle(
                        e, b, kb, bound
                    ):
                        return True
            return False
        case All(k0, body):
            for kb in range(bound + 1):
                if max(k0 + 1, kb) != k:
                    continue
                if kinding_search_oracle(ETVar(e, k0), body, kb, bound):
                    return True
            return False
    raise TypeError(f"not a type: {ty!r}")


def infer_type(e: Env, t: Term) -> Typ:
    """Type of t in e per the syntax-directed typing rules; raises TypingError.

    Environment well-formedness is checked once at entry; descending under an
    abstraction checks the annotation, which together is equivalent to the
    per-variable-leaf check of the relational rules.
    """
    if not wf_env(e):
        raise TypingError(ErrorKind.ILL_FORMED_ENV, (), "environment is ill-formed")
    return _infer(e, t, ())


def _infer(e: Env, t: Term, path: Path) -> Typ:
    match t:
        case Var(x):
            ty = get_var(e, x)
            if ty is None:
                raise TypingError(
                    ErrorKind.UNBOUND_TERM_VAR, path, f"term variable {x} is not bound"
                )
            return ty
        case Abs(annot, body):
            if not wf_typ(e, annot):
                raise TypingError(
                    ErrorKind.ILL_FORMED_ENV,
                    path,
                    "abstraction annotation mentions an unbound type variable",
                )
            cod = _infer(EVar(e, annot), body, path + (0,))
            return Arrow(annot, cod)
        case App(fn, arg):
            fty = _infer(e, fn, path + (0,))
            if not isinstance(fty, Arrow):
                raise TypingError(
                    ErrorKind.NOT_AN_ARROW, path, "applied term does not have an arrow type"
                )
            aty = _infer(e, arg, path + (1,))
            if aty != fty.dom:
                raise TypingError(
                    ErrorKind.ARG_TYPE_MISMATCH,
                    path,
                    "argument type does not match the arrow domain",
                )
            return fty.cod
        case TAbs(k, body):
            bty = _infer(ETVar(e, k), body, path + (0,))
            return All(k, bty)
        case TApp(fn, targ):
            fty = _infer(e, fn, path + (0,))
            if not isinstance(fty, All):
                raise TypingError(
                    ErrorKind.NOT_A_FORALL, path, "type-applied term is not universally typed"
                )
            mk = infer_kind(e, targ)
            if mk is None:
                raise TypingError(
                    ErrorKind.UNBOUND_TYPE_VAR,
                    path,
                    "type argument mentions an unbound type variable",
                )
            if mk > fty.bound:
                raise TypingError(
                    ErrorKind.KIND_TOO_LARGE,
                    path,
                    f"type argument has minimal kind {mk}, quantifier bound is {fty.bound}",
                )
            return tsubst(fty.body, 0, targ)
    raise TypeError(f"not a term: {t!r}")


def try_infer_type(e: Env, t: Term) -> Typ | None:
    """infer_type, with failure as None instead of an exception."""
    try:
        return infer_type(e, t)
    except TypingError:
        return None
