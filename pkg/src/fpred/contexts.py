"""Typing environments: interleaved term and type bindings with parallel indexing.

``get_var``/``get_kind`` index the two binding kinds independently; crossing a
type binding on the way to a term binding shifts the stored annotation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import All, Arrow, Kind, TVar, Typ, tshift


@dataclass(frozen=True, slots=True)
class Empty:
    pass


@dataclass(frozen=True, slots=True)
class EVar:
    rest: "Env"
    annot: Typ


@dataclass(frozen=True, slots=True)
class ETVar:
    rest: "Env"
    bound: Kind


Env = Empty | EVar | ETVar

EMPTY = Empty()


def get_kind(e: Env, x: int) -> Kind | None:
    """Kind of the x-th type binding, counting only type bindings."""
    match e:
        case Empty():
            return None
        case EVar(rest, _):
            return get_kind(rest, x)
        case ETVar(rest, k):
            return k if x == 0 else get_kind(rest, x - 1)
    raise TypeError(f"not an env: {e!r}")


def get_var(e: Env, x: int) -> Typ | None:
    """Type of the x-th term binding, shifted once per type binding crossed."""
    match e:
        case Empty():
            return None
        case ETVar(rest, _):
            inner = get_var(rest, x)
            return None if inner is None else tshift(0, inner)
        case EVar(rest, ty):
            return ty if x == 0 else get_var(rest, x - 1)
    raise TypeError(f"not an env: {e!r}")


def remove_var(e: Env, x: int) -> Env:
    """Delete the x-th term binding; identity when x is out of range."""
    match e:
        case Empty():
            return e
        case EVar(rest, ty):
            return rest if x == 0 else EVar(remove_var(rest, x - 1), ty)
        case ETVar(rest, k):
            return ETVar(remove_var(rest, x), k)
    raise TypeError(f"not an env: {e!r}")


def wf_typ(e: Env, ty: Typ) -> bool:
    """True iff every type variable in ty is bound in e."""
    match ty:
        case TVar(i):
            return get_kind(e, i) is not None
        case Arrow(a, b):
            return wf_typ(e, a) and wf_typ(e, b)
        case All(k, body):
            return wf_typ(ETVar(e, k), body)
    raise TypeError(f"not a type: {ty!r}")


def wf_env(e: Env) -> bool:
    """True iff every term-binding annotation is well-formed in its prefix."""
    match e:
        case Empty():
            return True
        case EVar(rest, ty):
            return wf_env(rest) and wf_typ(rest, ty)
        case ETVar(rest, _):
            return wf_env(rest)
    raise TypeError(f"not an env: {e!r}")


def term_binding_count(e: Env) -> int:
    match e:
        case Empty():
            return 0
        case EVar(rest, _):
            return 1 + term_binding_count(rest)
        case ETVar(rest, _):
            return term_binding_count(rest)
    raise TypeError(f"not an env: {e!r}")


def type_binding_count(e: Env) -> int:
    match e:
        case Empty():
            return 0
        case EVar(rest, _):
            return type_binding_count(rest)
        case ETVar(rest, _):
            return 1 + type_binding_count(rest)
    raise TypeError(f"not an env: {e!r}")
