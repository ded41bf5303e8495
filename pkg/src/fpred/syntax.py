"""Core de Bruijn syntax: kinds, types, terms, and the shift/substitution operations.

Term variables and type variables live in two independent index spaces:
``Abs`` binds a term index, ``All``/``TAbs`` bind a type index, and
shifting one space never touches the other.
"""

from __future__ import annotations

from dataclasses import dataclass

# A kind is a universe level; plain non-negative int.
Kind = int


@dataclass(frozen=True, slots=True)
class TVar:
    index: int


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Typ"
    cod: "Typ"


@dataclass(frozen=True, slots=True)
class All:
    bound: Kind
    body: "Typ"


Typ = TVar | Arrow | All


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class Abs:
    annot: Typ
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class TAbs:
    bound: Kind
    body: "Term"


@dataclass(frozen=True, slots=True)
class TApp:
    fn: "Term"
    arg: Typ


Term = Var | Abs | App | TAbs | TApp


def tshift(cutoff: int, ty: Typ) -> Typ:
    """Increment every type-variable index >= cutoff by one."""
    match ty:
        case TVar(i):
            return TVar(i + 1) if i >= cutoff else ty
        case Arrow(a, b):
            return Arrow(tshift(cutoff, a), tshift(cutoff, b))
        case All(k, body):
            return All(k, tshift(cutoff + 1, body))
    raise TypeError(f"not a type: {ty!r}")


def tsubst(ty: Typ, x: int, repl: Typ) -> Typ:
    """Substitute repl for type variable x in ty, decrementing indices above x."""
    match ty:
        case TVar(i):
            if i < x:
                return ty
            if i == x:
                return repl
            return TVar(i - 1)
        case Arrow(a, b):
            return Arrow(tsubst(a, x, repl), tsubst(b, x, repl))
        case All(k, body):
            return All(k, tsubst(body, x + 1, tshift(0, repl)))
    raise TypeError(f"not a type: {ty!r}")


def shift(cutoff: int, t: Term) -> Term:
    """Increment every term-variable index >= cutoff by one.

    Only Abs bumps the cutoff; TAbs binds in the other index space.
    """
    match t:
        case Var(i):
            return Var(i + 1) if i >= cutoff else t
        case Abs(ty, body):
            return Abs(ty, shift(cutoff + 1, body))
        case App(f, a):
            return App(shift(cutoff, f), shift(cutoff, a))
        case TAbs(k, body):
            return TAbs(k, shift(cutoff, body))
        case TApp(f, ty):
            return TApp(shift(cutoff, f), ty)
    raise TypeError(f"not a term: {t!r}")


def shift_typ(cutoff: int, t: Term) -> Term:
    """Shift type-variable indices inside a term's embedded types."""
    match t:
        case Var(_):
            return t
        case Abs(ty, body):
            return Abs(tshift(cutoff, ty), shift_typ(cutoff, body))
        case App(f, a):
            return App(shift_typ(cutoff, f), shift_typ(cutoff, a))
        case TAbs(k, body):
            return TAbs(k, shift_typ(cutoff + 1, body))
        case TApp(f, ty):
            return TApp(shift_typ(cutoff, f), tshift(cutoff, ty))
    raise TypeError(f"not a term: {t!r}")


def subst(t: Term, x: int, u: Term) -> Term:
    """Capture-avoiding substitution of u for term variable x in t."""
    match t:
        case Var(y):
            if y < x:
                return t
            if y == x:
                return u
            return Var(y - 1)
        case Abs(ty, body):
            return Abs(ty, subst(body, x + 1, shift(0, u)))
        case App(f, a):
            return App(subst(f, x, u), subst(a, x, u))
        case TAbs(k, body):
            return TAbs(k, subst(body, x, shift_typ(0, u)))
        case TApp(f, ty):
            return TApp(subst(f, x, u), ty)
    raise TypeError(f"not a term: {t!r}")


def subst_typ(t: Term, x: int, ty: Typ) -> Term:
    """Substitute ty for type variable x throughout the types embedded in t."""
    match t:
        case Var(_):
            return t
        case Abs(annot, body):
            return Abs(tsubst(annot, x, ty), subst_typ(body, x, ty))
        case App(f, a):
            return App(subst_typ(f, x, ty), subst_typ(a, x, ty))
        case TAbs(k, body):
            return TAbs(k, subst_typ(body, x + 1, tshift(0, ty)))
        case TApp(f, targ):
            return TApp(subst_typ(f, x, ty), tsubst(targ, x, ty))
    raise TypeError(f"not a term: {t!r}")
