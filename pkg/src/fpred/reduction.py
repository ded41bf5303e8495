"""Small-step beta reduction oracle and normal/neutral classification.

The oracle contracts the leftmost-outermost redex (including under binders)
and is deterministic; by confluence its normal forms are the normal forms of
the full nondeterministic reduction relation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .syntax import Abs, App, TAbs, TApp, Term, Var, subst, subst_typ

Path = tuple[int, ...]

DEFAULT_FUEL = 100_000


class RuleTag(enum.Enum):
    APP_ABS = "AppAbs"
    TAPP_TABS = "TappTabs"


class FuelExhausted(Exception):
    """The step bound was hit before a normal form was reached."""

    def __init__(self, fuel: int, last: Term):
        super().__init__(f"no normal form within {fuel} steps")
        self.fuel = fuel
        self.last = last


def step_with_path(t: Term) -> tuple[Path, RuleTag, Term] | None:
    """Contract the leftmost-outermost redex; None iff t is normal."""
    match t:
        case App(Abs(_, body), arg):
            return (), RuleTag.APP_ABS, subst(body, 0, arg)
        case TApp(TAbs(_, body), targ):
            return (), RuleTag.TAPP_TABS, subst_typ(body, 0, targ)
        case App(fn, arg):
            r = step_with_path(fn)
            if r is not None:
                path, tag, fn2 = r
                return (0,) + path, tag, App(fn2, arg)
            r = step_with_path(arg)
            if r is not None:
                path, tag, arg2 = r
                return (1,) + path, tag, App(fn, arg2)
            return None
        case TApp(fn, targ):
            r = step_with_path(fn)
            if r is not None:
                path, tag, fn2 = r
                return (0,) + path, tag, TApp(fn2, targ)
            return None
        case Abs(annot, body):
            r = step_with_path(body)
            if r is not None:
                path, tag, body2 = r
                return (0,) + path, tag, Abs(annot, body2)
            return None
        case TAbs(k, body):
            r = step_with_path(body)
            if r is not None:
                path, tag, body2 = r
                return (0,) + path, tag, TAbs(k, body2)
            return None
        case Var(_):
            return None
    raise TypeError(f"not a term: {t!r}")


def step(t: Term) -> Term | None:
    r = step_with_path(t)
    return None if r is None else r[2]


def normalize_fuel(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Iterate step until normal; raises FuelExhausted when the bound is hit."""
    remaining = fuel
    while True:
        nxt = step(t)
        if nxt is None:
            return t
        if remaining == 0:
            raise FuelExhausted(fuel, t)
        t = nxt
        remaining -= 1


def is_normal(t: Term) -> bool:
    match t:
        case Abs(_, body):
            return is_normal(body)
        case TAbs(_, body):
            return is_normal(body)
        case _:
            return is_neutral(t)


def is_neutral(t: Term) -> bool:
    match t:
        case Var(_):
            return True
        case App(fn, arg):
            return is_neutral(fn) and is_normal(arg)
        case TApp(fn, _):
            return is_neutral(fn)
        case _:
            return False


@dataclass(frozen=True)
class ReductionTrace:
    """A deterministic reduction run: initial term and one entry per step."""

    initial: Term
    steps: tuple[tuple[Path, RuleTag, Term], ...]

    @property
    def final(self) -> Term:
        return self.steps[-1][2] if self.steps else self.initial


def build_trace(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionTrace:
    """Run the oracle to a normal form, recording every contraction."""
    steps: list[tuple[Path, RuleTag, Term]] = []
    cur = t
    remaining = fuel
    while True:
        r = step_with_path(cur)
        if r is None:
            return ReductionTrace(t, tuple(steps))
        if remaining == 0:
            raise FuelExhausted(fuel, cur)
        steps.append(r)
        cur = r[2]
        remaining -= 1


def format_path(path: Path) -> str:
    return ".".join(map(str, path)) if path else "-"
