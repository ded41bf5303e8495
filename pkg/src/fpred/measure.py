"""Termination measures: multisets of kinds, type depth, term size, and the
orders built from them.

The strict multiset order is decided by comparing descending-sorted element
sequences lexicographically, which coincides with the Dershowitz-Manna
extension of > on naturals because the base order is total.  A brute-force
closure oracle (dm_lt_oracle) validates that on small bags.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

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
)


@dataclass(frozen=True, slots=True)
class KindBag:
    """Finite multiset of kinds in canonical form.

    counts is sorted by kind with strictly positive multiplicities, so
    structural equality is bag equality.
    """

    counts: tuple[tuple[Kind, int], ...] = ()

    @staticmethod
    def from_elements(elements) -> "KindBag":
        acc: dict[Kind, int] = {}
        for k in elements:
            acc[k] = acc.get(k, 0) + 1
        return KindBag(tuple(sorted(acc.items())))

    @staticmethod
    def singleton(k: Kind) -> "KindBag":
        return KindBag(((k, 1),))

    def __add__(self, other: "KindBag") -> "KindBag":
        acc = dict(self.counts)
        for k, m in other.counts:
            acc[k] = acc.get(k, 0) + m
        return KindBag(tuple(sorted(acc.items())))

    def scale(self, n: int) -> "KindBag":
        if n <= 0:
            return KindBag()
        return KindBag(tuple((k, m * n) for k, m in self.counts))

    def elements_desc(self) -> list[Kind]:
        out: list[Kind] = []
        for k, m in reversed(self.counts):
            out.extend([k] * m)
        return out

    def size(self) -> int:
        return sum(m for _, m in self.counts)

    def multiplicity(self, k: Kind) -> int:
        for kk, m in self.counts:
            if kk == k:
                return m
        return 0

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}:{m}" for k, m in self.counts) + "}"


EMPTY_BAG = KindBag()


def kinds_of(ty: Typ) -> KindBag:
    """Multiset of quantifier bounds appearing in a type."""
    match ty:
        case TVar(_):
            return EMPTY_BAG
        case Arrow(a, b):
            return kinds_of(a) + kinds_of(b)
        case All(k, body):
            return KindBag.singleton(k) + kinds_of(body)
    raise TypeError(f"not a type: {ty!r}")


def depth(ty: Typ) -> int:
    """Number of universal quantifiers and type variables in a type; >= 1."""
    match ty:
        case TVar(_):
            return 1
        case Arrow(a, b):
            return depth(a) + depth(b)
        case All(_, body):
            return 1 + depth(body)
    raise TypeError(f"not a type: {ty!r}")


def term_size(t: Term) -> int:
    match t:
        case Var(_):
            return 0
        case Abs(_, body):
            return 1 + term_size(body)
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
        case TAbs(_, body):
            return 1 + term_size(body)
        case TApp(f, _):
            return 1 + term_size(f)
    raise TypeError(f"not a term: {t!r}")


def mul_sum(n: int, bag: KindBag) -> KindBag:
    """n-fold bag sum: every multiplicity scaled by n."""
    return bag.scale(n)


def multiset_lt(a: KindBag, b: KindBag) -> bool:
    """Strict Dershowitz-Manna order on bags of naturals.

    Decided lexicographically on descending element sequences; running out of
    elements first means smaller.
    """
    xs = a.elements_desc()
    ys = b.elements_desc()
    for x, y in zip(xs, ys):
        if x != y:
            return x < y
    return len(xs) < len(ys)


def dm_lt_oracle(a: KindBag, b: KindBag) -> bool:
    """Brute-force DM order: remove a nonempty sub-bag of b, add any bag of
    strictly smaller elements, and land exactly on a.

    Enumerates every sub-bag of b; exact but exponential, test oracle only.
    """
    kinds = [k for k, _ in b.counts]
    ranges = [range(m + 1) for _, m in b.counts]
    for picks in itertools.product(*ranges):
        if not any(picks):
            continue  # removed sub-bag must be nonempty
        removed = [k for k, n in zip(kinds, picks) for _ in range(n)]
        rest = {k: m - n for (k, m), n in zip(b.counts, picks) if m - n > 0}
        if any(m > a.multiplicity(k) for k, m in rest.items()):
            continue  # b minus the removed sub-bag must survive into a
        added = [
            k for k, m in a.counts for _ in range(m - rest.get(k, 0))
        ]
        if all(any(y < x for x in removed) for y in added):
            return True
    return False


def ordtyp(a: Typ, b: Typ) -> bool:
    """Reflexive closure of the type order: equal or strictly below."""
    return a == b or type_order(a, b)


def type_order(a: Typ, b: Typ) -> bool:
    """Strict order on types: multiset of kinds first, then depth."""
    ka = kinds_of(a)
    kb = kinds_of(b)
    if multiset_lt(ka, kb):
        return True
    return ka == kb and depth(a) < depth(b)


def her_less(a: tuple[Typ, Term], b: tuple[Typ, Term]) -> bool:
    """Strict order on (substituted-variable type, target term) pairs.

    Lexicographic: type order on the first components; when they have equal
    bags and equal depths, strictly smaller target size.
    """
    ta, terma = a
    tb, termb = b
    if type_order(ta, tb):
        return True
    if kinds_of(ta) == kinds_of(tb) and depth(ta) == depth(tb):
        return term_size(terma) < term_size(termb)
    return False


@dataclass(frozen=True, slots=True)
class TypeMeasure:
    """The (bag of kinds, depth) measure of a type."""

    bag: KindBag
    depth: int

    @staticmethod
    def of_type(ty: Typ) -> "TypeMeasure":
        return TypeMeasure(kinds_of(ty), depth(ty))


@dataclass(frozen=True, slots=True)
class HerMeasure:
    """The full hereditary-substitution measure of a (type, target) pair."""

    ty: TypeMeasure
    tsize: int

    @staticmethod
    def of_pair(ty: Typ, target: Term) -> "HerMeasure":
        return HerMeasure(TypeMeasure.of_type(ty), term_size(target))
