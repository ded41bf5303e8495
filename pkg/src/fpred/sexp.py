"""Bit-exact s-expression serialization of types, terms, and environments."""

from __future__ import annotations

from .contexts import EMPTY, ETVar, EVar, Env
from .syntax import Abs, All, App, Arrow, TAbs, TApp, TVar, Term, Typ, Var


class SexpError(ValueError):
    pass


def type_to_sexp(ty: Typ) -> str:
    match ty:
        case TVar(i):
            return f"(tvar {i})"
        case Arrow(a, b):
            return f"(arrow {type_to_sexp(a)} {type_to_sexp(b)})"
        case All(k, body):
            return f"(all {k} {type_to_sexp(body)})"
    raise TypeError(f"not a type: {ty!r}")


def term_to_sexp(t: Term) -> str:
    match t:
        case Var(i):
            return f"(var {i})"
        case Abs(ty, body):
            return f"(abs {type_to_sexp(ty)} {term_to_sexp(body)})"
        case App(f, a):
            return f"(app {term_to_sexp(f)} {term_to_sexp(a)})"
        case TAbs(k, body):
            return f"(tabs {k} {term_to_sexp(body)})"
        case TApp(f, ty):
            return f"(tapp {term_to_sexp(f)} {type_to_sexp(ty)})"
    raise TypeError(f"not a term: {t!r}")


def env_to_sexp(e: Env) -> str:
    match e:
        case EVar(rest, ty):
            return f"(evar {env_to_sexp(rest)} {type_to_sexp(ty)})"
        case ETVar(rest, k):
            return f"(etvar {env_to_sexp(rest)} {k})"
        case _:
            return "(empty)"


def _tokenize(src: str) -> list[str]:
    return src.replace("(", " ( ").replace(")", " ) ").split()


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise SexpError("unexpected end of input")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _read(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise SexpError("missing closing parenthesis")
        return items, pos + 1
    if tok == ")":
        raise SexpError("unexpected closing parenthesis")
    return tok, pos + 1


def _parse_one(src: str):
    tokens = _tokenize(src)
    tree, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise SexpError("trailing input after expression")
    return tree

def _nat(atom) -> int:
    if not isinstance(atom, str) or not atom.isdigit():
        raise SexpError(f"expected a natural number, got {atom!r}")
    return int(atom)


def _tree_to_type(tree) -> Typ:
    if not isinstance(tree, list) or not tree:
        raise SexpError(f"expected a type form, got {tree!r}")
    head = tree[0]
    if head == "tvar" and len(tree) == 2:
        return TVar(_nat(tree[1]))
    if head == "arrow" and len(tree) == 3:
        return Arrow(_tree_to_type(tree[1]), _tree_to_type(tree[2]))
    if head == "all" and len(tree) == 3:
        return All(_nat(tree[1]), _tree_to_type(tree[2]))
    raise SexpError(f"bad type form: {tree!r}")


def _tree_to_term(tree) -> Term:
    if not isinstance(tree, list) or not tree:
        raise SexpError(f"expected a term form, got {tree!r}")
    head = tree[0]
    if head == "var" and len(tree) == 2:
        return Var(_nat(tree[1]))
    if head == "abs" and len(tree) == 3:
        return Abs(_tree_to_type(tree[1]), _tree_to_term(tree[2]))
    if head == "app" and len(tree) == 3:
        return App(_tree_to_term(tree[1]), _tree_to_term(tree[2]))
    if head == "tabs" and len(tree) == 3:
        return TAbs(_nat(tree[1]), _tree_to_term(tree[2]))
    if head == "tapp" and len(tree) == 3:
        return TApp(_tree_to_term(tree[1]), _tree_to_type(tree[2]))
    raise SexpError(f"bad term form: {tree!r}")


def _tree_to_env(tree) -> Env:
    if not isinstance(tree, list) or not tree:
        raise SexpError(f"expected an env form, got {tree!r}")
    head = tree[0]
    if head == "empty" and len(tree) == 1:
        return EMPTY
    if head == "evar" and len(tree) == 3:
        return EVar(_tree_to_env(tree[1]), _tree_to_type(tree[2]))
    if head == "etvar" and len(tree) == 3:
        return ETVar(_tree_to_env(tree[1]), _nat(tree[2]))
    raise SexpError(f"bad env form: {tree!r}")


def type_from_sexp(src: str) -> Typ:
    return _tree_to_type(_parse_one(src))


def term_from_sexp(src: str) -> Term:
    return _tree_to_term(_parse_one(src))


def env_from_sexp(src: str) -> Env:
    return _tree_to_env(_parse_one(src))
