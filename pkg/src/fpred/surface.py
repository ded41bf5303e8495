"""Surface syntax: tokenizer, parser with source spans, and pretty-printer.

Surface binders are named; elaboration resolves names to parallel de Bruijn
indices (separate term and type scopes, innermost binder = 0) and is the only
place names exist.  Files may begin with context declarations::

    assume x : T      -- a term binding
    assume X :* k     -- a type binding at kind k

Comments run from '--' to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .contexts import EMPTY, ETVar, EVar, Env
from .syntax import Abs, All, App, Arrow, Kind, TAbs, TApp, TVar, Term, Typ, Var

Path = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class SourceSpan:
    start: tuple[int, int]
    end: tuple[int, int]

    def __str__(self) -> str:
        (l1, c1), (l2, c2) = self.start, self.end
        return f"{l1}:{c1}-{l2}:{c2}"


@dataclass
class ParseError(Exception):
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span}: {self.message}"


@dataclass(frozen=True)
class SurfaceDecl:
    """A context declaration: a named term or type binding."""

    name: str
    body: Typ | Kind
    span: SourceSpan


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan((self.line, self.col), (self.line, self.col + len(self.text)))


_KEYWORDS = {"forall", "assume"}
_PUNCT = {"(": "lparen", ")": "rparen", "[": "lbracket", "]": "rbracket", ".": "dot"}


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c == "-" and i + 1 < n and src[i + 1] == "-":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_col = col
        if c == "-" and i + 1 < n and src[i + 1] == ">":
            tokens.append(Token("arrow", "->", line, start_col))
            i += 2
            col += 2
            continue
        if c == "/" and i + 1 < n and src[i + 1] == "\\":
            tokens.append(Token("tlambda", "/\\", line, start_col))
            i += 2
            col += 2
            continue
        if c == "\\":
            tokens.append(Token("lambda", "\\", line, start_col))
            i += 1
            col += 1
            continue
        if c == ":":
            if i + 1 < n and src[i + 1] == "*":
                tokens.append(Token("colonstar", ":*", line, start_col))
                i += 2
                col += 2
            else:
                tokens.append(Token("colon", ":", line, start_col))
                i += 1
                col += 1
            continue
        if c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, line, start_col))
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(Token("nat", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            text = src[i:j]
            kind = text if text in _KEYWORDS else "ident"
            tokens.append(Token(kind, text, line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(
            f"unexpected character {c!r}",
            SourceSpan((line, start_col), (line, start_col + 1)),
        )
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class _SpanTree:
    span: SourceSpan
    children: tuple["_SpanTree", ...]


def _spans_by_path(tree: _SpanTree) -> dict[Path, SourceSpan]:
    out: dict[Path, SourceSpan] = {}

    def walk(node: _SpanTree, path: Path) -> None:
        out[path] = node.span
        for i, child in enumerate(node.children):
            walk(child, path + (i,))

    walk(tree, ())
    return out


@dataclass
class Program:
    """A parsed source file: declared context, term, and naming/span data."""

    env: Env
    term: Term
    spans: dict[Path, SourceSpan]
    term_names: list[str]  # by de Bruijn index, so index 0 is the last assume
    type_names: list[str]
    decls: list[SurfaceDecl] = field(default_factory=list)


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, got {tok.text or 'end of input'!r}", tok.span)
        return self.next()

    def nat(self) -> int:
        return int(self.expect("nat", "a kind (natural number)").text)

    # -- types ------------------------------------------------------------

    def type_(self, tscope: list[str]) -> Typ:
        tok = self.peek()
        if tok.kind == "forall":
            self.next()
            name = self.expect("ident", "a type variable name").text
            self.expect("colon", "':'")
            k = self.nat()
            self.expect("dot", "'.'")
            tscope.append(name)
            body = self.type_(tscope)
            tscope.pop()
            return All(k, body)
        return self.arrty(tscope)

    def arrty(self, tscope: list[str]) -> Typ:
        left = self.aty(tscope)
        if self.peek().kind == "arrow":
            self.next()
            right = self.type_(tscope)
            return Arrow(left, right)
        return left

    def aty(self, tscope: list[str]) -> Typ:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return TVar(self._resolve(tok, tscope, "type"))
        if tok.kind == "lparen":
            self.next()
            ty = self.type_(tscope)
            self.expect("rparen", "')'")
            return ty
        raise ParseError(f"expected a type, got {tok.text or 'end of input'!r}", tok.span)

    def _resolve(self, tok: Token, scope: list[str], what: str) -> int:
        for i, name in enumerate(reversed(scope)):
            if name == tok.text:
                return i
        raise ParseError(f"unbound {what} variable {tok.text!r}", tok.span)

    # -- terms ------------------------------------------------------------

    def term(self, vscope: list[str], tscope: list[str]) -> tuple[Term, _SpanTree]:
        tok = self.peek()
        if tok.kind == "lambda":
            self.next()
            name = self.expect("ident", "a variable name").text
            self.expect("colon", "':'")
            annot = self.type_(tscope)
            self.expect("dot", "'.'")
            vscope.append(name)
            body, bspan = self.term(vscope, tscope)
            vscope.pop()
            span = SourceSpan(tok.span.start, bspan.span.end)
            return Abs(annot, body), _SpanTree(span, (bspan,))
        if tok.kind == "tlambda":
            self.next()
            name = self.expect("ident", "a type variable name").text
            self.expect("colon", "':'")
            k = self.nat()
            self.expect("dot", "'.'")
            tscope.append(name)
            body, bspan = self.term(vscope, tscope)
            tscope.pop()
            span = SourceSpan(tok.span.start, bspan.span.end)
            return TAbs(k, body), _SpanTree(span, (bspan,))
        return self.appt(vscope, tscope)

    def appt(self, vscope: list[str], tscope: list[str]) -> tuple[Term, _SpanTree]:
        node, nspan = self.atm(vscope, tscope)
        while True:
            tok = self.peek()
            if tok.kind == "lbracket":
                self.next()
                ty = self.type_(tscope)
                end = self.expect("rbracket", "']'")
                span = SourceSpan(nspan.span.start, end.span.end)
                node, nspan = TApp(node, ty), _SpanTree(span, (nspan,))
            elif tok.kind in ("ident", "lparen"):
                arg, aspan = self.atm(vscope, tscope)
                span = SourceSpan(nspan.span.start, aspan.span.end)
                node, nspan = App(node, arg), _SpanTree(span, (nspan, aspan))
            else:
                return node, nspan

    def atm(self, vscope: list[str], tscope: list[str]) -> tuple[Term, _SpanTree]:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return Var(self._resolve(tok, vscope, "term")), _SpanTree(tok.span, ())
        if tok.kind == "lparen":
            start = self.next()
            t, tspan = self.term(vscope, tscope)
            end = self.expect("rparen", "')'")
            return t, _SpanTree(SourceSpan(start.span.start, end.span.end), tspan.children)
        raise ParseError(f"expected a term, got {tok.text or 'end of input'!r}", tok.span)

    # -- programs ---------------------------------------------------------

    def program(self) -> Program:
        env: Env = EMPTY
        vscope: list[str] = []
        tscope: list[str] = []
        decls: list[SurfaceDecl] = []
        while self.peek().kind == "assume":
            start = self.next()
            name = self.expect("ident", "a name").text
            sep = self.peek()
            if sep.kind == "colonstar":
                self.next()
                k = self.nat()
                env = ETVar(env, k)
                tscope.append(name)
                decls.append(SurfaceDecl(name, k, SourceSpan(start.span.start, sep.span.end)))
            elif sep.kind == "colon":
                self.next()
                ty = self.type_(tscope)
                env = EVar(env, ty)
                vscope.append(name)
                decls.append(SurfaceDecl(name, ty, SourceSpan(start.span.start, sep.span.end)))
            else:
                raise ParseError("expected ':' or ':*' after assume", sep.span)
        t, tspan = self.term(vscope, tscope)
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected input after term: {tok.text!r}", tok.span)
        return Program(
            env,
            t,
            _spans_by_path(tspan),
            list(reversed(vscope)),
            list(reversed(tscope)),
            decls,
        )


def parse_type(src: str, type_names: list[str] | None = None) -> Typ:
    """Parse a type; type_names bind free variables, index 0 innermost."""
    p = _Parser(src)
    ty = p.type_(list(reversed(type_names or [])))
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected input after type: {tok.text!r}", tok.span)
    return ty


def parse_term(
    src: str,
    term_names: list[str] | None = None,
    type_names: list[str] | None = None,
) -> Term:
    p = _Parser(src)
    t, _ = p.term(list(reversed(term_names or [])), list(reversed(type_names or [])))
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected input after term: {tok.text!r}", tok.span)
    return t


def parse_program(src: str) -> Program:
    return _Parser(src).program()


# -- printing --------------------------------------------------------------


def _fresh(prefix: str, start: int, avoid: set[str]) -> str:
    n = start
    while f"{prefix}{n}" in avoid:
        n += 1
    return f"{prefix}{n}"


def _resolve_name(i: int, stack: list[str], hints: list[str], fallback: str) -> str:
    if i < len(stack):
        return stack[len(stack) - 1 - i]
    j = i - len(stack)
    if j < len(hints):
        return hints[j]
    return f"{fallback}{j}"


def _ends_open_all(ty: Typ) -> bool:
    # does the printed form end inside an unparenthesized forall body?
    match ty:
        case All(_, _):
            return True
        case Arrow(_, cod):
            return _ends_open_all(cod)
        case _:
            return False


def _ptype(ty: Typ, tstack: list[str], thints: list[str], avoid: set[str]) -> str:
    match ty:
        case TVar(i):
            return _resolve_name(i, tstack, thints, "FX")
        case Arrow(dom, cod):
            left = _ptype(dom, tstack, thints, avoid)
            if not isinstance(dom, TVar):
                left = f"({left})"
            right = _ptype(cod, tstack, thints, avoid)
            return f"{left} -> {right}"
        case All(k, body):
            name = _fresh("Y", len(tstack), avoid)
            tstack.append(name)
            inner = _ptype(body, tstack, thints, avoid | {name})
            tstack.pop()
            return f"forall {name}:{k}. {inner}"
    raise TypeError(f"not a type: {ty!r}")


def _pterm(
    t: Term,
    vstack: list[str],
    tstack: list[str],
    vhints: list[str],
    thints: list[str],
    avoid: set[str],
) -> str:
    match t:
        case Var(i):
            return _resolve_name(i, vstack, vhints, "fx")
        case Abs(annot, body):
            name = _fresh("x", len(vstack), avoid)
            tystr = _ptype(annot, tstack, thints, avoid)
            vstack.append(name)
            inner = _pterm(body, vstack, tstack, vhints, thints, avoid | {name})
            vstack.pop()
            if _ends_open_all(annot):
                return f"\\{name}: {tystr} . {inner}"
            return f"\\{name}:{tystr}. {inner}"
        case TAbs(k, body):
            name = _fresh("X", len(tstack), avoid)
            tstack.append(name)
            inner = _pterm(body, vstack, tstack, vhints, thints, avoid | {name})
            tstack.pop()
            return f"/\\{name}:{k}. {inner}"
        case App(fn, arg):
            left = _pterm(fn, vstack, tstack, vhints, thints, avoid)
            if isinstance(fn, (Abs, TAbs)):
                left = f"({left})"
            right = _pterm(arg, vstack, tstack, vhints, thints, avoid)
            if not isinstance(arg, Var):
                right = f"({right})"
            return f"{left} {right}"
        case TApp(fn, targ):
            left = _pterm(fn, vstack, tstack, vhints, thints, avoid)
            if isinstance(fn, (Abs, TAbs)):
                left = f"({left})"
            return f"{left} [{_ptype(targ, tstack, thints, avoid)}]"
    raise TypeError(f"not a term: {t!r}")


def print_type(ty: Typ, type_names: list[str] | None = None) -> str:
    """Render a type; type_names name free variables by de Bruijn index."""
    thints = type_names or []
    return _ptype(ty, [], thints, set(thints))


def print_term(
    t: Term,
    term_names: list[str] | None = None,
    type_names: list[str] | None = None,
) -> str:
    """Render a term with generated binder names; parse(print(t)) == t."""
    vhints = term_names or []
    thints = type_names or []
    return _pterm(t, [], [], vhints, thints, set(vhints) | set(thints))
