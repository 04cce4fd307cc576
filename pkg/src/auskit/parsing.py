# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Algebra files and the module and morphism expression languages.

An algebra file is line oriented::

    field 2
    vertices a b
    arrow alpha a a
    arrow beta b a
    relation alpha*alpha
    module M = taum(S(a))

In a relation `alpha*beta` is beta followed by alpha, and `x^3` is x*x*x.
Module expressions combine P(v), Q(v), S(v), tau, taum, rad, soc, top, ker,
coker, im, direct sums `++`, powers `^n`, names and indexed families such as
kP(2) or U(3). Morphism expressions are hom(X, Y)[k], projcover(X),
soclein(X), radin(X) and arsplit(X), composed with `*`.
"""

import logging
import re
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NoReturn

from .algebra import (
    Algebra,
    AlgebraPresentation,
    Arrow,
    Path,
    Quiver,
    Relation,
    injective,
    projective,
    simple,
)
from .ar import proj_cover, tau, tau_minus
from .errors import (
    BadRelationError,
    ParseError,
    PreconditionError,
    UnknownIdentifierError,
)
from .factor import min_right_almost_split
from .ffmat import check_field
from .kronecker import KroneckerCatalog
from .rep import (
    Morphism,
    Rep,
    cokernel,
    direct_sum,
    hom,
    image,
    kernel,
    power,
    quotient,
    radical,
    socle,
    top,
)

if TYPE_CHECKING:
    from collections.abc import Mapping

logger = logging.getLogger(__name__)

TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>\+\+|[-+*^(),\[\]=]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str, line: int | None = None) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            column = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            msg = f"Unexpected character {text[column - 1]!r}"
            raise ParseError(msg, line, column)
        kind = m.lastgroup or "op"
        tokens.append(Token(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token], line: int | None) -> None:
        self.tokens = tokens
        self.line = line
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.current
        self.pos = min(self.pos + 1, len(self.tokens) - 1)
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.current.kind != "op" or self.current.text != text:
            self.fail(f"Expected {text!r}")
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        if self.current.kind != kind:
            self.fail(f"Expected {'a number' if kind == 'int' else 'a name'}")
        return self.advance()

    def finish(self) -> None:
        if self.current.kind != "end":
            self.fail("Unexpected trailing input")

    def fail(
        self, msg: str, token: Token | None = None, error: type[ParseError] = ParseError
    ) -> NoReturn:
        token = token or self.current
        shown = token.text or "end of input"
        raise error(f"{msg}, found {shown!r}", self.line, token.column)


@dataclass(frozen=True)
class ModuleDefinition:
    name: str
    expression: str
    line: int


@dataclass(frozen=True)
class AlgebraDocument:
    presentation: AlgebraPresentation
    modules: tuple[ModuleDefinition, ...] = ()


@dataclass
class _Draft:
    p: int | None = None
    vertices: list[str] = field(default_factory=list[str])
    arrows: list[Arrow] = field(default_factory=list[Arrow])
    relations: list[tuple[int, list[tuple[int, Path]]]] = field(
        default_factory=list[tuple[int, list[tuple[int, Path]]]]
    )
    modules: list[ModuleDefinition] = field(default_factory=list[ModuleDefinition])


def parse_algebra_document(text: str) -> AlgebraDocument:
    draft = _Draft()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        keyword, _, rest = line.strip().partition(" ")
        # pad so that token columns count from the start of the line
        rest = " " * (line.index(keyword) + len(keyword) + 1) + rest
        match keyword:
            case "field":
                _field_line(draft, rest, number)
            case "vertices":
                _vertices_line(draft, rest, number)
            case "arrow":
                _arrow_line(draft, rest, number)
            case "relation":
                draft.relations.append((number, _relation_terms(draft, rest, number)))
            case "module":
                _module_line(draft, rest, number)
            case _:
                msg = f"Unknown directive {keyword!r}"
                raise ParseError(msg, number, raw.index(keyword) + 1)
    if draft.p is None:
        msg = "Missing 'field' line"
        raise ParseError(msg)
    if not draft.vertices:
        msg = "Missing 'vertices' line"
        raise ParseError(msg)
    relations = [
        Relation(tuple((c % draft.p, path) for c, path in terms if c % draft.p))
        for _, terms in draft.relations
    ]
    quiver = Quiver(tuple(draft.vertices), tuple(draft.arrows))
    pres = AlgebraPresentation(draft.p, quiver, tuple(r for r in relations if r.terms))
    logger.debug("parsed algebra over F_%d with %d relations", draft.p, len(pres.relations))
    return AlgebraDocument(pres, tuple(draft.modules))


def parse_algebra_file(text: str) -> AlgebraPresentation:
    return parse_algebra_document(text).presentation


def _field_line(draft: _Draft, rest: str, number: int) -> None:
    tokens = _Cursor(tokenize(rest, number), number)
    token = tokens.expect_kind("int")
    tokens.finish()
    try:
        draft.p = check_field(int(token.text))
    except PreconditionError as e:
        raise ParseError(e.args[0], number, token.column) from None


def _vertices_line(draft: _Draft, rest: str, number: int) -> None:
    tokens = _Cursor(tokenize(rest, number), number)
    while tokens.current.kind != "end":
        token = tokens.expect_kind("name")
        if token.text in draft.vertices:
            tokens.fail("Duplicate vertex", token, BadRelationError)
        draft.vertices.append(token.text)


def _arrow_line(draft: _Draft, rest: str, number: int) -> None:
    tokens = _Cursor(tokenize(rest, number), number)
    name = tokens.expect_kind("name")
    ends = [tokens.expect_kind("name"), tokens.expect_kind("name")]
    tokens.finish()
    if name.text in draft.vertices or any(a.name == name.text for a in draft.arrows):
        tokens.fail("Name already in use", name, BadRelationError)
    for end in ends:
        if end.text not in draft.vertices:
            tokens.fail("Unknown vertex", end, UnknownIdentifierError)
    draft.arrows.append(Arrow(name.text, ends[0].text, ends[1].text))


def _relation_terms(draft: _Draft, rest: str, number: int) -> list[tuple[int, Path]]:
    tokens = _Cursor(tokenize(rest, number), number)
    terms: list[tuple[int, Path]] = []
    sign = -1 if tokens.accept("-") else 1
    while True:
        start = tokens.current
        coef = int(tokens.advance().text) if tokens.current.kind == "int" else 1
        factors: list[Arrow] = []
        while True:
            token = tokens.expect_kind("name")
            arrow = next((a for a in draft.arrows if a.name == token.text), None)
            if arrow is None:
                tokens.fail("Unknown arrow", token, UnknownIdentifierError)
            times = int(tokens.expect_kind("int").text) if tokens.accept("^") else 1
            factors += [arrow] * times
            if not tokens.accept("*"):
                break
        path = _compose(factors[::-1], tokens, start)
        if len(path) < 2:
            tokens.fail("Relations need paths of length at least two", start, BadRelationError)
        if terms and (path.source, path.target) != (terms[0][1].source, terms[0][1].target):
            tokens.fail("Paths of a relation must be parallel", start, BadRelationError)
        terms.append((sign * coef, path))
        if tokens.accept("+"):
            sign = 1
        elif tokens.accept("-"):
            sign = -1
        else:
            break
    tokens.finish()
    return terms


def _compose(arrows: list[Arrow], tokens: _Cursor, start: Token) -> Path:
    path = Path.arrow(arrows[0])
    for a in arrows[1:]:
        if path.target != a.source:
            msg = f"Arrow {a.name} does not start where the path ends"
            tokens.fail(msg, start, BadRelationError)
        path = Path(path.source, a.target, (*path.arrows, a.name))
    return path


def _module_line(draft: _Draft, rest: str, number: int) -> None:
    name, eq, expression = rest.partition("=")
    name = name.strip()
    if not eq or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
        msg = "Expected 'module NAME = EXPRESSION'"
        raise ParseError(msg, number, 1)
    if any(m.name == name for m in draft.modules):
        msg = f"Module {name!r} is defined twice"
        raise ParseError(msg, number, 1)
    draft.modules.append(ModuleDefinition(name, expression.strip(), number))


Family = Callable[[int], Rep]


class Expressions:
    """Evaluates module and morphism expressions over one algebra."""

    def __init__(self, algebra: Algebra, names: "Mapping[str, Rep] | None" = None) -> None:
        self.algebra = algebra
        self.names: dict[str, Rep] = dict(names or {})

    def define(self, definitions: "tuple[ModuleDefinition, ...]") -> None:
        for d in definitions:
            self.names[d.name] = self.module(d.expression, d.line)

    def module(self, text: str, line: int | None = None) -> Rep:
        tokens = _Cursor(tokenize(text, line), line)
        rep = self._sum(tokens)
        tokens.finish()
        return rep

    def morphism(self, text: str, line: int | None = None) -> Morphism:
        tokens = _Cursor(tokenize(text, line), line)
        f = self._composite(tokens)
        tokens.finish()
        return f

    def _sum(self, tokens: _Cursor) -> Rep:
        parts = [self._atom(tokens)]
        while tokens.accept("++"):
            parts.append(self._atom(tokens))
        return parts[0] if len(parts) == 1 else direct_sum(parts, self.algebra).rep

    def _atom(self, tokens: _Cursor) -> Rep:
        rep = self._base(tokens)
        if tokens.accept("^"):
            rep = power(rep, int(tokens.expect_kind("int").text))
        return rep

    def _base(self, tokens: _Cursor) -> Rep:
        if tokens.accept("("):
            rep = self._sum(tokens)
            tokens.expect(")")
            return rep
        token = tokens.expect_kind("name")
        if tokens.current.text != "(":
            if token.text not in self.names:
                tokens.fail("Unknown module", token, UnknownIdentifierError)
            return self.names[token.text]
        tokens.expect("(")
        rep = self._call(token, tokens)
        tokens.expect(")")
        return rep

    def _call(self, token: Token, tokens: _Cursor) -> Rep:
        name = token.text
        if name in {"P", "Q", "S"}:
            vertex = tokens.expect_kind("name")
            if vertex.text not in self.algebra.vertices:
                tokens.fail("Unknown vertex", vertex, UnknownIdentifierError)
            build = {"P": projective, "Q": injective, "S": simple}[name]
            return build(self.algebra, vertex.text)
        unary: dict[str, Callable[[Rep], Rep]] = {
            "tau": tau,
            "taum": tau_minus,
            "rad": lambda m: radical(m).rep,
            "soc": lambda m: socle(m).rep,
            "top": lambda m: top(m).rep,
        }
        if name in unary:
            return unary[name](self._sum(tokens))
        maps: dict[str, Callable[[Morphism], Rep]] = {
            "ker": lambda f: kernel(f).rep,
            "coker": lambda f: cokernel(f).rep,
            "im": lambda f: image(f).rep,
        }
        if name in maps:
            return maps[name](self._composite(tokens))
        family = self._family(token, tokens)
        index = tokens.expect_kind("int")
        try:
            return family(int(index.text))
        except PreconditionError as e:
            raise ParseError(e.args[0], tokens.line, index.column) from None

    def _family(self, token: Token, tokens: _Cursor) -> Family:
        name = token.text
        if name in {"kP", "kQ"} or name.startswith("kR"):
            try:
                catalog = KroneckerCatalog(self.algebra)
            except PreconditionError as e:
                raise ParseError(e.args[0], tokens.line, token.column) from None
            if name == "kP":
                return catalog.pre_projective
            if name == "kQ":
                return catalog.pre_injective
            try:
                point = catalog.point(name[2:])
            except PreconditionError as e:
                raise UnknownIdentifierError(e.args[0], tokens.line, token.column) from None
            return lambda t: catalog.regular(point, t)
        if name == "U":
            return self._uniserial
        tokens.fail("Unknown function", token, UnknownIdentifierError)

    def _uniserial(self, n: int) -> Rep:
        """Lambda / rad^n Lambda over a local algebra with one vertex."""
        if len(self.algebra.vertices) != 1:
            msg = "U(n) needs an algebra with a single vertex"
            raise PreconditionError(msg)
        p = projective(self.algebra, self.algebra.vertices[0])
        if n > p.dim:
            msg = f"U({n}) is longer than the algebra"
            raise PreconditionError(msg)
        inclusion = Morphism.identity(p)
        for _ in range(n):
            inclusion = inclusion @ radical(inclusion.source).inclusion
        return quotient(inclusion).rep

    def _composite(self, tokens: _Cursor) -> Morphism:
        f = self._morphism(tokens)
        while tokens.accept("*"):
            start = tokens.current
            g = self._morphism(tokens)
            if g.target != f.source:
                tokens.fail("Maps do not compose", start, ParseError)
            f = f @ g
        return f

    def _morphism(self, tokens: _Cursor) -> Morphism:
        if tokens.accept("("):
            f = self._composite(tokens)
            tokens.expect(")")
            return f
        token = tokens.expect_kind("name")
        tokens.expect("(")
        match token.text:
            case "hom":
                x = self._sum(tokens)
                tokens.expect(",")
                y = self._sum(tokens)
                tokens.expect(")")
                tokens.expect("[")
                index = tokens.expect_kind("int")
                tokens.expect("]")
                space = hom(x, y)
                k = int(index.text)
                if k >= space.dim:
                    tokens.fail(f"Hom space has dimension {space.dim}", index)
                return space.basis[k]
            case "projcover" | "soclein" | "radin" | "arsplit":
                m = self._sum(tokens)
                tokens.expect(")")
                return _named_map(token.text, m)
            case _:
                tokens.fail("Unknown map", token, UnknownIdentifierError)


def _named_map(name: str, m: Rep) -> Morphism:
    match name:
        case "projcover":
            return proj_cover(m).morphism
        case "soclein":
            return socle(m).inclusion
        case "radin":
            return radical(m).inclusion
        case _:
            return min_right_almost_split(m)


def parse_module_expr(
    text: str, algebra: Algebra, names: "Mapping[str, Rep] | None" = None
) -> Rep:
    return Expressions(algebra, names).module(text)


def parse_morphism_expr(
    text: str, algebra: Algebra, names: "Mapping[str, Rep] | None" = None
) -> Morphism:
    return Expressions(algebra, names).morphism(text)
