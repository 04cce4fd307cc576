# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING

import numpy as np

from .errors import BadRelationError, NotFiniteDimensionalError, UnknownIdentifierError
from .ffmat import Mat, Subspace, check_field, zeros
from .rep import Morphism, Rep

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        names = [*self.vertices, *(a.name for a in self.arrows)]
        for name in names:
            if names.count(name) > 1:
                msg = f"Name {name!r} is used twice"
                raise BadRelationError(msg)
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in self.vertices:
                    msg = f"Arrow {a.name} uses unknown vertex {end!r}"
                    raise UnknownIdentifierError(msg)

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        msg = f"Unknown arrow {name!r}"
        raise UnknownIdentifierError(msg)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True)
class Path:
    """A path through the quiver. `arrows` lists the arrow applied first, first."""

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        return "*".join(reversed(self.arrows)) if self.arrows else f"e_{self.source}"

    def then(self, other: "Path") -> "Path":
        if self.target != other.source:
            msg = f"Cannot follow {self} by {other}"
            raise BadRelationError(msg)
        return Path(self.source, other.target, self.arrows + other.arrows)

    def reversed(self) -> "Path":
        return Path(self.target, self.source, self.arrows[::-1])

    @staticmethod
    def arrow(a: Arrow) -> "Path":
        return Path(a.source, a.target, (a.name,))

    @staticmethod
    def trivial(vertex: str) -> "Path":
        return Path(vertex, vertex)


@dataclass(frozen=True)
class Relation:
    terms: tuple[tuple[int, Path], ...]

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    def reversed(self) -> "Relation":
        return Relation(tuple((c, path.reversed()) for c, path in self.terms))

    def text(self) -> str:
        return " + ".join(str(path) if c == 1 else f"{c} {path}" for c, path in self.terms)


@dataclass(frozen=True)
class AlgebraPresentation:
    p: int
    quiver: Quiver
    relations: tuple[Relation, ...] = ()

    def opposite(self) -> "AlgebraPresentation":
        return AlgebraPresentation(
            self.p, self.quiver.opposite(), tuple(r.reversed() for r in self.relations)
        )

    def text(self) -> str:
        lines = [f"field {self.p}", "vertices " + " ".join(self.quiver.vertices)]
        lines += [f"arrow {a.name} {a.source} {a.target}" for a in self.quiver.arrows]
        lines += [f"relation {r.text()}" for r in self.relations]
        return "\n".join(lines) + "\n"


def _column_key(path: Path) -> tuple[int, str, str, tuple[str, ...]]:
    # longer paths come first so that relations eliminate them before shorter ones
    return (-len(path), path.source, path.target, path.arrows)


def _basis_key(path: Path) -> tuple[int, str, str, tuple[str, ...]]:
    return (len(path), path.source, path.target, path.arrows)


class Algebra:
    """A finite-dimensional quotient kQ/I with an explicit path basis.

    Paths of length at least `bound` vanish. The ideal is kept as a subspace
    of the span of the shorter paths (`columns`); the basis consists of the
    paths that are not pivots of that subspace.
    """

    def __init__(
        self,
        presentation: AlgebraPresentation,
        bound: int,
        columns: tuple[Path, ...],
        ideal: Subspace,
        basis: tuple[Path, ...] | None = None,
        opposite: "Algebra | None" = None,
    ) -> None:
        self.presentation = presentation
        self.p = presentation.p
        self.quiver = presentation.quiver
        self.bound = bound
        self._columns = columns
        self._column_index = {path: i for i, path in enumerate(columns)}
        self._ideal = ideal
        self._free = ideal.complement_positions()
        if basis is None:
            basis = tuple(sorted((columns[i] for i in self._free), key=_basis_key))
        self.basis = basis
        self._basis_index = {path: i for i, path in enumerate(basis)}
        self._free_to_basis = [self._basis_index[columns[i]] for i in self._free]
        self._opposite = opposite
        self._between: dict[tuple[str, str], tuple[int, ...]] = {}

    def __repr__(self) -> str:
        return f"<Algebra over F_{self.p}: {len(self.quiver.vertices)} vertices, dim {self.dim}>"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    def vertex_index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            msg = f"Unknown vertex {vertex!r}"
            raise UnknownIdentifierError(msg) from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        msg = f"Unknown arrow {name!r}"
        raise UnknownIdentifierError(msg)

    @cached_property
    def arrow_ends(self) -> tuple[tuple[int, int], ...]:
        """(source index, target index) per arrow."""
        return tuple(
            (self.vertex_index(a.source), self.vertex_index(a.target)) for a in self.arrows
        )

    def reduce(self, terms: "Iterable[tuple[int, Path]]") -> Mat:
        """Coordinates in the path basis of a linear combination of paths."""
        vec = np.zeros(len(self._columns), dtype=np.int64)
        for coef, path in terms:
            if len(path) < self.bound:
                vec[self._column_index[path]] += coef
        residual = self._ideal.residual(vec)
        out = np.zeros(self.dim, dtype=np.int64)
        out[self._free_to_basis] = residual[list(self._free)]
        return out

    def path_coordinates(self, path: Path) -> Mat:
        return self.reduce([(1, path)])

    def basis_between(self, x: str, y: str) -> tuple[int, ...]:
        """Indices of basis paths from x to y, in basis order."""
        key = (x, y)
        if key not in self._between:
            self.vertex_index(x)
            self.vertex_index(y)
            self._between[key] = tuple(
                i for i, b in enumerate(self.basis) if b.source == x and b.target == y
            )
        return self._between[key]

    def local_index(self, path: Path) -> int:
        """Position of a basis path inside basis_between(source, target)."""
        return self.basis_between(path.source, path.target).index(self._basis_index[path])

    @cached_property
    def structure(self) -> Mat:
        """structure[i, j] holds the coordinates of basis[i] after basis[j]."""
        n = self.dim
        table = np.zeros((n, n, n), dtype=np.int64)
        for i, second in enumerate(self.basis):
            for j, first in enumerate(self.basis):
                if first.target == second.source:
                    table[i, j] = self.path_coordinates(first.then(second))
        return table

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            self._opposite = Algebra(
                self.presentation.opposite(),
                self.bound,
                tuple(c.reversed() for c in self._columns),
                self._ideal,
                basis=tuple(b.reversed() for b in self.basis),
                opposite=self,
            )
        return self._opposite

    def text(self) -> str:
        return self.presentation.text()


def _all_paths(quiver: Quiver, max_len: int) -> list[Path]:
    layer = [Path.trivial(v) for v in quiver.vertices]
    paths = list(layer)
    for _ in range(max_len):
        layer = [
            path.then(Path.arrow(a))
            for path in layer
            for a in quiver.arrows
            if a.source == path.target
        ]
        paths += layer
    return sorted(paths, key=_column_key)


def _check_relation(quiver: Quiver, relation: Relation) -> None:
    if not relation.terms:
        msg = "Empty relation"
        raise BadRelationError(msg)
    for _, path in relation.terms:
        if len(path) < 2:
            msg = f"Relation term {path} is shorter than 2; only admissible ideals are supported"
            raise BadRelationError(msg)
        if (path.source, path.target) != (relation.source, relation.target):
            msg = f"Relation {relation.text()} mixes endpoints"
            raise BadRelationError(msg)
        position = path.source
        for name in path.arrows:
            a = quiver.arrow(name)
            if a.source != position:
                msg = f"Relation term {path} is not a path"
                raise BadRelationError(msg)
            position = a.target


def _ideal(pres: AlgebraPresentation, columns: list[Path], max_len: int) -> Subspace:
    index = {path: i for i, path in enumerate(columns)}
    rows: list[Mat] = []
    for rel in pres.relations:
        shortest = min(len(path) for _, path in rel.terms)
        before = [v for v in columns if v.target == rel.source and len(v) + shortest <= max_len]
        for v in before:
            after = [
                u
                for u in columns
                if u.source == rel.target and len(v) + len(u) + shortest <= max_len
            ]
            for u in after:
                row = np.zeros(len(columns), dtype=np.int64)
                for coef, path in rel.terms:
                    full = v.then(path).then(u)
                    if len(full) <= max_len:
                        row[index[full]] += coef
                rows.append(row % pres.p)
    return Subspace.span(rows, len(columns), pres.p)


def build_algebra(pres: AlgebraPresentation, max_path_length: int = 30) -> Algebra:
    """Find the smallest L with every length-L path in I + J^(L+1) and return kQ/(I + J^L)."""
    check_field(pres.p)
    for rel in pres.relations:
        _check_relation(pres.quiver, rel)
    for bound in range(1, max_path_length + 1):
        columns = _all_paths(pres.quiver, bound)
        ideal = _ideal(pres, columns, bound)
        longest = [i for i, path in enumerate(columns) if len(path) == bound]
        unit = np.eye(len(columns), dtype=np.int64)
        if all(ideal.contains(unit[i]) for i in longest):
            kept = [path for path in columns if len(path) < bound]
            algebra = Algebra(pres, bound, tuple(kept), _ideal(pres, kept, bound - 1))
            logger.debug("built %r, paths vanish from length %d", algebra, bound)
            return algebra
    msg = f"Paths do not vanish up to length {max_path_length}; the ideal is not admissible"
    raise NotFiniteDimensionalError(msg)


@lru_cache(maxsize=256)
def projective(a: Algebra, x: str) -> Rep:
    """P(x): paths starting at x, arrows acting by composition on the left."""
    dims = tuple(len(a.basis_between(x, y)) for y in a.vertices)
    action: list[Mat] = []
    for arrow in a.arrows:
        rows = a.basis_between(x, arrow.target)
        cols = a.basis_between(x, arrow.source)
        m = zeros(len(rows), len(cols))
        for j, b in enumerate(cols):
            m[:, j] = a.path_coordinates(a.basis[b].then(Path.arrow(arrow)))[list(rows)]
        action.append(m)
    return Rep.build(a, dims, action)


def dual(m: Rep) -> Rep:
    """Vector-space dual, a module over the opposite algebra."""
    return Rep.build(m.algebra.opposite(), m.dims, [x.T for x in m.action])


@lru_cache(maxsize=256)
def injective(a: Algebra, x: str) -> Rep:
    return dual(projective(a.opposite(), x))


@lru_cache(maxsize=256)
def simple(a: Algebra, x: str) -> Rep:
    i = a.vertex_index(x)
    dims = tuple(int(j == i) for j in range(len(a.vertices)))
    return Rep.build(a, dims)


def dual_morphism(f: Morphism) -> Morphism:
    """D f: D(target) -> D(source) over the opposite algebra."""
    return Morphism.build(dual(f.target), dual(f.source), [m.T for m in f.maps], check=False)


def standard_modules(a: Algebra) -> dict[str, Rep]:
    """P(x), Q(x) and S(x) for every vertex, keyed by their expression names."""
    out: dict[str, Rep] = {}
    for x in a.vertices:
        out[f"P({x})"] = projective(a, x)
        out[f"Q({x})"] = injective(a, x)
        out[f"S({x})"] = simple(a, x)
    return out
