# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Representations of bound quivers and the maps between them.

An arrow a: x -> y acts on a representation by a matrix of shape
(dims[y], dims[x]). A morphism is one matrix per vertex; its vector form
concatenates the row-major flattenings in vertex order, and every Hom space is
a Subspace of those vectors.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import accumulate
from typing import TYPE_CHECKING

import numpy as np

from .errors import AlgebraMismatchError, DimensionMismatchError, PreconditionError
from .ffmat import Mat, Subspace, block_diag, identity, nullspace, reduce, zeros
from .ffmat import rank as mat_rank

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from .algebra import Algebra, Path

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Rep:
    algebra: "Algebra"
    dims: tuple[int, ...]
    action: tuple[Mat, ...]

    @classmethod
    def build(
        cls,
        algebra: "Algebra",
        dims: "Sequence[int]",
        action: "Sequence[npt.ArrayLike] | None" = None,
        *,
        check: bool = True,
    ) -> "Rep":
        dims = tuple(int(d) for d in dims)
        if len(dims) != len(algebra.vertices):
            msg = f"Expected {len(algebra.vertices)} dimensions, got {len(dims)}"
            raise DimensionMismatchError(msg)
        if action is not None and len(action) != len(algebra.arrows):
            msg = f"Expected {len(algebra.arrows)} arrow matrices, got {len(action)}"
            raise DimensionMismatchError(msg)
        mats: list[Mat] = []
        for k, (s, t) in enumerate(algebra.arrow_ends):
            shape = (dims[t], dims[s])
            m = zeros(*shape) if action is None else reduce(action[k], algebra.p)
            if m.size == 0:
                m = zeros(*shape)
            if m.shape != shape:
                msg = f"Arrow {algebra.arrows[k].name} needs shape {shape}, got {m.shape}"
                raise DimensionMismatchError(msg)
            m.setflags(write=False)
            mats.append(m)
        rep = cls(algebra, dims, tuple(mats))
        if check and not rep.satisfies_relations():
            msg = "Arrow matrices do not satisfy the relations"
            raise PreconditionError(msg)
        return rep

    @classmethod
    def zero(cls, algebra: "Algebra") -> "Rep":
        return cls.build(algebra, [0] * len(algebra.vertices))

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return (0, *accumulate(self.dims))

    @cached_property
    def key(self) -> tuple[int, tuple[int, ...], bytes]:
        return (id(self.algebra), self.dims, b"".join(m.tobytes() for m in self.action))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Rep) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Rep({', '.join(map(str, self.dims))})"

    def dimvec(self) -> dict[str, int]:
        return dict(zip(self.algebra.vertices, self.dims, strict=True))

    def vertex_dim(self, vertex: str) -> int:
        return self.dims[self.algebra.vertex_index(vertex)]

    def arrow_matrix(self, name: str) -> Mat:
        return self.action[self.algebra.arrow_index(name)]

    def path_matrix(self, path: "Path") -> Mat:
        m = identity(self.vertex_dim(path.source))
        for name in path.arrows:
            m = (self.arrow_matrix(name) @ m) % self.p
        return m

    def satisfies_relations(self) -> bool:
        for rel in self.algebra.presentation.relations:
            total = zeros(self.vertex_dim(rel.target), self.vertex_dim(rel.source))
            for coef, path in rel.terms:
                total = total + coef * self.path_matrix(path)
            if (total % self.p).any():
                return False
        return True

    @cached_property
    def global_arrows(self) -> tuple[Mat, ...]:
        """Arrow actions as endomorphisms of the total space."""
        out: list[Mat] = []
        o = self.offsets
        for k, (s, t) in enumerate(self.algebra.arrow_ends):
            m = zeros(self.dim, self.dim)
            m[o[t] : o[t + 1], o[s] : o[s + 1]] = self.action[k]
            out.append(m)
        return tuple(out)

    @cached_property
    def vertex_projections(self) -> tuple[Mat, ...]:
        out: list[Mat] = []
        o = self.offsets
        for v in range(len(self.dims)):
            m = zeros(self.dim, self.dim)
            m[o[v] : o[v + 1], o[v] : o[v + 1]] = identity(self.dims[v])
            out.append(m)
        return tuple(out)

    def graded_subspaces(self, space: Subspace) -> list[Subspace]:
        """Split a vertex-graded subspace of the total space into its vertex parts."""
        o = self.offsets
        return [
            Subspace.span(
                [row[o[v] : o[v + 1]] for row in space.basis if row[o[v] : o[v + 1]].any()],
                self.dims[v],
                self.p,
            )
            for v in range(len(self.dims))
        ]

    def total_subspace(self, spaces: "Sequence[Subspace]") -> Subspace:
        o = self.offsets
        rows: list[Mat] = []
        for v, s in enumerate(spaces):
            for b in s.basis:
                row = np.zeros(self.dim, dtype=np.int64)
                row[o[v] : o[v + 1]] = b
                rows.append(row)
        return Subspace.span(rows, self.dim, self.p)


def _same_algebra(x: Rep, y: Rep) -> None:
    if x.algebra is not y.algebra:
        msg = "Modules live over different algebras"
        raise AlgebraMismatchError(msg)


def _same_rep(x: Rep, y: Rep, what: str) -> None:
    if x != y:
        msg = f"{what}: {x!r} does not match {y!r}"
        raise DimensionMismatchError(msg)


@dataclass(frozen=True, eq=False)
class Morphism:
    source: Rep
    target: Rep
    maps: tuple[Mat, ...]

    @classmethod
    def build(
        cls, source: Rep, target: Rep, maps: "Sequence[npt.ArrayLike]", *, check: bool = True
    ) -> "Morphism":
        _same_algebra(source, target)
        out: list[Mat] = []
        for v, m in enumerate(maps):
            shape = (target.dims[v], source.dims[v])
            a = reduce(m, source.p)
            if a.size == 0:
                a = zeros(*shape)
            if a.shape != shape:
                msg = f"Vertex map {v} needs shape {shape}, got {a.shape}"
                raise DimensionMismatchError(msg)
            a.setflags(write=False)
            out.append(a)
        f = cls(source, target, tuple(out))
        if check and not f.intertwines():
            msg = "Vertex maps do not commute with the arrows"
            raise PreconditionError(msg)
        return f

    @classmethod
    def identity(cls, rep: Rep) -> "Morphism":
        return cls.build(rep, rep, [identity(d) for d in rep.dims], check=False)

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "Morphism":
        return cls.build(
            source, target, [zeros(t, s) for s, t in zip(source.dims, target.dims, strict=True)]
        )

    @classmethod
    def from_vector(
        cls, source: Rep, target: Rep, vec: "npt.ArrayLike", *, check: bool = False
    ) -> "Morphism":
        v = np.asarray(vec, dtype=np.int64)
        maps: list[Mat] = []
        i = 0
        for s, t in zip(source.dims, target.dims, strict=True):
            maps.append(v[i : i + s * t].reshape(t, s))
            i += s * t
        return cls.build(source, target, maps, check=check)

    @property
    def p(self) -> int:
        return self.source.p

    def vector(self) -> Mat:
        if not self.maps:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([m.ravel() for m in self.maps])

    @cached_property
    def key(self) -> tuple[object, object, bytes]:
        return (self.source.key, self.target.key, self.vector().tobytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Morphism) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Morphism({self.source!r} -> {self.target!r})"

    def intertwines(self) -> bool:
        for k, (s, t) in enumerate(self.source.algebra.arrow_ends):
            left = self.target.action[k] @ self.maps[s]
            right = self.maps[t] @ self.source.action[k]
            if ((left - right) % self.p).any():
                return False
        return True

    def __matmul__(self, other: "Morphism") -> "Morphism":
        _same_rep(other.target, self.source, "Cannot compose")
        return Morphism.build(
            other.source,
            self.target,
            [a @ b for a, b in zip(self.maps, other.maps, strict=True)],
            check=False,
        )

    def __add__(self, other: "Morphism") -> "Morphism":
        _same_rep(self.source, other.source, "Sources differ")
        _same_rep(self.target, other.target, "Targets differ")
        return Morphism.build(
            self.source,
            self.target,
            [a + b for a, b in zip(self.maps, other.maps, strict=True)],
            check=False,
        )

    def scale(self, c: int) -> "Morphism":
        return Morphism.build(self.source, self.target, [c * a for a in self.maps], check=False)

    def __neg__(self) -> "Morphism":
        return self.scale(-1)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return not any(m.any() for m in self.maps)

    def rank(self) -> int:
        return sum(mat_rank(m, self.p) for m in self.maps if m.size)

    @property
    def is_mono(self) -> bool:
        return self.rank() == self.source.dim

    @property
    def is_epi(self) -> bool:
        return self.rank() == self.target.dim

    @property
    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_mono

    def global_matrix(self) -> Mat:
        return block_diag(self.maps)


@dataclass(frozen=True, eq=False)
class HomSpace:
    """Hom(source, target) with coordinates read off at the RREF pivots."""

    source: Rep
    target: Rep
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def basis(self) -> tuple[Morphism, ...]:
        return tuple(Morphism.from_vector(self.source, self.target, v) for v in self.space.basis)

    def element(self, coords: "npt.ArrayLike") -> Morphism:
        c = reduce(coords, self.source.p)
        vec = (c @ self.space.basis) % self.source.p
        return Morphism.from_vector(self.source, self.target, vec)

    def coordinates(self, f: Morphism) -> Mat:
        return self.space.coordinates(f.vector())

    def span(self, morphisms: "Sequence[Morphism]") -> Subspace:
        coords = [self.coordinates(f) for f in morphisms]
        return Subspace.span(coords, self.dim, self.source.p)


@lru_cache(maxsize=8192)
def hom(x: Rep, y: Rep) -> HomSpace:
    _same_algebra(x, y)
    p = x.p
    sizes = [t * s for s, t in zip(x.dims, y.dims, strict=True)]
    offsets = [0, *accumulate(sizes)]
    n = offsets[-1]
    blocks: list[Mat] = []
    for k, (s, t) in enumerate(x.algebra.arrow_ends):
        rows = y.dims[t] * x.dims[s]
        if rows == 0:
            continue
        eq = zeros(rows, n)
        # Y_a f_s - f_t X_a, row-major vectorisation
        eq[:, offsets[s] : offsets[s + 1]] += np.kron(y.action[k], identity(x.dims[s]))
        eq[:, offsets[t] : offsets[t + 1]] -= np.kron(identity(y.dims[t]), x.action[k].T)
        blocks.append(eq % p)
    system = np.vstack(blocks) if blocks else zeros(0, n)
    space = Subspace.span(nullspace(system, p), n, p)
    return HomSpace(x, y, space)


@dataclass(frozen=True, eq=False)
class Sub:
    rep: Rep
    inclusion: Morphism


@dataclass(frozen=True, eq=False)
class Quotient:
    rep: Rep
    projection: Morphism
    sections: tuple[Mat, ...]

    def induce(self, g: Morphism) -> Morphism:
        """The map out of the quotient through which g factors."""
        _same_rep(g.source, self.projection.source, "Cannot induce")
        induced = Morphism.build(
            self.rep,
            g.target,
            [gm @ s for gm, s in zip(g.maps, self.sections, strict=True)],
            check=False,
        )
        if induced @ self.projection != g:
            msg = "Map does not vanish on the submodule"
            raise PreconditionError(msg)
        return induced


def subrep(y: Rep, spaces: "Sequence[Subspace]") -> Sub:
    action: list[Mat] = []
    for k, (s, t) in enumerate(y.algebra.arrow_ends):
        images = (y.action[k] @ spaces[s].basis.T) % y.p
        action.append(spaces[t].coordinates(images.T).T)
    x = Rep.build(y.algebra, [s.dim for s in spaces], action, check=False)
    inclusion = Morphism.build(x, y, [s.basis.T for s in spaces], check=False)
    return Sub(x, inclusion)


def quotient_by(y: Rep, spaces: "Sequence[Subspace]") -> Quotient:
    projections: list[Mat] = []
    sections: list[Mat] = []
    for v, s in enumerate(spaces):
        comp = list(s.complement_positions())
        projections.append(s.residual(identity(y.dims[v]))[:, comp].T)
        sections.append(identity(y.dims[v])[:, comp])
    action = [
        projections[t] @ y.action[k] @ sections[s] for k, (s, t) in enumerate(y.algebra.arrow_ends)
    ]
    q = Rep.build(y.algebra, [len(s.complement_positions()) for s in spaces], action, check=False)
    projection = Morphism.build(y, q, projections)
    return Quotient(q, projection, tuple(sections))


def _image_spaces(f: Morphism) -> list[Subspace]:
    return [Subspace.span(m.T, m.shape[0], f.p) for m in f.maps]


def kernel(f: Morphism) -> Sub:
    return subrep(
        f.source,
        [
            Subspace.span(nullspace(m, f.p), d, f.p)
            for m, d in zip(f.maps, f.source.dims, strict=True)
        ],
    )


def image(f: Morphism) -> Sub:
    return subrep(f.target, _image_spaces(f))


def cokernel(f: Morphism) -> Quotient:
    return quotient_by(f.target, _image_spaces(f))


def quotient(inclusion: Morphism) -> Quotient:
    if not inclusion.is_mono:
        msg = "Submodule map is not injective"
        raise PreconditionError(msg)
    return cokernel(inclusion)


@dataclass(frozen=True, eq=False)
class DirectSum:
    rep: Rep
    injections: tuple[Morphism, ...]
    projections: tuple[Morphism, ...]


def direct_sum(reps: "Sequence[Rep]", algebra: "Algebra | None" = None) -> DirectSum:
    if not reps:
        if algebra is None:
            msg = "An empty direct sum needs its algebra"
            raise PreconditionError(msg)
        return DirectSum(Rep.zero(algebra), (), ())
    a = reps[0].algebra
    for r in reps:
        _same_algebra(reps[0], r)
    dims = [sum(r.dims[v] for r in reps) for v in range(len(a.vertices))]
    action = [block_diag([r.action[k] for r in reps]) for k in range(len(a.arrows))]
    total = Rep.build(a, dims, action, check=False)
    injections: list[Morphism] = []
    projections: list[Morphism] = []
    starts = [0] * len(dims)
    for r in reps:
        inj: list[Mat] = []
        for v, d in enumerate(r.dims):
            m = zeros(dims[v], d)
            m[starts[v] : starts[v] + d] = identity(d)
            inj.append(m)
            starts[v] += d
        injections.append(Morphism.build(r, total, inj, check=False))
        projections.append(Morphism.build(total, r, [m.T for m in inj], check=False))
    return DirectSum(total, tuple(injections), tuple(projections))


def power(rep: Rep, n: int) -> Rep:
    return direct_sum([rep] * n, rep.algebra).rep


def copair(maps: "Sequence[Morphism]", source: DirectSum | None = None) -> Morphism:
    """[f1, ..., fn] out of the direct sum of the sources."""
    if source is None:
        source = direct_sum([f.source for f in maps])
    target = maps[0].target
    for f in maps:
        _same_rep(f.target, target, "Targets differ")
    total = maps[0].scale(0) @ source.projections[0]
    for f, pr in zip(maps, source.projections, strict=True):
        total = total + f @ pr
    return total


def pair(maps: "Sequence[Morphism]", target: DirectSum | None = None) -> Morphism:
    """[f1; ...; fn] into the direct sum of the targets."""
    if target is None:
        target = direct_sum([f.target for f in maps])
    total = target.injections[0] @ maps[0].scale(0)
    for f, inj in zip(maps, target.injections, strict=True):
        total = total + inj @ f
    return total


def radical(x: Rep) -> Sub:
    spaces: list[Subspace] = []
    for v, d in enumerate(x.dims):
        cols = [x.action[k] for k, (_, t) in enumerate(x.algebra.arrow_ends) if t == v]
        spaces.append(Subspace.span(np.hstack(cols).T if cols else zeros(0, d), d, x.p))
    return subrep(x, spaces)


def socle(x: Rep) -> Sub:
    spaces: list[Subspace] = []
    for v, d in enumerate(x.dims):
        rows = [x.action[k] for k, (s, _) in enumerate(x.algebra.arrow_ends) if s == v]
        if rows:
            spaces.append(Subspace.span(nullspace(np.vstack(rows), x.p), d, x.p))
        else:
            spaces.append(Subspace.full(d, x.p))
    return subrep(x, spaces)


def top(x: Rep) -> Quotient:
    return cokernel(radical(x).inclusion)

