# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Projective presentations, the transpose, Auslander-Reiten translates and Ext^1."""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING

import numpy as np

from .algebra import Algebra, Path, dual, projective
from .errors import DimensionMismatchError, PreconditionError
from .ffmat import Mat, Subspace, identity, nullspace, solve_all, zeros
from .krs import end_algebra
from .maps import right_leq
from .rep import (
    DirectSum,
    HomSpace,
    Morphism,
    Rep,
    Sub,
    cokernel,
    copair,
    direct_sum,
    hom,
    kernel,
    pair,
    radical,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

logger = logging.getLogger(__name__)


def yoneda(algebra: Algebra, x: str, m: Rep, vec: "npt.ArrayLike") -> Morphism:
    """The map P(x) -> m sending e_x to `vec`, a vector of m at x."""
    v = np.asarray(vec, dtype=np.int64)
    maps: list[Mat] = []
    for y in algebra.vertices:
        cols = [m.path_matrix(algebra.basis[b]) @ v for b in algebra.basis_between(x, y)]
        maps.append(np.array(cols).T if cols else zeros(m.vertex_dim(y), 0))
    return Morphism.build(projective(algebra, x), m, maps, check=False)


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    rep: Rep
    morphism: Morphism
    generators: tuple[str, ...]
    summands: DirectSum


@lru_cache(maxsize=1024)
def proj_cover(m: Rep) -> ProjectiveCover:
    a = m.algebra
    rad = radical(m)
    gens: list[tuple[str, Mat]] = []
    for v, x in enumerate(a.vertices):
        inside = Subspace.span(rad.inclusion.maps[v].T, m.dims[v], m.p)
        gens += [(x, identity(m.dims[v])[j]) for j in inside.complement_positions()]
    ds = direct_sum([projective(a, x) for x, _ in gens], a)
    if gens:
        cover = copair([yoneda(a, x, m, vec) for x, vec in gens], ds)
    else:
        cover = Morphism.zero(ds.rep, m)
    return ProjectiveCover(ds.rep, cover, tuple(x for x, _ in gens), ds)


def is_projective(m: Rep) -> bool:
    return proj_cover(m).rep.dims == m.dims


def is_injective(m: Rep) -> bool:
    return is_projective(dual(m))


@dataclass(frozen=True, eq=False)
class ProjPresentation:
    """P1 --d--> P0 --cover--> M with both covers minimal.

    coefficients[i][j] holds the coordinates of the image of the j-th generator
    of P1 in the i-th summand P(x_i) of P0, over the basis paths x_i -> y_j.
    """

    p1: ProjectiveCover
    p0: ProjectiveCover
    syzygy: Sub
    d: Morphism
    coefficients: tuple[tuple[Mat, ...], ...]

    @property
    def cover(self) -> Morphism:
        return self.p0.morphism


@lru_cache(maxsize=1024)
def min_presentation(m: Rep) -> ProjPresentation:
    a = m.algebra
    p0 = proj_cover(m)
    omega = kernel(p0.morphism)
    p1 = proj_cover(omega.rep)
    d = omega.inclusion @ p1.morphism
    coefficients: list[tuple[Mat, ...]] = []
    for proj in p0.summands.projections:
        row: list[Mat] = []
        for j, y in enumerate(p1.generators):
            v = a.vertex_index(y)
            e = a.local_index(Path.trivial(y))
            image = (proj @ d @ p1.summands.injections[j]).maps[v][:, e]
            row.append(image)
        coefficients.append(tuple(row))
    return ProjPresentation(p1, p0, omega, d, tuple(coefficients))


@lru_cache(maxsize=1024)
def transpose(m: Rep) -> Rep:
    """Tr m, a module over the opposite algebra."""
    pres = min_presentation(m)
    op = m.algebra.opposite()
    xs, ys = pres.p0.generators, pres.p1.generators
    target = direct_sum([projective(op, y) for y in ys], op)
    if not ys:
        return target.rep
    source = direct_sum([projective(op, x) for x in xs], op)
    maps: list[Morphism] = []
    for i, x in enumerate(xs):
        v = op.vertex_index(x)
        vec = np.zeros(target.rep.dims[v], dtype=np.int64)
        for j in range(len(ys)):
            vec += target.injections[j].maps[v] @ pres.coefficients[i][j]
        maps.append(yoneda(op, x, target.rep, vec % m.p))
    return cokernel(copair(maps, source)).rep


@lru_cache(maxsize=1024)
def tau(m: Rep) -> Rep:
    return dual(transpose(m))


@lru_cache(maxsize=1024)
def tau_minus(m: Rep) -> Rep:
    return transpose(dual(m))


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    inclusion: Morphism
    projection: Morphism

    @property
    def kernel(self) -> Rep:
        return self.inclusion.source

    @property
    def middle(self) -> Rep:
        return self.inclusion.target

    @property
    def end(self) -> Rep:
        return self.projection.target

    def is_exact(self) -> bool:
        return (
            self.inclusion.is_mono
            and self.projection.is_epi
            and (self.projection @ self.inclusion).is_zero
            and self.middle.dim == self.kernel.dim + self.end.dim
        )


@dataclass(frozen=True, eq=False)
class ExtGroup:
    """Ext^1(y, k) as Hom(syzygy, k) modulo the maps that extend to the cover."""

    y: Rep
    k: Rep
    cover: ProjectiveCover
    syzygy: Sub
    cocycles: HomSpace
    boundaries: Subspace

    @property
    def dim(self) -> int:
        return self.cocycles.dim - self.boundaries.dim

    @cached_property
    def _positions(self) -> list[int]:
        return list(self.boundaries.complement_positions())

    def class_of(self, xi: Morphism) -> Mat:
        return self.boundaries.residual(self.cocycles.coordinates(xi))[self._positions]

    def cocycle(self, coords: "npt.ArrayLike") -> Morphism:
        full = np.zeros(self.cocycles.dim, dtype=np.int64)
        full[self._positions] = np.asarray(coords, dtype=np.int64)
        return self.cocycles.element(full)

    def induced(self, phi: Morphism, coords: "npt.ArrayLike") -> Mat:
        """Class of the sequence induced along phi: k -> k (cocycle replaced by phi xi)."""
        return self.class_of(phi @ self.cocycle(coords))

    def action_matrix(self, phi: Morphism) -> Mat:
        cols = [self.induced(phi, e) for e in identity(self.dim)]
        return np.array(cols, dtype=np.int64).T.reshape(self.dim, self.dim)

    @cached_property
    def socle(self) -> Subspace:
        """Classes killed by every radical endomorphism of k."""
        end = end_algebra(self.k)
        mats = [self.action_matrix(end.to_morphism(r)) for r in end.radical.basis]
        if not mats:
            return Subspace.full(self.dim, self.k.p)
        return Subspace.span(nullspace(np.vstack(mats), self.k.p), self.dim, self.k.p)


@lru_cache(maxsize=2048)
def ext1(y: Rep, k: Rep) -> ExtGroup:
    cover = proj_cover(y)
    omega = kernel(cover.morphism)
    cocycles = hom(omega.rep, k)
    boundaries = cocycles.span([g @ omega.inclusion for g in hom(cover.rep, k).basis])
    return ExtGroup(y, k, cover, omega, cocycles, boundaries)


def extensions_equivalent(s: ShortExactSequence, t: ShortExactSequence) -> bool:
    """Whether some phi: s.middle -> t.middle fixes both ends; such a phi is invertible."""
    if s.kernel != t.kernel or s.end != t.end:
        return False
    space = hom(s.middle, t.middle)
    target = np.concatenate([t.inclusion.vector(), s.projection.vector()])
    if space.dim == 0:
        return not target.any()
    columns = np.array(
        [
            np.concatenate([(h @ s.inclusion).vector(), (t.projection @ h).vector()])
            for h in space.basis
        ],
        dtype=np.int64,
    ).T
    return solve_all(columns.reshape(target.size, space.dim), target, s.middle.p) is not None


def class_of_sequence(ses: ShortExactSequence) -> tuple[ExtGroup, Mat]:
    """The class of 0 -> K -> X -> Y -> 0 in Ext^1(Y, K), read off a lift of the cover."""
    ext = ext1(ses.end, ses.kernel)
    lift = right_leq(ext.cover.morphism, ses.projection)
    if lift is None:
        msg = "Sequence is not exact at its end"
        raise PreconditionError(msg)
    xi = right_leq(lift @ ext.syzygy.inclusion, ses.inclusion)
    if xi is None:
        msg = "Sequence is not exact in the middle"
        raise PreconditionError(msg)
    return ext, ext.class_of(xi)


def _pushout(ext: ExtGroup, k: Rep, xi: Morphism) -> ShortExactSequence:
    ds = direct_sum([k, ext.cover.rep])
    q = cokernel(pair([xi, -ext.syzygy.inclusion], ds))
    inclusion = q.projection @ ds.injections[0]
    projection = q.induce(copair([Morphism.zero(k, ext.y), ext.cover.morphism], ds))
    return ShortExactSequence(inclusion, projection)


def realize(ext: ExtGroup, coords: "npt.ArrayLike") -> ShortExactSequence:
    """The extension 0 -> k -> X -> y -> 0 of the given class, X a pushout."""
    return _pushout(ext, ext.k, ext.cocycle(coords))


def realize_sum(parts: "Sequence[tuple[ExtGroup, npt.ArrayLike]]") -> ShortExactSequence:
    """One extension of y by the direct sum of the k's, one class per part."""
    y = parts[0][0].y
    for ext, _ in parts:
        if ext.y != y:
            msg = "All classes must extend the same module"
            raise DimensionMismatchError(msg)
    target = direct_sum([ext.k for ext, _ in parts])
    xi = pair([ext.cocycle(c) for ext, c in parts], target)
    return _pushout(parts[0][0], target.rep, xi)


def hom_through_proj(c: Rep, y: Rep) -> Subspace:
    """Maps c -> y factoring through a projective, in hom(c, y) coordinates."""
    cover = proj_cover(y)
    space = hom(c, y)
    return space.span([cover.morphism @ g for g in hom(c, cover.rep).basis])


def stable_hom_dim(c: Rep, y: Rep) -> int:
    return hom(c, y).dim - hom_through_proj(c, y).dim


def ar_formula_holds(y: Rep, k: Rep) -> bool:
    """dim Ext^1(y, k) equals the dimension of Hom(taum k, y) modulo projectives."""
    return ext1(y, k).dim == stable_hom_dim(tau_minus(k), y)
