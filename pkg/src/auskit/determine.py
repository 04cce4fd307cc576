# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Hom(C, Y) as a module over End(C)^op, the map eta, and minimal right determiners."""

import logging
from dataclasses import dataclass
from enum import StrEnum, auto
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from .algebra import projective
from .ar import is_projective, tau_minus
from .errors import PreconditionError, TargetMismatchError
from .ffmat import Mat, Subspace, invariant_closure, nullspace, rank
from .krs import (
    Decomposition,
    EndAlgebra,
    decompose,
    end_algebra,
    find_isomorphic,
    is_indecomposable,
    is_isomorphic,
    right_minimalize,
)
from .maps import right_leq
from .rep import HomSpace, Morphism, Rep, hom, radical

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Label:
    """A simple Gamma-module, named after the summand of C it tops."""

    name: str
    summand: Rep
    residue_dim: int
    idempotent: Mat


@dataclass(frozen=True, eq=False)
class GammaModule:
    c: Rep
    y: Rep
    homs: HomSpace
    end: EndAlgebra
    action: tuple[Mat, ...]
    decomposition: Decomposition
    labels: tuple[Label, ...]

    @property
    def dim(self) -> int:
        return self.homs.dim

    @property
    def p(self) -> int:
        return self.c.p

    def precomposition(self, phi: Morphism) -> Mat:
        return _precomposition(self.homs, phi)

    def is_submodule(self, space: Subspace) -> bool:
        return all(space.is_invariant(t) for t in self.action)

    def closure(self, vectors: "Mat | Sequence[Mat]") -> Subspace:
        return invariant_closure(vectors, self.action, self.dim, self.p)

    def composition(self, space: Subspace) -> tuple[int, ...]:
        """Jordan-Hoelder multiplicities per label: dim(eps_i V) / dim End(C_i)/rad."""
        out: list[int] = []
        for label in self.labels:
            r = rank((label.idempotent @ space.basis.T) % self.p, self.p) if space.dim else 0
            if r % label.residue_dim:
                msg = f"Multiplicity of {label.name} is not integral"
                raise PreconditionError(msg)
            out.append(r // label.residue_dim)
        return tuple(out)

    @cached_property
    def total(self) -> tuple[int, ...]:
        return self.composition(Subspace.full(self.dim, self.p))

    def length(self, space: Subspace | None = None) -> int:
        return sum(self.total if space is None else self.composition(space))

    def label_names(self) -> tuple[str, ...]:
        return tuple(label.name for label in self.labels)


def _precomposition(homs: HomSpace, phi: Morphism) -> Mat:
    """Matrix of h -> h phi in hom coordinates, one column per basis map."""
    cols = [homs.coordinates(h @ phi) for h in homs.basis]
    return np.array(cols, dtype=np.int64).T.reshape(homs.dim, homs.dim)


def gamma_module(c: Rep, y: Rep, names: "Mapping[str, Rep] | None" = None) -> GammaModule:
    homs = hom(c, y)
    end = end_algebra(c)
    action = tuple(_precomposition(homs, e) for e in end.space.basis)
    dec = decompose(c)
    labels: list[Label] = []
    for n, summand in enumerate(dec.representatives(), start=1):
        eps = summand.inclusion @ summand.projection
        local = end_algebra(summand.rep)
        residue = local.dim - local.radical.dim
        labels.append(
            Label(
                _name_for(summand.rep, names) or f"C{n}",
                summand.rep,
                residue,
                _precomposition(homs, eps),
            )
        )
    return GammaModule(c, y, homs, end, action, dec, tuple(labels))


def _name_for(rep: Rep, names: "Mapping[str, Rep] | None") -> str | None:
    for name, candidate in (names or {}).items():
        if is_isomorphic(rep, candidate):
            return name
    return None


def eta(f: Morphism, gm: GammaModule) -> Subspace:
    """f Hom(C, X) inside Hom(C, Y)."""
    if f.target != gm.y:
        msg = f"Map ends in {f.target!r}, the Gamma-module is built on {gm.y!r}"
        raise TargetMismatchError(msg)
    return gm.homs.span([f @ g for g in hom(gm.c, f.source).basis])


def almost_factors_through(p: Rep, f: Morphism) -> bool:
    """Whether some eta: p -> Y restricted to rad p factors through f without eta doing so."""
    if not (is_projective(p) and is_indecomposable(p)):
        msg = f"{p!r} is not an indecomposable projective"
        raise PreconditionError(msg)
    y, x = f.target, f.source
    rad = radical(p)
    on_p = hom(p, y)
    on_rad = hom(rad.rep, y)
    if on_p.dim == 0:
        return False
    restrict = np.array(
        [on_rad.coordinates(h @ rad.inclusion) for h in on_p.basis], dtype=np.int64
    ).reshape(on_p.dim, on_rad.dim)
    through = [on_rad.coordinates(f @ g) for g in hom(rad.rep, x).basis]
    system = np.hstack(
        [restrict.T, -np.array(through, dtype=np.int64).reshape(len(through), on_rad.dim).T]
    )
    solutions = nullspace(system % f.p, f.p)[:, : on_p.dim]
    w = Subspace.span(solutions, on_p.dim, f.p)
    factoring = on_p.span([f @ g for g in hom(p, x).basis])
    return not w.issubspace(factoring)


class Provenance(StrEnum):
    tau_of_intrinsic_kernel = auto()
    projective_almost_factors = auto()


@dataclass(frozen=True, eq=False)
class DeterminerSummand:
    rep: Rep
    provenance: Provenance


@dataclass(frozen=True, eq=False)
class Determiner:
    summands: tuple[DeterminerSummand, ...]

    def reps(self) -> list[Rep]:
        return [s.rep for s in self.summands]


def minimal_determiner(f: Morphism) -> Determiner:
    a = f.source.algebra
    mz = right_minimalize(f)
    found: list[DeterminerSummand] = []

    def add(rep: Rep, provenance: Provenance) -> None:
        if rep.dim and find_isomorphic(rep, [s.rep for s in found]) is None:
            found.append(DeterminerSummand(rep, provenance))

    for summand in decompose(mz.intrinsic_kernel).representatives():
        add(tau_minus(summand.rep), Provenance.tau_of_intrinsic_kernel)
    for x in a.vertices:
        p = projective(a, x)
        if p.dim and almost_factors_through(p, mz.morphism):
            add(p, Provenance.projective_almost_factors)
    return Determiner(tuple(found))


def is_right_determined(f: Morphism, c: Rep) -> bool:
    available = [s.rep for s in decompose(c).representatives()]
    summands = minimal_determiner(f).summands
    return all(find_isomorphic(s.rep, available) is not None for s in summands)


def definitional_check(f: Morphism, c: Rep, probes: "Sequence[Morphism]") -> list[Morphism]:
    """Probes g with g Hom(c, X') inside f Hom(c, X) that still do not factor through f."""
    space = hom(c, f.target)
    image = space.span([f @ g for g in hom(c, f.source).basis])
    bad: list[Morphism] = []
    for g in probes:
        if g.target != f.target:
            msg = "Probe ends in a different module"
            raise TargetMismatchError(msg)
        pulled = space.span([g @ phi for phi in hom(c, g.source).basis])
        if pulled.issubspace(image) and right_leq(g, f) is None:
            bad.append(g)
    if bad:
        logger.warning("%d probes violate the determination property", len(bad))
    return bad


def random_probes(
    y: Rep, sources: "Sequence[Rep]", count: int, rng: np.random.Generator
) -> list[Morphism]:
    candidates = [s for s in sources if hom(s, y).dim]
    out: list[Morphism] = []
    for _ in range(count if candidates else 0):
        space = hom(candidates[int(rng.integers(len(candidates)))], y)
        out.append(space.element(rng.integers(0, y.p, size=space.dim)))
    return out

