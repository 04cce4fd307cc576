# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Endomorphism algebras, Krull-Remak-Schmidt decompositions and right minimal maps."""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING

import numpy as np

from .errors import VerificationError
from .ffmat import (
    Mat,
    Subspace,
    identity,
    mat_inv,
    matrix_power,
    nullspace,
    rank,
    reduce,
    solve_all,
)
from .rep import HomSpace, Morphism, Rep, hom, kernel, subrep

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

RANDOM_TRIES = 200


class EndAlgebra:
    """End(X) as an algebra, in the coordinates of hom(X, X)."""

    def __init__(self, rep: Rep) -> None:
        self.rep = rep
        self.p = rep.p
        self.space: HomSpace = hom(rep, rep)
        self.dim = self.space.dim
        self.matrices = np.array(
            [f.global_matrix() for f in self.space.basis], dtype=np.int64
        ).reshape(self.dim, rep.dim, rep.dim)

    def to_matrix(self, coords: "Mat") -> Mat:
        return np.tensordot(reduce(coords, self.p), self.matrices, axes=1) % self.p

    def from_matrix(self, m: Mat) -> Mat:
        o = self.rep.offsets
        vec = np.concatenate(
            [m[o[v] : o[v + 1], o[v] : o[v + 1]].ravel() for v in range(len(self.rep.dims))]
        )
        return self.space.space.coordinates(vec)

    def to_morphism(self, coords: Mat) -> Morphism:
        return self.space.element(coords)

    def mul(self, a: Mat, b: Mat) -> Mat:
        return self.from_matrix(self.to_matrix(a) @ self.to_matrix(b) % self.p)

    @cached_property
    def one(self) -> Mat:
        return self.from_matrix(identity(self.rep.dim))

    @cached_property
    def radical(self) -> Subspace:
        """Jacobson radical via iterated trace forms, valid in characteristic p."""
        p, m = self.p, self.dim
        n = self.rep.dim
        current = identity(m)
        level = 0
        while p ** (level + 1) <= n:
            level += 1
        for j in range(level + 1):
            if current.shape[0] == 0:
                break
            modulus = p ** (j + 1)
            elements = [self.to_matrix(c) for c in current]
            form = np.zeros((m, len(elements)), dtype=np.int64)
            for k, b in enumerate(self.matrices):
                for i, a in enumerate(elements):
                    power = matrix_power((a @ b) % p, p**j, modulus)
                    form[k, i] = (int(np.trace(power)) % modulus) // p**j
            current = (nullspace(form % p, p) @ current) % p
        return Subspace.span(current, m, p)

    @cached_property
    def _top_positions(self) -> tuple[int, ...]:
        return self.radical.complement_positions()

    @property
    def semisimple_dim(self) -> int:
        return len(self._top_positions)

    def to_top(self, a: Mat) -> Mat:
        """Image in End/rad, coordinates on the positions outside the radical pivots."""
        return self.radical.residual(a)[..., list(self._top_positions)]

    def from_top(self, s: Mat) -> Mat:
        out = np.zeros(self.dim, dtype=np.int64)
        out[list(self._top_positions)] = s
        return out

    def top_mul(self, s: Mat, t: Mat) -> Mat:
        return self.to_top(self.mul(self.from_top(s), self.from_top(t)))

    def top_power(self, s: Mat, e: int) -> Mat:
        result = self.to_top(self.one)
        for _ in range(e):
            result = self.top_mul(result, s)
        return result

    def in_radical(self, a: Mat) -> bool:
        return self.radical.contains(a)

    def is_nilpotent(self, a: Mat) -> bool:
        return not matrix_power(self.to_matrix(a), self.rep.dim, self.p).any()

    @cached_property
    def top_is_commutative(self) -> bool:
        units = identity(self.semisimple_dim)
        return all(
            not ((self.top_mul(u, v) - self.top_mul(v, u)) % self.p).any()
            for u, v in itertools.combinations(units, 2)
        )

    def _frobenius_fixed(self) -> Mat:
        units = identity(self.semisimple_dim)
        cols = [(self.top_power(u, self.p) - u) % self.p for u in units]
        return nullspace(np.array(cols).T, self.p)

    @cached_property
    def is_local(self) -> bool:
        if self.semisimple_dim <= 1:
            return self.semisimple_dim == 1
        if not self.top_is_commutative:
            return False
        return self._frobenius_fixed().shape[0] == 1

    def _top_rank(self, s: Mat) -> int:
        units = identity(self.semisimple_dim)
        return rank(np.array([self.top_mul(u, s) for u in units]), self.p)

    def _zero_divisor(self, rng: np.random.Generator) -> Mat:
        k = self.semisimple_dim
        units = list(identity(k))
        candidates = itertools.chain(
            units,
            ((u + v) % self.p for u, v in itertools.combinations(units, 2)),
            (rng.integers(0, self.p, size=k) for _ in range(RANDOM_TRIES)),
        )
        for z in candidates:
            if z.any() and self._top_rank(z) < k:
                return z
        msg = "No zero divisor found in a non-commutative semisimple algebra"
        raise VerificationError(msg, self.rep)

    def splitting_idempotent(self, seed: int = 0) -> Mat | None:
        """An element of End(X) whose image modulo the radical is a nontrivial idempotent."""
        if self.is_local or self.dim == 0:
            return None
        p = self.p
        one = self.to_top(self.one)
        if self.top_is_commutative:
            for c in self._frobenius_fixed():
                if rank(np.vstack([c, one]), p) != 2:
                    continue
                for lam in range(p):
                    e = (one - self.top_power((c - lam * one) % p, p - 1)) % p
                    if e.any() and ((e - one) % p).any():
                        return self.from_top(e)
            msg = "Commutative top without a splitting idempotent"
            raise VerificationError(msg, self.rep)
        z = self._zero_divisor(np.random.default_rng(seed))
        units = identity(self.semisimple_dim)
        ideal = Subspace.span([self.top_mul(u, z) for u in units], self.semisimple_dim, p)
        # right identity e of the left ideal L = Sz: l e = l for every l in L
        gens = list(ideal.basis)
        lhs = np.vstack(
            [np.array([self.top_mul(lj, li) for li in gens]).T for lj in gens]
        )
        rhs = np.concatenate(gens)
        solution = solve_all(lhs, rhs, p)
        if solution is None:
            msg = "Left ideal without a right identity"
            raise VerificationError(msg, self.rep)
        e = (solution.particular @ np.array(gens)) % p
        return self.from_top(e)


@lru_cache(maxsize=2048)
def end_algebra(rep: Rep) -> EndAlgebra:
    return EndAlgebra(rep)


@dataclass(frozen=True, eq=False)
class Summand:
    rep: Rep
    inclusion: Morphism
    projection: Morphism


@dataclass(frozen=True, eq=False)
class Decomposition:
    rep: Rep
    summands: tuple[Summand, ...]
    classes: tuple[tuple[int, ...], ...]

    def multiplicities(self) -> list[tuple[Rep, int]]:
        return [(self.summands[c[0]].rep, len(c)) for c in self.classes]

    def representatives(self) -> list[Summand]:
        return [self.summands[c[0]] for c in self.classes]

    @property
    def krs_count(self) -> int:
        return len(self.summands)


def fitting_split(x: Rep, phi: Mat) -> tuple[Summand, Summand]:
    """X = Im(phi^N) + Ker(phi^N) for an endomorphism phi given as a global matrix."""
    p = x.p
    psi = matrix_power(phi, max(x.dim, 1), p)
    o = x.offsets
    blocks = [psi[o[v] : o[v + 1], o[v] : o[v + 1]] for v in range(len(x.dims))]
    img = subrep(x, [Subspace.span(b.T, b.shape[0], p) for b in blocks])
    ker = subrep(x, [Subspace.span(nullspace(b, p), b.shape[0], p) for b in blocks])
    proj_img: list[Mat] = []
    proj_ker: list[Mat] = []
    for v, d in enumerate(x.dims):
        k = img.rep.dims[v]
        basis = np.hstack([img.inclusion.maps[v], ker.inclusion.maps[v]])
        inv = mat_inv(basis, p) if d else identity(0)
        proj_img.append(inv[:k])
        proj_ker.append(inv[k:])
    return (
        Summand(img.rep, img.inclusion, Morphism.build(x, img.rep, proj_img)),
        Summand(ker.rep, ker.inclusion, Morphism.build(x, ker.rep, proj_ker)),
    )


def _split(x: Rep, seed: int) -> list[Summand]:
    if x.dim == 0:
        return []
    end = end_algebra(x)
    e = end.splitting_idempotent(seed)
    if e is None:
        return [Summand(x, Morphism.identity(x), Morphism.identity(x))]
    out: list[Summand] = []
    for part in fitting_split(x, end.to_matrix(e)):
        out += [
            Summand(s.rep, part.inclusion @ s.inclusion, s.projection @ part.projection)
            for s in _split(part.rep, seed)
        ]
    return out


def indecomposables_isomorphic(a: Rep, b: Rep) -> bool:
    """Two indecomposables are isomorphic iff some v u is invertible, i.e. outside rad End(a)."""
    if a.dims != b.dims:
        return False
    if a == b:
        return True
    forward = hom(a, b).basis
    backward = hom(b, a).basis
    if not forward or not backward:
        return False
    end = end_algebra(a)
    for u in forward:
        for v in backward:
            if not end.in_radical(end.space.coordinates(v @ u)):
                return True
    return False


@lru_cache(maxsize=2048)
def decompose(x: Rep, seed: int = 0) -> Decomposition:
    summands = _split(x, seed)
    classes: list[list[int]] = []
    for i, s in enumerate(summands):
        for c in classes:
            if indecomposables_isomorphic(summands[c[0]].rep, s.rep):
                c.append(i)
                break
        else:
            classes.append([i])
    logger.debug("decomposed %r into %d summands", x, len(summands))
    return Decomposition(x, tuple(summands), tuple(tuple(c) for c in classes))


def krs_count(x: Rep) -> int:
    return decompose(x).krs_count


def is_indecomposable(x: Rep) -> bool:
    return x.dim > 0 and end_algebra(x).is_local


def is_isomorphic(x: Rep, y: Rep) -> bool:
    if x.algebra is not y.algebra or x.dims != y.dims:
        return False
    if x == y:
        return True
    left = decompose(x).multiplicities()
    right = decompose(y).multiplicities()
    if len(left) != len(right):
        return False
    unmatched = list(right)
    for rep, n in left:
        for k, (other, m) in enumerate(unmatched):
            if n == m and indecomposables_isomorphic(rep, other):
                del unmatched[k]
                break
        else:
            return False
    return True


def find_isomorphic(x: Rep, candidates: "Sequence[Rep]") -> int | None:
    for i, c in enumerate(candidates):
        if is_isomorphic(x, c):
            return i
    return None


def _annihilator(f: Morphism, end: EndAlgebra) -> Mat:
    """Coordinates of all h in End(X) with f h = 0, as rows."""
    if end.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    images = np.array([(f @ h).vector() for h in end.space.basis], dtype=np.int64)
    return nullspace(images.T, f.p)


def is_right_minimal(f: Morphism) -> bool:
    end = end_algebra(f.source)
    return all(end.in_radical(h) for h in _annihilator(f, end))


@dataclass(frozen=True, eq=False)
class Minimalization:
    morphism: Morphism
    inclusion: Morphism
    retraction: Morphism
    intrinsic_kernel: Rep
    kernel_inclusion: Morphism


def right_minimalize(f: Morphism) -> Minimalization:
    """Split off summands of the source that f kills until f is right minimal.

    f = f1 r, where r is the retraction onto the kept summand and f1 = f i.
    """
    p = f.p
    inclusion = Morphism.identity(f.source)
    retraction = Morphism.identity(f.source)
    current = f.source
    while current.dim:
        g = f @ inclusion
        end = end_algebra(current)
        annihilator = _annihilator(g, end)
        tops = [end.to_top(h) for h in annihilator]
        nonzero = [(h, t) for h, t in zip(annihilator, tops, strict=True) if t.any()]
        if not nonzero:
            break
        hs = [h for h, _ in nonzero]
        ts = [t for _, t in nonzero]
        # left identity of the right ideal spanned by the ts
        lhs = np.vstack([np.array([end.top_mul(ti, tj) for ti in ts]).T for tj in ts])
        solution = solve_all(lhs, np.concatenate(ts), p)
        if solution is None:
            msg = "Right ideal without a left identity"
            raise VerificationError(msg, f)
        e = (solution.particular @ np.array(hs)) % p
        _, kept = fitting_split(current, end.to_matrix(e))
        inclusion = inclusion @ kept.inclusion
        retraction = kept.projection @ retraction
        current = kept.rep
    f1 = f @ inclusion
    ker = kernel(f1)
    return Minimalization(f1, inclusion, retraction, ker.rep, ker.inclusion)


def common_radical_check(end: EndAlgebra) -> bool:
    """rad is a two-sided ideal of nilpotents."""
    rad = end.radical
    for a in rad.basis:
        if not end.is_nilpotent(a):
            return False
        for b in identity(end.dim):
            if not (rad.contains(end.mul(a, b)) and rad.contains(end.mul(b, a))):
                return False
    return True


def radical_power_dim(end: EndAlgebra, power: int) -> int:
    """dim rad^power."""
    space = Subspace.full(end.dim, end.p)
    for _ in range(power):
        products = [end.mul(a, b) for a in space.basis for b in end.radical.basis]
        space = Subspace.span(products, end.dim, end.p)
    return space.dim


def commutes(end: EndAlgebra) -> bool:
    units = identity(end.dim)
    return all(
        not ((end.mul(a, b) - end.mul(b, a)) % end.p).any()
        for a, b in itertools.combinations(units, 2)
    )

