# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The Kronecker algebra: its indecomposables, tubes, defect and factorization shapes.

Tubes are indexed by monic irreducible polynomials over F_p together with the
point at infinity. The regular module of a finite point pi and regular length
t has x = 1 and y the companion matrix of pi^t; at infinity x is a nilpotent
Jordan block and y = 1.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import StrEnum, auto
from functools import cached_property
from typing import TYPE_CHECKING

import galois
import numpy as np

from .algebra import (
    Algebra,
    AlgebraPresentation,
    Arrow,
    Quiver,
    build_algebra,
    injective,
    projective,
)
from .ar import ext1
from .config import Caps
from .determine import gamma_module
from .errors import AlgebraMismatchError, PreconditionError, VerificationError
from .factor import Check, FactorizationLattice, enumerate_classes
from .ffmat import Mat, identity, mat_inv, zeros
from .krs import commutes, decompose, end_algebra, is_indecomposable, is_isomorphic
from .lattice import ShapeClass, ShapeKind, classify_shape, module_lattice, submodule_lattice
from .rep import Morphism, Rep, copair, direct_sum, hom, image, subrep

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

logger = logging.getLogger(__name__)


def kronecker_algebra(p: int, arrows: int = 2) -> Algebra:
    """Vertices a (sink) and b (source) with `arrows` parallel arrows b -> a."""
    names = ["x", "y", "z"] if arrows <= 3 else [f"x{k}" for k in range(1, arrows + 1)]
    quiver = Quiver(("a", "b"), tuple(Arrow(n, "b", "a") for n in names[:arrows]))
    return build_algebra(AlgebraPresentation(p, quiver))


@dataclass(frozen=True)
class KroneckerPoint:
    """A tube: a monic irreducible polynomial, or None for the point at infinity."""

    poly: galois.Poly | None = None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else int(self.poly.degree)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    def __str__(self) -> str:
        return "inf" if self.poly is None else str(self.poly)


class ModuleKind(StrEnum):
    preprojective = auto()
    regular = auto()
    preinjective = auto()


@dataclass(frozen=True)
class Classification:
    kind: ModuleKind
    index: int
    point: KroneckerPoint | None = None

    def __str__(self) -> str:
        match self.kind:
            case ModuleKind.preprojective:
                return f"P_{self.index}"
            case ModuleKind.preinjective:
                return f"Q_{self.index}"
            case ModuleKind.regular:
                return f"R[{self.point}]({self.index})"


def _companion(poly: galois.Poly, p: int) -> Mat:
    # coefficients come highest degree first
    coeffs = [int(c) for c in poly.coeffs][::-1]
    n = len(coeffs) - 1
    m = zeros(n, n)
    m[1:, :-1] = identity(n - 1)
    m[:, -1] = [(-c) % p for c in coeffs[:n]]
    return m


class KroneckerCatalog:
    """Indecomposable modules of a two-arrow Kronecker algebra, in normal forms."""

    def __init__(self, algebra: Algebra) -> None:
        arrows = algebra.arrows
        if len(algebra.vertices) != 2 or len(arrows) != 2:
            msg = "The Kronecker quiver has two vertices and two arrows"
            raise AlgebraMismatchError(msg)
        if arrows[0].source != arrows[1].source or arrows[0].target != arrows[1].target:
            msg = "Kronecker arrows must be parallel"
            raise AlgebraMismatchError(msg)
        if arrows[0].source == arrows[0].target or algebra.presentation.relations:
            msg = "Not a Kronecker algebra"
            raise AlgebraMismatchError(msg)
        self.algebra = algebra
        self.p = algebra.p
        self.sink = arrows[0].target
        self.source = arrows[0].source
        self.field = galois.GF(self.p)

    def _rep(self, sink_dim: int, source_dim: int, x: Mat, y: Mat) -> Rep:
        dims = [0, 0]
        dims[self.algebra.vertex_index(self.sink)] = sink_dim
        dims[self.algebra.vertex_index(self.source)] = source_dim
        return Rep.build(self.algebra, dims, [x, y])

    def check(self, m: Rep) -> None:
        if m.algebra is not self.algebra:
            msg = "Module does not live over this Kronecker algebra"
            raise AlgebraMismatchError(msg)

    def pre_projective(self, i: int) -> Rep:
        """P_i, of dimension i + 1 at the sink and i at the source."""
        if i < 0:
            msg = "Preprojective index must be nonnegative"
            raise PreconditionError(msg)
        eye = identity(i)
        x = np.vstack([eye, zeros(1, i)])
        y = np.vstack([zeros(1, i), eye])
        return self._rep(i + 1, i, x, y)

    def pre_injective(self, j: int) -> Rep:
        if j < 0:
            msg = "Preinjective index must be nonnegative"
            raise PreconditionError(msg)
        eye = identity(j)
        x = np.hstack([eye, zeros(j, 1)])
        y = np.hstack([zeros(j, 1), eye])
        return self._rep(j, j + 1, x, y)

    def regular(self, point: KroneckerPoint, t: int) -> Rep:
        if t < 1:
            msg = "Regular length must be positive"
            raise PreconditionError(msg)
        if point.poly is None:
            jordan = zeros(t, t)
            jordan[1:, :-1] = identity(t - 1)
            return self._rep(t, t, jordan, identity(t))
        n = t * point.degree
        return self._rep(n, n, identity(n), _companion(point.poly**t, self.p))

    def point(self, text: str) -> KroneckerPoint:
        """`inf`, or a constant c naming the degree-one point T - c."""
        if text == "inf":
            return KroneckerPoint()
        try:
            value = int(text) % self.p
        except ValueError:
            msg = f"Unknown tube {text!r}: use inf or an element of F_{self.p}"
            raise PreconditionError(msg) from None
        return KroneckerPoint(galois.Poly([1, (-value) % self.p], field=self.field))

    def points(self, max_degree: int = 1) -> list[KroneckerPoint]:
        out = [KroneckerPoint()]
        for d in range(1, max_degree + 1):
            out += [KroneckerPoint(poly) for poly in galois.irreducible_polys(self.p, d)]
        return out

    @cached_property
    def p0(self) -> Rep:
        return projective(self.algebra, self.sink)

    @cached_property
    def q0(self) -> Rep:
        return injective(self.algebra, self.source)

    def defect(self, m: Rep) -> int:
        self.check(m)
        return hom(m, self.q0).dim - hom(self.p0, m).dim

    def tube_of(self, m: Rep) -> KroneckerPoint:
        """Tube of an indecomposable regular module."""
        x, y = m.action
        n = x.shape[0]
        if n == 0 or n != x.shape[1]:
            msg = f"{m!r} is not regular"
            raise PreconditionError(msg)
        try:
            inverse = mat_inv(x, self.p)
        except PreconditionError:
            return KroneckerPoint()
        charpoly = self.field((y @ inverse) % self.p).characteristic_poly()
        factors, _ = charpoly.factors()
        if len(factors) != 1:
            msg = f"{m!r} is not indecomposable regular"
            raise PreconditionError(msg)
        return KroneckerPoint(factors[0])

    def classify(self, m: Rep) -> Classification:
        """Kind and index of an indecomposable module."""
        if not is_indecomposable(m):
            msg = f"{m!r} is not indecomposable"
            raise PreconditionError(msg)
        sink = m.vertex_dim(self.sink)
        source = m.vertex_dim(self.source)
        match self.defect(m):
            case -1:
                return Classification(ModuleKind.preprojective, source)
            case 1:
                return Classification(ModuleKind.preinjective, sink)
            case 0:
                point = self.tube_of(m)
                return Classification(ModuleKind.regular, sink // point.degree, point)
            case other:
                msg = f"Indecomposable with defect {other}"
                raise VerificationError(msg, m)

    def is_regular(self, m: Rep) -> bool:
        return all(self.defect(s.rep) == 0 for s in decompose(m).summands)

    def regular_socle(self, m: Rep) -> dict[str, int]:
        """Multiplicity of each simple regular module in the regular socle of m."""
        out: dict[str, int] = {}
        bound = m.vertex_dim(self.sink)
        for point in self.points(max(1, bound)):
            if point.degree > bound:
                continue
            r = self.regular(point, 1)
            maps = hom(r, m).basis
            if not maps:
                continue
            n = image(copair(list(maps))).rep.dim // r.dim
            if n:
                out[str(point)] = n
        return out

    def is_strongly_regular(self, m: Rep) -> bool:
        """Four equivalent conditions, all computed; disagreement is a failed certificate."""
        if m.dim == 0 or not self.is_regular(m):
            msg = f"{m!r} is not a nonzero regular module"
            raise PreconditionError(msg)
        parts = [s.rep for s in decompose(m).summands]
        no_ext = all(
            ext1(a, b).dim == 0
            for (i, a), (j, b) in itertools.product(enumerate(parts), repeat=2)
            if i != j
        )
        tubes = [str(self.tube_of(s)) for s in parts]
        distinct_tubes = len(set(tubes)) == len(tubes)
        socle_free = all(n <= 1 for n in self.regular_socle(m).values())
        commutative = commutes(end_algebra(m))
        if len({no_ext, distinct_tubes, socle_free, commutative}) != 1:
            msg = (
                f"Strong regularity tests disagree: Ext {no_ext}, tubes {distinct_tubes}, "
                f"socle {socle_free}, End commutative {commutative}"
            )
            raise VerificationError(msg, m)
        return commutative

    def universal_map(self, i: int, j: int) -> Morphism:
        """P_(i-1)^(i+j-1) -> Q_j whose components are a basis of Hom(P_(i-1), Q_j)."""
        if i < 1:
            msg = "The universal map needs i >= 1"
            raise PreconditionError(msg)
        source = self.pre_projective(i - 1)
        target = self.pre_injective(j)
        maps = list(hom(source, target).basis)
        if len(maps) != i + j - 1:
            msg = f"dim Hom(P_{i - 1}, Q_{j}) = {len(maps)}, expected {i + j - 1}"
            raise VerificationError(msg)
        if not maps:
            return Morphism.zero(Rep.zero(self.algebra), target)
        return copair(maps, direct_sum([source] * len(maps)))


@dataclass(frozen=True, eq=False)
class RegularSum:
    parts: tuple[tuple[KroneckerPoint, int], ...]
    rep: Rep

    def __str__(self) -> str:
        return " ++ ".join(f"R[{point}]({t})" for point, t in self.parts)


def enumerate_strongly_regular(catalog: KroneckerCatalog, length: int) -> list[RegularSum]:
    """Sums of regular modules from pairwise different tubes with total dimension `length`."""
    if length <= 0 or length % 2:
        return []
    half = length // 2
    points = catalog.points(half)
    out: list[RegularSum] = []

    def extend(start: int, left: int, parts: list[tuple[KroneckerPoint, int]]) -> None:
        if left == 0:
            rep = direct_sum([catalog.regular(pt, t) for pt, t in parts]).rep
            out.append(RegularSum(tuple(parts), rep))
            return
        for k in range(start, len(points)):
            pt = points[k]
            for t in range(1, left // pt.degree + 1):
                extend(k + 1, left - t * pt.degree, [*parts, (pt, t)])

    extend(0, half, [])
    return out


@dataclass
class SigmaReport:
    length: int
    sources: list[Rep]
    expected: list[RegularSum]
    bijective: bool


def sigma_check(
    catalog: KroneckerCatalog, c: Rep, y: Rep, caps: Caps | None = None
) -> SigmaReport:
    """Length-one classes for C preprojective and Y preinjective against strongly regular modules.

    For C = P_0 the maximal submodules of Y take the place of the classes.
    """
    kc, ky = catalog.classify(c), catalog.classify(y)
    if kc.kind is not ModuleKind.preprojective or ky.kind is not ModuleKind.preinjective:
        msg = "sigma needs C preprojective and Y preinjective"
        raise PreconditionError(msg)
    if kc.index == 0:
        length = y.dim - 1
        lattice = module_lattice(y, caps)
        sources = [
            subrep(y, y.graded_subspaces(lattice.nodes[i].space)).rep
            for i in sorted(lattice.graph.predecessors(lattice.top))
        ]
    else:
        length = c.dim + y.dim - 4
        fl = enumerate_classes(c, y, caps)
        sources = [k.source for k in fl.classes if k.c_length == 1]
    expected = enumerate_strongly_regular(catalog, length)
    bijective = _bijects(catalog, sources, expected)
    logger.info("sigma %s -> %s: %d sources, bijective %s", kc, ky, len(sources), bijective)
    return SigmaReport(length, sources, expected, bijective)


def _bijects(
    catalog: KroneckerCatalog, sources: "Sequence[Rep]", expected: "Sequence[RegularSum]"
) -> bool:
    if len(sources) != len(expected):
        return False
    unmatched = list(expected)
    for s in sources:
        if s.dim == 0 or not catalog.is_regular(s) or not catalog.is_strongly_regular(s):
            return False
        k = next((k for k, e in enumerate(unmatched) if is_isomorphic(s, e.rep)), None)
        if k is None:
            return False
        del unmatched[k]
    return True


@dataclass(frozen=True)
class TableRow:
    row: int
    c: str
    y: str
    hom_dim: int
    expected_hom_dim: int
    shape: ShapeClass
    expected: ShapeClass

    @property
    def passed(self) -> bool:
        e = self.expected
        return self.hom_dim == self.expected_hom_dim and self.shape.matches(e.kind, e.d, e.q)


@dataclass(frozen=True, eq=False)
class TableInstance:
    row: int
    c: tuple[Rep, str]
    y: tuple[Rep, str]
    hom_dim: int
    shape: ShapeClass


def table_instances(catalog: KroneckerCatalog, max_index: int) -> "Iterator[TableInstance]":
    """Every (C, Y) of the six rows with indices and regular lengths up to `max_index`.

    Regular modules are taken from every tube at a rational point.
    """
    p = catalog.p
    pp = {i: (catalog.pre_projective(i), f"P_{i}") for i in range(max_index + 1)}
    pi = {j: (catalog.pre_injective(j), f"Q_{j}") for j in range(max_index + 1)}
    tubes = catalog.points(1)
    rr = {
        (str(pt), t): (catalog.regular(pt, t), f"R[{pt}]({t})")
        for pt in tubes
        for t in range(1, max_index + 1)
    }

    def geometry(d: int) -> ShapeClass:
        return ShapeClass(ShapeKind.geometry, d, p)

    def chain(d: int) -> ShapeClass:
        return ShapeClass(ShapeKind.chain, d)

    indices = range(max_index + 1)
    lengths = range(1, max_index + 1)
    for i, j in itertools.product(indices, indices):
        if i <= j:
            yield TableInstance(1, pp[i], pp[j], j - i + 1, geometry(j - i + 1))
    for i, pt, t in itertools.product(indices, tubes, lengths):
        yield TableInstance(2, pp[i], rr[str(pt), t], t, geometry(t))
    for i, j in itertools.product(indices, indices):
        if i + j <= max_index:
            yield TableInstance(3, pp[i], pi[j], i + j, geometry(i + j))
    for pt, s, t in itertools.product(tubes, lengths, lengths):
        yield TableInstance(4, rr[str(pt), s], rr[str(pt), t], min(s, t), chain(min(s, t)))
    for pt, s, j in itertools.product(tubes, lengths, indices):
        yield TableInstance(5, rr[str(pt), s], pi[j], s, chain(s))
    for i, j in itertools.product(indices, indices):
        if i >= j:
            yield TableInstance(6, pi[i], pi[j], i - j + 1, geometry(i - j + 1))


def check_instance(instance: TableInstance, caps: Caps | None = None) -> TableRow:
    (c, c_name), (y, y_name) = instance.c, instance.y
    gm = gamma_module(c, y)
    lattice = submodule_lattice(gm, caps)
    expected = instance.shape
    shape = classify_shape(lattice, expected.q)
    logger.debug("row %d %s -> %s: %s", instance.row, c_name, y_name, shape)
    return TableRow(instance.row, c_name, y_name, gm.dim, instance.hom_dim, shape, expected)


def verify_table(
    catalog: KroneckerCatalog, max_index: int, caps: Caps | None = None
) -> list[TableRow]:
    return [check_instance(t, caps) for t in table_instances(catalog, max_index)]


def higher_degree_row(catalog: KroneckerCatalog, s: int = 1, j: int = 0) -> TableRow:
    """R(s) -> Q_j on a degree-two tube: a chain of length s whose factors have dimension 2."""
    point = next(pt for pt in catalog.points(2) if pt.degree == 2)
    c = (catalog.regular(point, s), f"R[{point}]({s})")
    y = (catalog.pre_injective(j), f"Q_{j}")
    return check_instance(TableInstance(5, c, y, 2 * s, ShapeClass(ShapeKind.chain, s)))


def trichotomy_checks(catalog: KroneckerCatalog, fl: FactorizationLattice) -> list[Check]:
    """Summands of every source obey the preprojective, tube and preinjective rules."""
    kc, ky = catalog.classify(fl.c), catalog.classify(fl.y)
    out: list[Check] = []
    for k in fl.classes:
        for summand, _ in decompose(k.source).multiplicities():
            km = catalog.classify(summand)
            out.append(Check("trichotomy", f"class {k.node}: {km}", allowed_summand(kc, ky, km)))
    return out


def _same_tube(a: Classification, b: Classification) -> bool:
    return a.kind is b.kind is ModuleKind.regular and str(a.point) == str(b.point)


def allowed_summand(kc: Classification, ky: Classification, km: Classification) -> bool:
    """Whether a summand of kind `km` may occur in a source for the pair (C, Y).

    Pairs with Hom(C, Y) = 0 only have the zero class, so no summand is allowed there.
    """
    pre, inj = ModuleKind.preprojective, ModuleKind.preinjective
    match kc.kind, ky.kind:
        case _, ModuleKind.preprojective:
            return kc.kind is pre and km.kind is pre
        case ModuleKind.preinjective, ModuleKind.preinjective:
            return km.kind is inj
        case ModuleKind.preinjective, ModuleKind.regular:
            return False
        case ModuleKind.regular, ModuleKind.regular:
            return _same_tube(kc, ky) and _same_tube(km, ky)
        case ModuleKind.preprojective, ModuleKind.regular:
            return km.kind is pre or _same_tube(km, ky)
        case ModuleKind.regular, ModuleKind.preinjective:
            return km.kind is inj or _same_tube(km, kc)
        case ModuleKind.preprojective, ModuleKind.preinjective:
            # no restriction: any kind occurs in some source
            return True
    raise ValueError(f"unclassified pair {kc}, {ky}")
