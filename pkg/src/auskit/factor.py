# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Right factorization lattices: enumeration of classes and their certificates.

Every right minimal, right C-determined map f: X -> Y factors as an epimorphism
onto its image Y' followed by the inclusion Y' -> Y, and its kernel lies in
add tau C. Candidates are therefore realized as extensions of submodules Y' by
sums of summands of tau C, minimalized, filtered by the determiner formula and
keyed by eta. The lattice of Gamma-submodules is computed independently, so a
missing node or a collision is a failed certificate rather than a silent gap.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .algebra import dual_morphism, standard_modules
from .ar import (
    ShortExactSequence,
    class_of_sequence,
    ext1,
    hom_through_proj,
    is_projective,
    realize_sum,
    tau,
)
from .config import Caps
from .determine import (
    GammaModule,
    definitional_check,
    eta,
    gamma_module,
    is_right_determined,
    minimal_determiner,
    random_probes,
)
from .errors import NotDeterminedError, PreconditionError, TargetMismatchError, VerificationError
from .ffmat import Subspace, enumerate_subspaces
from .krs import (
    decompose,
    end_algebra,
    is_indecomposable,
    is_isomorphic,
    is_right_minimal,
    krs_count,
    right_minimalize,
)
from .lattice import FiniteLattice, Node, module_lattice, strata_counts, submodule_lattice
from .maps import meet_map, right_equivalent, right_leq
from .rep import Morphism, Rep, copair, direct_sum, hom, image, kernel, pair, radical, subrep

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping, Sequence

    from .ar import ExtGroup

logger = logging.getLogger(__name__)

ALL_PAIRS_LIMIT = 30


@dataclass(frozen=True)
class Check:
    name: str
    subject: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True, eq=False)
class REClass:
    """A right equivalence class, held by its right minimal representative."""

    node: int
    morphism: Morphism
    eta: Subspace
    c_length: int
    c_type: dict[str, int]
    source_description: str
    is_epi: bool
    is_mono: bool

    @property
    def source(self) -> Rep:
        return self.morphism.source


@dataclass
class BijectionReport:
    nodes: int = 0
    candidates: int = 0
    determined: int = 0
    injectivity_checks: int = 0
    order_pairs: int = 0
    meet_pairs: int = 0
    checks: list[Check] = field(default_factory=list[Check])

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True, eq=False)
class FactorizationLattice:
    c: Rep
    y: Rep
    gamma: GammaModule
    lattice: FiniteLattice
    classes: tuple[REClass, ...]
    report: BijectionReport

    def __len__(self) -> int:
        return len(self.classes)

    def flags(self) -> dict[int, dict[str, bool]]:
        return {k.node: {"is_epi": k.is_epi, "is_mono": k.is_mono} for k in self.classes}

    def labeler(self, node: Node) -> str:
        return self.classes[node.index].source_description

    def class_of(self, f: Morphism) -> REClass:
        return self.classes[self.lattice.find(eta(f, self.gamma))]


def describe_module(rep: Rep, names: "Mapping[str, Rep] | None" = None) -> str:
    """Decomposition as a module expression, naming summands where possible."""
    if rep.dim == 0:
        return "0"
    known = dict(names) if names is not None else standard_modules(rep.algebra)
    parts: list[str] = []
    for summand, n in decompose(rep).multiplicities():
        label = next((k for k, v in known.items() if is_isomorphic(summand, v)), None)
        if label is None:
            label = "M[" + ",".join(map(str, summand.dims)) + "]"
        parts.append(label if n == 1 else f"{label}^{n}")
    return " ++ ".join(parts)


def _sort_key(f: Morphism) -> tuple[int, tuple[int, ...], bytes, bytes]:
    return (f.source.dim, f.source.dims, f.source.key[2], f.vector().tobytes())


def candidates(c: Rep, y: Rep, caps: Caps) -> "Iterator[Morphism]":
    """Maps u e with u: Y' -> Y a submodule inclusion and e an extension by summands of tau c."""
    kernels = [s.rep for s in decompose(tau(c)).representatives()] if c.dim else []
    for node in module_lattice(y, caps).nodes:
        u = subrep(y, y.graded_subspaces(node.space)).inclusion
        yield u
        if not kernels:
            continue
        groups = [ext1(u.source, k) for k in kernels]
        choices = [list(_class_subspaces(g, caps)) for g in groups]
        for picked in itertools.product(*choices):
            parts = [(g, v) for g, space in zip(groups, picked, strict=True) for v in space.basis]
            if parts:
                yield u @ realize_sum(parts).projection


def _class_subspaces(ext: "ExtGroup", caps: Caps) -> "Iterator[Subspace]":
    limit = ext.dim if caps.max_ext_mult is None else min(caps.max_ext_mult, ext.dim)
    for space in enumerate_subspaces(ext.dim, ext.k.p, caps.max_subspaces):
        if space.dim <= limit:
            yield space


def _make_class(
    f: Morphism, node: int, lattice: FiniteLattice, names: "Mapping[str, Rep] | None"
) -> REClass:
    quotient = lattice.quotient_dimvec(node)
    return REClass(
        node,
        f,
        lattice.nodes[node].space,
        sum(quotient),
        dict(zip(lattice.labels, quotient, strict=True)),
        describe_module(f.source, names),
        f.is_epi,
        f.is_mono,
    )


def enumerate_classes(
    c: Rep,
    y: Rep,
    caps: Caps | None = None,
    names: "Mapping[str, Rep] | None" = None,
) -> FactorizationLattice:
    caps = caps or Caps()
    gm = gamma_module(c, y, names)
    lattice = submodule_lattice(gm, caps)
    report = BijectionReport(nodes=len(lattice))
    best: dict[int, Morphism] = {}
    extra: Counter[int] = Counter()
    for candidate in candidates(c, y, caps):
        report.candidates += 1
        f = right_minimalize(candidate).morphism
        if not is_right_determined(f, c):
            continue
        report.determined += 1
        node = lattice.find(eta(f, gm))
        held = best.get(node)
        if held is None:
            best[node] = f
            continue
        if extra[node] < caps.injectivity_samples:
            extra[node] += 1
            report.injectivity_checks += 1
            if not right_equivalent(f, held):
                msg = f"Two inequivalent maps share the eta node {node}"
                raise VerificationError(msg, (f, held))
        if _sort_key(f) < _sort_key(held):
            best[node] = f
    missing = [i for i in range(len(lattice)) if i not in best]
    report.checks.append(
        Check("surjectivity", "eta", not missing, f"missing nodes {missing}" if missing else "")
    )
    if missing:
        msg = f"No class realizes {len(missing)} of {len(lattice)} submodules"
        raise VerificationError(msg, [lattice.nodes[i].space for i in missing])
    classes = tuple(_make_class(best[i], i, lattice, names) for i in range(len(lattice)))
    fl = FactorizationLattice(c, y, gm, lattice, classes, report)
    _certify_order(fl)
    _certify_meets(fl, np.random.default_rng(caps.seed), caps.meet_samples)
    logger.info(
        "%d classes from %d candidates (%d determined)",
        len(classes),
        report.candidates,
        report.determined,
    )
    return fl


def _certify_order(fl: FactorizationLattice) -> None:
    lattice = fl.lattice
    n = len(lattice)
    if n <= ALL_PAIRS_LIMIT:
        pairs = list(itertools.permutations(range(n), 2))
    else:
        pairs = [*lattice.covers, *((b, a) for a, b in lattice.covers)]
    for a, b in pairs:
        fa, fb = fl.classes[a].morphism, fl.classes[b].morphism
        if (right_leq(fa, fb) is not None) != lattice.leq(a, b):
            msg = f"Order of classes {a} and {b} disagrees with inclusion of their eta images"
            raise VerificationError(msg, (fa, fb))
    fl.report.order_pairs = len(pairs)
    fl.report.checks.append(Check("order", "right_leq vs inclusion", True, f"{len(pairs)} pairs"))


def _certify_meets(fl: FactorizationLattice, rng: np.random.Generator, samples: int) -> None:
    lattice = fl.lattice
    n = len(lattice)
    pairs = (
        list(itertools.combinations(range(n), 2))
        if n * (n - 1) // 2 <= samples
        else [tuple(int(x) for x in rng.choice(n, size=2, replace=False)) for _ in range(samples)]
    )
    for a, b in pairs:
        m = meet_map(fl.classes[a].morphism, fl.classes[b].morphism)
        if eta(m, fl.gamma) != lattice.nodes[lattice.meet(a, b)].space:
            msg = f"eta does not preserve the meet of classes {a} and {b}"
            raise VerificationError(msg, (a, b))
    fl.report.meet_pairs = len(pairs)
    fl.report.checks.append(Check("meets", "eta", True, f"{len(pairs)} pairs"))


def _require_determined(f: Morphism, gm: GammaModule) -> None:
    if not is_right_determined(f, gm.c):
        msg = "Map is not right determined by C"
        raise NotDeterminedError(msg)


def c_type(f: Morphism, gm: GammaModule) -> dict[str, int]:
    """Composition factors of Hom(C, Y) / eta(f)."""
    _require_determined(f, gm)
    image_factors = gm.composition(eta(f, gm))
    return {
        label: t - s for label, t, s in zip(gm.label_names(), gm.total, image_factors, strict=True)
    }


def c_length(f: Morphism, gm: GammaModule) -> int:
    return sum(c_type(f, gm).values())


def zero_class(fl: FactorizationLattice) -> REClass:
    return fl.classes[fl.lattice.bottom]


def epi_classes(fl: FactorizationLattice) -> list[REClass]:
    """Classes whose eta contains the maps factoring through projectives.

    These must be exactly the epimorphic classes, and they must form a coideal
    closed under meets.
    """
    through = hom_through_proj(fl.c, fl.y)
    chosen = [k for k in fl.classes if through <= k.eta]
    for k in fl.classes:
        if (k in chosen) != k.is_epi:
            msg = f"Class {k.node} is epi={k.is_epi} but the criterion says otherwise"
            raise VerificationError(msg, k.morphism)
    nodes = {k.node for k in chosen}
    lattice = fl.lattice
    for a in nodes:
        for b in range(len(lattice)):
            if lattice.leq(a, b) and b not in nodes:
                msg = f"Epi classes are not upward closed at {a} <= {b}"
                raise VerificationError(msg, (a, b))
        for b in nodes:
            if lattice.meet(a, b) not in nodes:
                msg = f"Epi classes are not closed under the meet of {a} and {b}"
                raise VerificationError(msg, (a, b))
    return chosen


def length_one_checks(fl: FactorizationLattice) -> list[Check]:
    """Classes of C-length one: maximal eta, and for epis the kernel and Ext-socle tests."""
    lattice = fl.lattice
    c_nonprojective = is_indecomposable(fl.c) and not is_projective(fl.c)
    tau_c = tau(fl.c) if c_nonprojective else None
    out: list[Check] = []
    for k in fl.classes:
        if k.c_length != 1:
            continue
        subject = f"class {k.node} ({k.source_description})"
        maximal = lattice.graph.has_edge(k.node, lattice.top)
        out.append(Check("eta maximal", subject, maximal))
        if not k.is_epi or tau_c is None:
            continue
        ker = kernel(k.morphism)
        out.append(Check("kernel is tau C", subject, is_isomorphic(ker.rep, tau_c)))
        ext, cls = class_of_sequence(ShortExactSequence(ker.inclusion, k.morphism))
        in_socle = bool(cls.any()) and ext.socle.contains(cls)
        out.append(Check("class in Ext socle", subject, in_socle))
    return out


def kernel_count_checks(fl: FactorizationLattice) -> list[Check]:
    """C-length equals the number of kernel summands, when End(tau C) is semisimple
    and no map C -> Y factors through a projective."""
    t = tau(fl.c)
    if end_algebra(t).radical.dim or hom_through_proj(fl.c, fl.y).dim:
        logger.info("kernel count formula does not apply to this instance")
        return []
    return [
        Check(
            "length = kernel summands",
            f"class {k.node}",
            k.c_length == krs_count(kernel(k.morphism).rep),
            f"{k.c_length} vs {krs_count(kernel(k.morphism).rep)}",
        )
        for k in fl.classes
    ]


def image_recovery_checks(fl: FactorizationLattice, caps: Caps | None = None) -> list[Check]:
    """The image of each class is the largest Y' whose projective-factoring maps lie in eta."""
    y, gm = fl.y, fl.gamma
    subs = module_lattice(y, caps)
    inside: list[tuple[int, Subspace]] = []
    for node in subs.nodes:
        sub = subrep(y, y.graded_subspaces(node.space))
        maps = [sub.inclusion @ g for g in _through_basis(fl.c, sub.rep)]
        inside.append((node.index, gm.homs.span(maps)))
    out: list[Check] = []
    for k in fl.classes:
        admissible = [subs.nodes[i].space for i, s in inside if s <= k.eta]
        largest = max(admissible, key=lambda s: s.dim)
        actual = y.total_subspace(
            [Subspace.span(m.T, m.shape[0], y.p) for m in image(k.morphism).inclusion.maps]
        )
        out.append(Check("image recovery", f"class {k.node}", largest == actual))
    return out


def _through_basis(c: Rep, y: Rep) -> list[Morphism]:
    space = hom(c, y)
    return [space.element(v) for v in hom_through_proj(c, y).basis]


def strata_checks(fl: FactorizationLattice) -> list[Check]:
    by_type = Counter(tuple(k.c_type.values()) for k in fl.classes)
    same = by_type == strata_counts(fl.lattice)
    return [Check("strata", "c_type vs quotient dimension vectors", same)]


def rz_witness(f: Morphism, g: Morphism, h: Morphism) -> ShortExactSequence:
    """0 -> K -> X + K' -> X' -> 0 for epis f = g h with isomorphic kernels."""
    if f.target != g.target:
        msg = "Maps end in different modules"
        raise TargetMismatchError(msg)
    if g @ h != f:
        msg = "h is not a factorization witness"
        raise PreconditionError(msg)
    if not (f.is_epi and g.is_epi):
        msg = "Both maps must be epimorphisms"
        raise PreconditionError(msg)
    u, v = kernel(f), kernel(g)
    if not is_isomorphic(u.rep, v.rep):
        msg = "Kernels are not isomorphic"
        raise PreconditionError(msg)
    restricted = right_leq(h @ u.inclusion, v.inclusion)
    if restricted is None:
        msg = "h does not map the kernel into the kernel"
        raise PreconditionError(msg)
    middle = direct_sum([f.source, v.rep])
    inclusion = pair([u.inclusion, -restricted], middle)
    projection = copair([h, v.inclusion], middle)
    ses = ShortExactSequence(inclusion, projection)
    if not ses.is_exact():
        msg = "Riedtmann-Zwara sequence is not exact"
        raise VerificationError(msg, ses)
    return ses


def is_cofork(family: "Sequence[Morphism]") -> bool:
    """Whether every direct-sum map of the family is right minimal.

    For indecomposable sources this reads: no g_i lies in the span of the
    g_j composed with maps M_i -> M_j, j != i.
    """
    if not family:
        msg = "Empty family"
        raise PreconditionError(msg)
    target = family[0].target
    for g in family:
        if g.target != target:
            msg = "Family members end in different modules"
            raise TargetMismatchError(msg)
    if not all(is_indecomposable(g.source) for g in family):
        return is_right_minimal(copair(list(family)))
    for i, g in enumerate(family):
        space = hom(g.source, target)
        others = [
            family[j] @ phi
            for j in range(len(family))
            if j != i
            for phi in hom(g.source, family[j].source).basis
        ]
        if g.is_zero or space.span(others).contains(space.coordinates(g)):
            return False
    return True


def is_fork(family: "Sequence[Morphism]") -> bool:
    """Maps out of a common module; the dual of a cofork."""
    return is_cofork([dual_morphism(g) for g in family])


def min_right_almost_split(y: Rep) -> Morphism:
    if not is_indecomposable(y):
        msg = f"{y!r} is not indecomposable"
        raise PreconditionError(msg)
    if is_projective(y):
        return radical(y).inclusion
    ext = ext1(y, tau(y))
    if ext.socle.dim == 0:
        msg = "Ext^1(Y, tau Y) has zero socle"
        raise VerificationError(msg, y)
    return realize_sum([(ext, ext.socle.basis[0])]).projection


@dataclass
class MonotonicityReport:
    embedded: bool
    meets_preserved: bool
    broken_joins: list[tuple[int, int]]


def monotonicity_check(
    c: Rep, extra: Rep, y: Rep, caps: Caps | None = None
) -> MonotonicityReport:
    """Classes for C reappear for C + extra, meets are kept, joins may break."""
    small = enumerate_classes(c, y, caps)
    big = enumerate_classes(direct_sum([c, extra]).rep, y, caps)
    embedded = True
    for k in small.classes:
        if not right_equivalent(k.morphism, big.class_of(k.morphism).morphism):
            embedded = False
    meets = True
    broken: list[tuple[int, int]] = []
    for a, b in itertools.combinations(range(len(small)), 2):
        fa, fb = small.classes[a].morphism, small.classes[b].morphism
        if big.class_of(meet_map(fa, fb)).node != big.lattice.meet(
            big.class_of(fa).node, big.class_of(fb).node
        ):
            meets = False
        joined = small.classes[small.lattice.join(a, b)].morphism
        expected = big.lattice.join(big.class_of(fa).node, big.class_of(fb).node)
        if big.class_of(joined).node != expected:
            broken.append((a, b))
    return MonotonicityReport(embedded, meets, broken)


def determiner_checks(
    fl: FactorizationLattice, caps: Caps | None = None, probe: bool = False
) -> list[Check]:
    """The determiner formula against every class.

    Each class is determined by C, every summand of C(f) maps nonzero to Y, and
    dropping a summand of C(f) from C loses the class. With `probe`, random maps
    into Y also test the definition of right determination directly.
    """
    caps = caps or Caps()
    available = [s.rep for s in decompose(fl.c).representatives()]
    rng = np.random.default_rng(caps.seed)
    out: list[Check] = []
    for k in fl.classes:
        f, subject = k.morphism, f"class {k.node}"
        out.append(Check("determined by C", subject, is_right_determined(f, fl.c)))
        for s in minimal_determiner(f).summands:
            out.append(Check("Hom(summand, Y) nonzero", subject, hom(s.rep, fl.y).dim > 0))
            rest = [r for r in available if not is_isomorphic(r, s.rep)]
            smaller = direct_sum(rest, fl.c.algebra).rep
            out.append(
                Check("summand needed", subject, not is_right_determined(f, smaller), s.provenance)
            )
        if probe:
            probes = random_probes(fl.y, available, caps.probes, rng)
            bad = definitional_check(f, fl.c, probes)
            out.append(Check("definition", subject, not bad, f"{len(probes)} probes"))
    return out
