# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import itertools

import pytest

from auskit.algebra import injective, projective, simple
from auskit.ar import proj_cover
from auskit.catalog import catalog_algebra, load_algebra_text
from auskit.config import Caps
from auskit.determine import eta, gamma_module
from auskit.errors import NotDeterminedError, PreconditionError, TargetMismatchError
from auskit.factor import (
    FactorizationLattice,
    c_length,
    c_type,
    describe_module,
    determiner_checks,
    enumerate_classes,
    epi_classes,
    image_recovery_checks,
    is_cofork,
    is_fork,
    kernel_count_checks,
    length_one_checks,
    min_right_almost_split,
    monotonicity_check,
    rz_witness,
    strata_checks,
    zero_class,
)
from auskit.krs import end_algebra, is_isomorphic, is_right_minimal
from auskit.maps import right_leq
from auskit.rep import Morphism, Rep, copair, hom, radical


@pytest.fixture(scope="module")
def preprojective() -> FactorizationLattice:
    ex = catalog_algebra("kron2.alg").expressions
    c = ex.module("kP(1)")
    return enumerate_classes(c, ex.module("kP(2)"), names={"P1": c})


@pytest.fixture(scope="module")
def a3_simple() -> FactorizationLattice:
    ex = catalog_algebra("a3-linear.alg").expressions
    return enumerate_classes(ex.module("S(c)"), ex.module("S(c)"))


def test_preprojective_classes(preprojective):
    fl = preprojective
    assert len(fl) == 5
    assert fl.report.passed
    assert fl.report.nodes == 5
    assert fl.report.determined >= 5
    assert fl.report.order_pairs == 20
    assert fl.report.meet_pairs == 10
    assert sorted(k.c_length for k in fl.classes) == [0, 1, 1, 1, 2]
    ex = catalog_algebra("kron2.alg").expressions
    assert is_isomorphic(zero_class(fl).source, ex.module("kP(0)^3"))
    assert fl.classes[fl.lattice.top].morphism.is_iso


def test_class_lookup(preprojective):
    fl = preprojective
    for k in fl.classes:
        assert fl.class_of(k.morphism) is k
        assert c_length(k.morphism, fl.gamma) == k.c_length
        assert c_type(k.morphism, fl.gamma) == k.c_type
    assert set(fl.flags()) == set(range(5))
    top = fl.lattice.top
    assert fl.labeler(fl.lattice.nodes[top]) == fl.classes[top].source_description


def test_preprojective_certificates(preprojective):
    fl = preprojective
    epis = epi_classes(fl)
    assert [k.node for k in epis] == [fl.lattice.top]
    checks = [
        *length_one_checks(fl),
        *image_recovery_checks(fl),
        *strata_checks(fl),
        *determiner_checks(fl, probe=True),
    ]
    assert checks
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert kernel_count_checks(fl) == []


def test_simple_against_itself(a3_simple):
    fl = a3_simple
    assert len(fl) == 2
    ex = catalog_algebra("a3-linear.alg").expressions
    assert is_isomorphic(zero_class(fl).source, ex.module("Q(b)"))
    assert zero_class(fl).is_epi
    checks = [*length_one_checks(fl), *kernel_count_checks(fl), *determiner_checks(fl)]
    names = {c.name for c in checks}
    assert {"kernel is tau C", "class in Ext socle", "length = kernel summands"} <= names
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_undetermined_maps_have_no_type(a3_simple):
    fl = a3_simple
    cover = proj_cover(fl.y).morphism
    with pytest.raises(NotDeterminedError):
        c_type(cover, fl.gamma)


def test_monotonicity():
    ex = catalog_algebra("a3-linear.alg").expressions
    report = monotonicity_check(ex.module("S(c)"), ex.module("Q(b)"), ex.module("S(c)"))
    assert report.embedded
    assert report.meets_preserved
    assert report.broken_joins == []


TWO_SOURCES = """
field 2
vertices a b1 b2
arrow u1 b1 a
arrow u2 b2 a
"""


def test_joins_break_when_c_grows():
    ex = load_algebra_text(TWO_SOURCES).expressions
    qa = ex.module("Q(a)")
    report = monotonicity_check(ex.module("P(a) ++ P(b1) ++ P(b2)"), qa, qa)
    assert report.embedded
    assert report.meets_preserved
    assert report.broken_joins


def test_describe_module(kron2):
    ex = kron2.expressions
    text = describe_module(ex.module("P(a) ++ P(b)^2"))
    assert set(text.split(" ++ ")) == {"P(a)", "P(b)^2"}
    assert describe_module(ex.module("kR0(2)")) == "M[2,2]"
    assert describe_module(ex.module("kR0(2)"), {"R": ex.module("kR0(2)")}) == "R"
    assert describe_module(Rep.zero(kron2.algebra)) == "0"


def test_rz_witness(kron2):
    a = kron2.algebra
    cover = proj_cover(simple(a, "b")).morphism
    ses = rz_witness(cover, cover, Morphism.identity(cover.source))
    assert ses.is_exact()
    assert ses.middle.dims == (4, 1)
    with pytest.raises(PreconditionError):
        rz_witness(cover, cover, Morphism.zero(cover.source, cover.source))
    inclusion = radical(projective(a, "b")).inclusion
    with pytest.raises(PreconditionError):
        rz_witness(inclusion, inclusion, Morphism.identity(inclusion.source))
    with pytest.raises(TargetMismatchError):
        rz_witness(cover, inclusion, Morphism.identity(cover.source))


def test_coforks_and_forks(kron2):
    a = kron2.algebra
    g1, g2 = hom(projective(a, "a"), projective(a, "b")).basis
    assert is_cofork([g1, g2])
    assert not is_cofork([g1, g1])
    assert not is_cofork([Morphism.zero(g1.source, g1.target)])
    assert is_fork([g1, g2])
    with pytest.raises(PreconditionError):
        is_cofork([])
    with pytest.raises(TargetMismatchError):
        is_cofork([g1, Morphism.identity(g1.source)])


def test_minimal_right_almost_split_maps(kron2):
    ex = kron2.expressions
    g = min_right_almost_split(ex.module("S(b)"))
    assert is_isomorphic(g.source, ex.module("kQ(1)^2"))
    assert g.is_epi
    assert min_right_almost_split(ex.module("P(b)")).source.dims == (2, 0)
    with pytest.raises(PreconditionError):
        min_right_almost_split(ex.module("S(a) ++ S(b)"))


def _cross_check(family):
    for size in (1, 2, 3):
        for sub in itertools.combinations(family, size):
            assert is_cofork(list(sub)) == is_right_minimal(copair(list(sub))), sub


def test_cofork_criterion_matches_right_minimality(kron2, kronecker):
    a = kron2.algebra
    g1, g2 = hom(projective(a, "a"), projective(a, "b")).basis
    _cross_check([g1, g2, g1 + g2])
    qa = injective(a, "a")
    inclusions = [hom(kronecker.regular(pt, 1), qa).basis[0] for pt in kronecker.points(1)]
    assert is_cofork(inclusions)
    bottom = hom(simple(a, "a"), qa).basis[0]
    assert not is_cofork([bottom, inclusions[0]])
    _cross_check([*inclusions, bottom])


def test_projections_onto_a_simple_need_not_cofork(loop_b):
    ex = loop_b.expressions
    s = ex.module("S(b)")
    f = hom(ex.module("P(b)"), s).basis[0]
    g = hom(ex.module("taum(S(a))"), s).basis[0]
    assert g.is_epi
    assert right_leq(f, g) is not None
    assert not is_cofork([f, g])
    assert not is_right_minimal(copair([f, g]))
    _cross_check([f, g])


@pytest.mark.parametrize("name", ["S(b)", "kP(2)", "kR0(2)", "P(b)"])
def test_almost_split_image_is_the_radical(kron2, name):
    y = kron2.expressions.module(name)
    g = min_right_almost_split(y)
    assert eta(g, gamma_module(y, y)) == end_algebra(y).radical
    assert right_leq(Morphism.identity(y), g) is None


def test_almost_split_maps_absorb_non_split_maps(kron2):
    ex = kron2.expressions
    y = ex.module("kP(2)")
    g = min_right_almost_split(y)
    for name in ("kP(0)", "kP(1)", "kP(1)^2", "kR0(1)"):
        for h in hom(ex.module(name), y).basis:
            assert right_leq(h, g) is not None


def test_irreducible_map_between_preprojectives(kron2):
    ex = kron2.expressions
    f = hom(ex.module("kP(0)"), ex.module("kP(1)")).basis[0]
    assert f.is_mono
    gm = gamma_module(ex.module("P(a) ++ P(b)"), f.target)
    assert c_length(f, gm) == 2
    assert right_leq(f, min_right_almost_split(f.target)) is not None


def test_injectivity_sample_size(preprojective):
    fl = preprojective
    c, y = fl.c, fl.y
    none = enumerate_classes(c, y, Caps(injectivity_samples=0))
    assert none.report.injectivity_checks == 0
    every = enumerate_classes(c, y, Caps(injectivity_samples=10**6))
    checks = every.report.injectivity_checks
    assert checks == every.report.determined - len(every)
    assert fl.report.injectivity_checks <= min(checks, 2 * len(fl))


@pytest.mark.slow
def test_hammock_over_all_indecomposables(subspace3):
    ex = subspace3.expressions
    fl = enumerate_classes(ex.module("A"), ex.module("Q(a)"))
    assert len(fl) == 30
    assert fl.lattice.height == 10
    assert fl.report.passed
