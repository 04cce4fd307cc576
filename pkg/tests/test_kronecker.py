# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import dataclasses

import pytest

from auskit.errors import AlgebraMismatchError, PreconditionError
from auskit.factor import enumerate_classes
from auskit.krs import is_indecomposable, is_isomorphic
from auskit.kronecker import (
    Classification,
    KroneckerCatalog,
    ModuleKind,
    allowed_summand,
    enumerate_strongly_regular,
    higher_degree_row,
    kronecker_algebra,
    sigma_check,
    trichotomy_checks,
    verify_table,
)
from auskit.rep import direct_sum


def test_kronecker_algebras():
    assert kronecker_algebra(3).dim == 4
    assert kronecker_algebra(2, arrows=3).dim == 5
    with pytest.raises(AlgebraMismatchError):
        KroneckerCatalog(kronecker_algebra(2, arrows=3))


def test_normal_forms(kronecker):
    for i in range(4):
        m = kronecker.pre_projective(i)
        assert m.dims == (i + 1, i)
        assert is_indecomposable(m)
        assert kronecker.defect(m) == -1
        n = kronecker.pre_injective(i)
        assert n.dims == (i, i + 1)
        assert kronecker.defect(n) == 1
    assert is_isomorphic(kronecker.pre_projective(0), kronecker.p0)
    assert is_isomorphic(kronecker.pre_injective(0), kronecker.q0)
    for point in kronecker.points(2):
        r = kronecker.regular(point, 2)
        assert r.dims == (2 * point.degree, 2 * point.degree)
        assert kronecker.defect(r) == 0
        assert is_indecomposable(r)
    with pytest.raises(PreconditionError):
        kronecker.pre_projective(-1)
    with pytest.raises(PreconditionError):
        kronecker.regular(kronecker.point("inf"), 0)


def test_points(kronecker, kron2_f3):
    assert len(kronecker.points(1)) == 3
    assert len(kronecker.points(2)) == 4
    assert str(kronecker.point("inf")) == "inf"
    assert kronecker.point("inf").is_infinite
    assert kronecker.point("1").degree == 1
    with pytest.raises(PreconditionError):
        kronecker.point("foo")
    assert len(KroneckerCatalog(kron2_f3.algebra).points(1)) == 4


def test_classification(kronecker):
    assert str(kronecker.classify(kronecker.pre_projective(3))) == "P_3"
    assert str(kronecker.classify(kronecker.pre_injective(2))) == "Q_2"
    inf = kronecker.classify(kronecker.regular(kronecker.point("inf"), 2))
    assert inf.kind is ModuleKind.regular
    assert str(inf) == "R[inf](2)"
    zero = kronecker.point("0")
    found = kronecker.classify(kronecker.regular(zero, 3))
    assert (found.kind, found.index) == (ModuleKind.regular, 3)
    assert str(found.point) == str(zero)
    assert str(kronecker.tube_of(kronecker.regular(zero, 1))) == str(zero)
    with pytest.raises(PreconditionError):
        kronecker.classify(direct_sum([kronecker.p0, kronecker.q0]).rep)


def test_regular_socles(kronecker):
    zero, inf = kronecker.point("0"), kronecker.point("inf")
    assert kronecker.regular_socle(kronecker.regular(zero, 2)) == {str(zero): 1}
    twice = direct_sum([kronecker.regular(zero, 1)] * 2).rep
    assert kronecker.regular_socle(twice) == {str(zero): 2}
    mixed = direct_sum([kronecker.regular(zero, 1), kronecker.regular(inf, 1)]).rep
    assert kronecker.regular_socle(mixed) == {str(zero): 1, "inf": 1}


def test_strong_regularity(kronecker):
    zero, inf = kronecker.point("0"), kronecker.point("inf")
    mixed = direct_sum([kronecker.regular(zero, 1), kronecker.regular(inf, 2)]).rep
    assert kronecker.is_regular(mixed)
    assert kronecker.is_strongly_regular(mixed)
    assert kronecker.is_strongly_regular(kronecker.regular(zero, 2))
    twice = direct_sum([kronecker.regular(zero, 1)] * 2).rep
    assert not kronecker.is_strongly_regular(twice)
    assert not kronecker.is_regular(kronecker.pre_projective(1))
    with pytest.raises(PreconditionError):
        kronecker.is_strongly_regular(kronecker.pre_projective(1))


def test_strongly_regular_enumeration(kronecker, kron2_f3):
    assert len(enumerate_strongly_regular(kronecker, 2)) == 3
    assert len(enumerate_strongly_regular(kronecker, 4)) == 7
    assert enumerate_strongly_regular(kronecker, 3) == []
    for s in enumerate_strongly_regular(kronecker, 4):
        assert s.rep.dim == 4
        assert kronecker.is_strongly_regular(s.rep)
    assert len(enumerate_strongly_regular(KroneckerCatalog(kron2_f3.algebra), 2)) == 4


def test_universal_maps(kronecker):
    assert kronecker.universal_map(2, 1).source.dims == (4, 2)
    assert kronecker.universal_map(1, 1).target.dims == (1, 2)
    assert kronecker.universal_map(1, 0).is_zero
    with pytest.raises(PreconditionError):
        kronecker.universal_map(0, 1)


def test_sigma(kronecker):
    top = sigma_check(kronecker, kronecker.pre_projective(0), kronecker.pre_injective(1))
    assert top.length == 2
    assert len(top.sources) == 3
    assert top.bijective
    inner = sigma_check(kronecker, kronecker.pre_projective(1), kronecker.pre_injective(1))
    assert inner.length == 2
    assert inner.bijective
    with pytest.raises(PreconditionError):
        sigma_check(kronecker, kronecker.pre_injective(1), kronecker.pre_injective(1))


def test_table_small(kronecker):
    rows = verify_table(kronecker, 1)
    assert len(rows) == 24
    assert {row.row for row in rows} == {1, 2, 3, 4, 5, 6}
    assert all(row.passed for row in rows), [row for row in rows if not row.passed]


@pytest.mark.slow
def test_table_larger(kronecker):
    rows = verify_table(kronecker, 2)
    assert all(row.passed for row in rows), [row for row in rows if not row.passed]


def test_degree_two_tube(kronecker):
    row = higher_degree_row(kronecker)
    assert row.hom_dim == 2
    assert str(row.shape) == "I(1)"
    assert row.passed


def test_trichotomy(kronecker):
    fl = enumerate_classes(kronecker.pre_projective(1), kronecker.pre_projective(2))
    checks = trichotomy_checks(kronecker, fl)
    assert checks
    assert all(c.passed for c in checks)


@pytest.mark.slow
def test_table_over_f3(kron2_f3):
    catalog = KroneckerCatalog(kron2_f3.algebra)
    rows = verify_table(catalog, 3)
    assert len(rows) == 162
    assert sum(row.row == 4 for row in rows) == 36
    assert all(row.passed for row in rows), [row for row in rows if not row.passed]


def test_trichotomy_rules(kronecker):
    zero, inf = kronecker.point("0"), kronecker.point("inf")
    pre = Classification(ModuleKind.preprojective, 1)
    inj = Classification(ModuleKind.preinjective, 1)
    r0 = Classification(ModuleKind.regular, 1, zero)
    rinf = Classification(ModuleKind.regular, 2, inf)
    assert allowed_summand(pre, pre, pre)
    assert not allowed_summand(pre, pre, r0)
    assert allowed_summand(pre, r0, r0)
    assert not allowed_summand(pre, r0, rinf)
    assert not allowed_summand(pre, r0, inj)
    assert allowed_summand(r0, r0, r0)
    assert not allowed_summand(r0, r0, pre)
    assert allowed_summand(r0, inj, r0)
    assert not allowed_summand(r0, inj, rinf)
    assert not allowed_summand(inj, inj, r0)
    assert allowed_summand(pre, inj, rinf)
    # Hom(C, Y) = 0: only the zero source
    assert not allowed_summand(inj, pre, pre)
    assert not allowed_summand(r0, rinf, rinf)
    assert not allowed_summand(inj, r0, r0)
    assert not allowed_summand(r0, pre, pre)


def test_trichotomy_flags_foreign_summands(kronecker):
    y = kronecker.regular(kronecker.point("0"), 2)
    fl = enumerate_classes(kronecker.pre_projective(0), y)
    assert all(c.passed for c in trichotomy_checks(kronecker, fl))
    # the same classes judged as if Y sat on another tube
    mixed = dataclasses.replace(fl, y=kronecker.regular(kronecker.point("inf"), 2))
    assert not all(c.passed for c in trichotomy_checks(kronecker, mixed))
