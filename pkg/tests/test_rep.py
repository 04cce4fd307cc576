# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import numpy as np
import pytest

from auskit.algebra import injective, projective, simple
from auskit.ar import proj_cover
from auskit.errors import DimensionMismatchError, PreconditionError
from auskit.rep import (
    Morphism,
    Rep,
    cokernel,
    copair,
    direct_sum,
    hom,
    image,
    kernel,
    power,
    radical,
    socle,
    top,
)


def test_hom_dimensions(kron2):
    a = kron2.algebra
    pa, pb = projective(a, "a"), projective(a, "b")
    assert hom(pa, pb).dim == 2
    assert hom(pb, pa).dim == 0
    assert hom(pb, pb).dim == 1
    ex = kron2.expressions
    assert hom(ex.module("kP(1)"), ex.module("kP(2)")).dim == 2
    assert hom(ex.module("kP(2)"), ex.module("kP(1)")).dim == 0
    assert hom(ex.module("kR0(1)"), ex.module("kRinf(1)")).dim == 0


def test_hom_basis_and_coordinates(kron2):
    ex = kron2.expressions
    space = hom(ex.module("kP(1)"), ex.module("kP(2)"))
    for f in space.basis:
        assert f.intertwines()
        assert not f.is_zero
    f = space.element([1, 1])
    assert f.intertwines()
    assert list(space.coordinates(f)) == [1, 1]
    assert space.span(list(space.basis)).dim == 2


def test_dimvec_and_paths(kron2):
    pb = projective(kron2.algebra, "b")
    assert pb.dims == (2, 1)
    assert pb.dimvec() == {"a": 2, "b": 1}
    assert pb.vertex_dim("a") == 2
    assert pb.arrow_matrix("x").shape == (2, 1)
    assert injective(kron2.algebra, "a").dims == (1, 2)
    assert Rep.zero(kron2.algebra).is_zero


def test_relations_are_checked(loop_b):
    with pytest.raises(PreconditionError):
        Rep.build(loop_b.algebra, [1, 0], [[[1]], []])
    rep = Rep.build(loop_b.algebra, [2, 0], [[[0, 1], [0, 0]], []])
    assert rep.satisfies_relations()


def test_shapes_are_checked(kron2):
    with pytest.raises(DimensionMismatchError):
        Rep.build(kron2.algebra, [1, 1], [[[1, 0]], [[1]]])
    with pytest.raises(DimensionMismatchError):
        Rep.build(kron2.algebra, [1])
    with pytest.raises(DimensionMismatchError):
        Rep.build(kron2.algebra, [1, 1], [[[1]]])


def test_morphisms_must_intertwine(kron2):
    a = kron2.algebra
    with pytest.raises(PreconditionError):
        Morphism.build(simple(a, "b"), projective(a, "b"), [[], [[1]]])
    assert Morphism.zero(simple(a, "b"), projective(a, "b")).is_zero


def test_composition_checks_ends(kron2):
    a = kron2.algebra
    f = hom(projective(a, "a"), projective(a, "b")).basis[0]
    with pytest.raises(DimensionMismatchError):
        f @ f
    g = Morphism.identity(projective(a, "b")) @ f
    assert g == f
    assert (f - f).is_zero
    assert (f + f).is_zero


def test_kernel_image_cokernel(kron2):
    cover = proj_cover(simple(kron2.algebra, "b")).morphism
    assert cover.is_epi
    assert kernel(cover).rep.dims == (2, 0)
    assert kernel(cover).inclusion.is_mono
    assert image(cover).rep.dims == (0, 1)
    assert cokernel(cover).rep.is_zero


def test_radical_socle_top(kron2, uniserial4):
    pb = projective(kron2.algebra, "b")
    assert radical(pb).rep.dims == (2, 0)
    assert socle(pb).rep.dims == (2, 0)
    assert top(pb).rep.dims == (0, 1)
    u4 = projective(uniserial4.algebra, "o")
    assert radical(u4).rep.dims == (3,)
    assert socle(u4).rep.dims == (1,)


def test_quotient_induces_maps(kron2):
    pb = projective(kron2.algebra, "b")
    q = top(pb)
    assert q.induce(q.projection).is_iso
    with pytest.raises(PreconditionError):
        q.induce(Morphism.identity(pb))


def test_direct_sums(kron2):
    a = kron2.algebra
    parts = [projective(a, "a"), projective(a, "b")]
    ds = direct_sum(parts)
    assert ds.rep.dims == (3, 1)
    for i, j in np.ndindex(2, 2):
        composite = ds.projections[i] @ ds.injections[j]
        if i == j:
            assert composite == Morphism.identity(parts[i])
        else:
            assert composite.is_zero
    assert copair(list(ds.injections), ds) == Morphism.identity(ds.rep)
    assert power(simple(a, "a"), 3).dims == (3, 0)
    with pytest.raises(PreconditionError):
        direct_sum([])
    assert direct_sum([], a).rep.is_zero
