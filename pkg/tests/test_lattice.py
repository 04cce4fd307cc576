# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from collections import Counter

import numpy as np
import pytest

from auskit.algebra import projective
from auskit.config import Caps
from auskit.determine import gamma_module
from auskit.errors import CapExceededError, PreconditionError
from auskit.ffmat import Subspace
from auskit.lattice import (
    ShapeClass,
    ShapeKind,
    check_modular,
    classify_shape,
    export_dot,
    export_json,
    invariant_subspaces,
    lattice_from_json,
    module_lattice,
    reference_geometry,
    strata_counts,
    submodule_lattice,
)


@pytest.fixture
def pb_lattice(kron2):
    return module_lattice(projective(kron2.algebra, "b"))


def test_submodules_of_a_projective(pb_lattice):
    assert len(pb_lattice) == 6
    assert pb_lattice.height == 3
    assert pb_lattice.total() == (2, 1)
    assert pb_lattice.labels == ("a", "b")
    assert check_modular(pb_lattice) == []
    assert strata_counts(pb_lattice) == Counter({(2, 1): 1, (1, 1): 3, (0, 1): 1, (0, 0): 1})


def test_meets_and_joins(pb_lattice):
    lines = [node.index for node in pb_lattice.nodes if node.height == 1]
    assert len(lines) == 3
    first, second = lines[:2]
    assert pb_lattice.meet(first, second) == pb_lattice.bottom
    join = pb_lattice.join(first, second)
    assert pb_lattice.nodes[join].composition == (2, 0)
    assert pb_lattice.order_meet(first, second) == pb_lattice.bottom
    assert pb_lattice.order_join(first, second) == join
    assert pb_lattice.leq(first, join)
    assert not pb_lattice.leq(join, first)


def test_composition_series(pb_lattice):
    assert pb_lattice.jordan_holder(pb_lattice.bottom, pb_lattice.top) == {"a": 2, "b": 1}
    with pytest.raises(PreconditionError):
        pb_lattice.jordan_holder(pb_lattice.top, pb_lattice.bottom)
    chain = pb_lattice.maximal_chain(np.random.default_rng(3))
    assert len(chain) == 4
    assert pb_lattice.chain_factors(chain) == Counter({"a": 2, "b": 1})
    assert pb_lattice.maximal_chain() == pb_lattice.maximal_chain()


def test_find_rejects_non_members(pb_lattice):
    assert pb_lattice.find(pb_lattice.nodes[pb_lattice.top].space) == pb_lattice.top
    with pytest.raises(PreconditionError):
        pb_lattice.find(Subspace.span([[0, 0, 1]], 3, 2))


def test_both_methods_agree(pb_lattice, kron2):
    pb = projective(kron2.algebra, "b")
    action = [*pb.global_arrows, *pb.vertex_projections]
    grown = invariant_subspaces(3, 2, action, method="closure")
    filtered = invariant_subspaces(3, 2, action, method="filter")
    assert grown == filtered
    assert grown == [node.space for node in pb_lattice.nodes]


def test_projective_line_of_classes(kron2):
    ex = kron2.expressions
    lattice = submodule_lattice(gamma_module(ex.module("kP(1)"), ex.module("kP(2)")))
    assert len(lattice) == 5
    shape = classify_shape(lattice)
    assert str(shape) == "G(2) over F_2"
    assert shape.matches(ShapeKind.geometry, 2, 2)
    assert not shape.matches(ShapeKind.chain, 2)


def test_chain_of_ideals(uniserial8):
    u4 = uniserial8.expressions.module("U(4)")
    lattice = submodule_lattice(gamma_module(u4, u4))
    assert len(lattice) == 5
    assert str(classify_shape(lattice)) == "I(4)"


def test_other_shapes(kron2):
    lattice = module_lattice(kron2.expressions.module("S(a) ++ S(b)"))
    assert len(lattice) == 4
    assert str(classify_shape(lattice)) == "other (height 2)"


def test_reference_geometries():
    assert len(reference_geometry(3, 2)) == 16
    assert len(reference_geometry(2, 3)) == 6
    over_four = reference_geometry(2, 4)
    assert len(over_four) == 7
    assert over_four.height == 2
    assert str(classify_shape(over_four)) == "G(2) over F_4"
    with pytest.raises(PreconditionError):
        reference_geometry(2, 6)


def test_shape_class_conventions():
    assert str(ShapeClass(ShapeKind.chain, 3)) == "I(3)"
    assert str(ShapeClass(ShapeKind.geometry, 2, 3)) == "G(2) over F_3"
    assert str(ShapeClass(ShapeKind.other, 2)) == "other (height 2)"
    assert ShapeClass(ShapeKind.chain, 1).matches(ShapeKind.geometry, 1, 5)
    assert not ShapeClass(ShapeKind.other, 1).matches(ShapeKind.chain, 1)


def test_cap_on_hom_dimension(kron2):
    ex = kron2.expressions
    gm = gamma_module(ex.module("kP(1)"), ex.module("kP(2)"))
    with pytest.raises(CapExceededError):
        submodule_lattice(gm, Caps(max_dim=1))
    with pytest.raises(CapExceededError):
        submodule_lattice(gm, Caps(max_nodes=3))


def test_exports(pb_lattice):
    dot = export_dot(pb_lattice, name="pb")
    assert dot.startswith("digraph pb")
    assert "rankdir=BT" in dot
    assert dot.count("->") == len(pb_lattice.covers)
    text = export_json(pb_lattice, {pb_lattice.top: {"epi": True}})
    restored = lattice_from_json(text)
    assert len(restored) == len(pb_lattice)
    assert restored.covers == pb_lattice.covers
    assert restored.labels == pb_lattice.labels
    assert [n.composition for n in restored.nodes] == [n.composition for n in pb_lattice.nodes]
