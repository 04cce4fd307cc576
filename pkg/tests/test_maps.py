# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import pytest

from auskit.algebra import projective, simple
from auskit.errors import TargetMismatchError
from auskit.maps import join_map, meet_map, pullback, right_equivalent, right_leq
from auskit.rep import Morphism, direct_sum, radical


@pytest.fixture
def radical_chain(uniserial8):
    p = projective(uniserial8.algebra, "o")
    first = radical(p)
    second = radical(first.rep)
    return first.inclusion, first.inclusion @ second.inclusion


def test_right_leq_follows_images(radical_chain):
    rad, rad2 = radical_chain
    h = right_leq(rad2, rad)
    assert h is not None
    assert rad @ h == rad2
    assert right_leq(rad, rad2) is None
    assert not right_equivalent(rad, rad2)
    assert right_equivalent(rad, rad)


def test_zero_map_is_below_everything(radical_chain):
    rad, _ = radical_chain
    zero = Morphism.zero(rad.source, rad.target)
    assert right_leq(zero, rad) is not None
    assert right_leq(rad, zero) is None


def test_targets_must_agree(kron2, radical_chain):
    rad, _ = radical_chain
    other = Morphism.identity(simple(kron2.algebra, "a"))
    with pytest.raises(TargetMismatchError):
        right_leq(rad, other)
    with pytest.raises(TargetMismatchError):
        meet_map(rad, other)


def test_meet_and_join(kron2):
    s = simple(kron2.algebra, "a")
    first, second = direct_sum([s, s]).injections
    meet = meet_map(first, second)
    assert meet.source.dim == 0
    assert right_leq(meet, first) is not None
    join = join_map(first, second)
    assert join.is_epi
    assert right_leq(first, join) is not None
    assert right_leq(join, first) is None


def test_pullback_of_identities(kron2):
    pb = projective(kron2.algebra, "b")
    identity = Morphism.identity(pb)
    square = pullback(identity, identity)
    assert square.rep.dims == pb.dims
    assert identity @ square.first == identity @ square.second
