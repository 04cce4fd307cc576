# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The preorder on maps ending in a fixed module, with its meets and joins."""

from dataclasses import dataclass

import numpy as np

from .errors import TargetMismatchError
from .ffmat import solve_all
from .rep import Morphism, Rep, copair, direct_sum, hom, kernel


def _common_target(f: Morphism, g: Morphism) -> None:
    if f.target != g.target:
        msg = f"Maps end in different modules: {f.target!r} and {g.target!r}"
        raise TargetMismatchError(msg)


def right_leq(f: Morphism, g: Morphism) -> Morphism | None:
    """Some h with f = g h, or None.

    The witness sets every free coordinate of the linear system to zero, so it
    is the smallest solution in the canonical Hom basis ordering.
    """
    _common_target(f, g)
    space = hom(f.source, g.source)
    target = f.vector()
    if space.dim == 0:
        return Morphism.zero(f.source, g.source) if not target.any() else None
    columns = np.array([(g @ h).vector() for h in space.basis], dtype=np.int64).T
    solution = solve_all(columns.reshape(target.size, space.dim), target, f.p)
    if solution is None:
        return None
    return space.element(solution.particular)


def right_equivalent(f: Morphism, g: Morphism) -> bool:
    return right_leq(f, g) is not None and right_leq(g, f) is not None


@dataclass(frozen=True, eq=False)
class Pullback:
    rep: Rep
    first: Morphism
    second: Morphism


def pullback(f1: Morphism, f2: Morphism) -> Pullback:
    """Kernel of [f1, -f2] on X1 + X2 with its two projections."""
    _common_target(f1, f2)
    ds = direct_sum([f1.source, f2.source])
    k = kernel(copair([f1, -f2], ds))
    return Pullback(k.rep, ds.projections[0] @ k.inclusion, ds.projections[1] @ k.inclusion)


def meet_map(f1: Morphism, f2: Morphism) -> Morphism:
    pb = pullback(f1, f2)
    return f1 @ pb.first


def join_map(f1: Morphism, f2: Morphism) -> Morphism:
    _common_target(f1, f2)
    return copair([f1, f2])
