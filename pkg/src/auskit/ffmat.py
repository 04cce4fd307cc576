# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Exact dense linear algebra over prime fields.

Matrices are int64 numpy arrays with entries in [0, p). Row reduction and
inversion run on galois field arrays. Every subspace is kept in reduced row
echelon form, which doubles as its canonical key.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cache, cached_property
from typing import TYPE_CHECKING

import galois
import numpy as np
import numpy.typing as npt

from .errors import CapExceededError, DimensionMismatchError, PreconditionError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

logger = logging.getLogger(__name__)

type Mat = npt.NDArray[np.int64]

MAX_PRIME = 251


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def check_field(p: int) -> int:
    if not is_prime(p) or p > MAX_PRIME:
        msg = f"Field size must be a prime between 2 and {MAX_PRIME}, got {p}"
        raise PreconditionError(msg)
    return p


def reduce(m: "npt.ArrayLike", p: int) -> Mat:
    return np.asarray(m, dtype=np.int64) % p


def zeros(rows: int, cols: int) -> Mat:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> Mat:
    return np.eye(n, dtype=np.int64)


@cache
def field(p: int) -> type[galois.FieldArray]:
    return galois.GF(check_field(p))


def _rref(m: "npt.ArrayLike", p: int) -> tuple[Mat, list[int]]:
    a = reduce(m, p)
    if a.ndim != 2:
        msg = f"Expected a matrix, got an array of shape {a.shape}"
        raise DimensionMismatchError(msg)
    if a.size == 0:
        return a, []
    reduced = field(p)(a).row_reduce().view(np.ndarray).astype(np.int64)
    pivots = [int(np.flatnonzero(row)[0]) for row in reduced if row.any()]
    return reduced, pivots


def rref(m: "npt.ArrayLike", p: int) -> tuple[Mat, int]:
    a, pivots = _rref(m, p)
    return a, len(pivots)


def echelon(m: "npt.ArrayLike", p: int) -> tuple[Mat, tuple[int, ...]]:
    """Nonzero RREF rows and their pivot columns."""
    a, pivots = _rref(m, p)
    return a[: len(pivots)], tuple(pivots)


def rank(m: "npt.ArrayLike", p: int) -> int:
    return len(_rref(m, p)[1])


def nullspace(m: "npt.ArrayLike", p: int) -> Mat:
    """Basis of {x : m x = 0} as rows, one per free column."""
    a, pivots = _rref(m, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-a[r, f]) % p
    return basis


@dataclass(frozen=True)
class AffineSolution:
    """All x with a x = b: particular + span(kernel rows).

    The particular solution has every free variable set to zero, which makes it
    the lexicographically smallest solution in the pivot-first ordering.
    """

    particular: Mat
    kernel: Mat


def solve_all(a: "npt.ArrayLike", b: "npt.ArrayLike", p: int) -> AffineSolution | None:
    a = reduce(a, p)
    b = reduce(b, p)
    if a.shape[0] != b.shape[0]:
        msg = f"Left side has {a.shape[0]} rows, right side {b.shape[0]}"
        raise DimensionMismatchError(msg)
    vector = b.ndim == 1
    rhs = b[:, None] if vector else b
    n = a.shape[1]
    aug, pivots = _rref(np.hstack([a, rhs]), p)
    if any(pc >= n for pc in pivots):
        return None
    x = zeros(n, rhs.shape[1])
    for r, pc in enumerate(pivots):
        x[pc] = aug[r, n:]
    return AffineSolution(x[:, 0] if vector else x, nullspace(a, p))


def mat_inv(m: "npt.ArrayLike", p: int) -> Mat:
    a = reduce(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        msg = f"Cannot invert a non-square matrix of shape {a.shape}"
        raise DimensionMismatchError(msg)
    if n == 0:
        return a
    try:
        return np.linalg.inv(field(p)(a)).view(np.ndarray).astype(np.int64)
    except np.linalg.LinAlgError:
        msg = "Matrix is singular"
        raise PreconditionError(msg) from None


def matrix_power(m: "npt.ArrayLike", e: int, modulus: int) -> Mat:
    """m**e with integer entries reduced modulo `modulus` (not necessarily prime)."""
    base = np.asarray(m, dtype=np.int64) % modulus
    result = identity(base.shape[0])
    while e:
        if e & 1:
            result = (result @ base) % modulus
        base = (base @ base) % modulus
        e >>= 1
    return result


def is_nilpotent(m: "npt.ArrayLike", p: int) -> bool:
    a = reduce(m, p)
    return not matrix_power(a, a.shape[0], p).any()


def block_diag(blocks: "Iterable[Mat]") -> Mat:
    blocks = list(blocks)
    out = zeros(sum(b.shape[0] for b in blocks), sum(b.shape[1] for b in blocks))
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


@dataclass(frozen=True, eq=False)
class Subspace:
    ambient_dim: int
    p: int
    basis: Mat
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors: "npt.ArrayLike", ambient_dim: int, p: int) -> "Subspace":
        vs = np.asarray(vectors, dtype=np.int64)
        vs = zeros(0, ambient_dim) if vs.size == 0 else vs.reshape(-1, ambient_dim)
        basis, pivots = echelon(vs, p)
        return cls(ambient_dim, p, basis, pivots)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, p, zeros(0, ambient_dim), ())

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, p, identity(ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @cached_property
    def key(self) -> tuple[int, int, bytes]:
        return (self.ambient_dim, self.p, self.basis.tobytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subspace) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"

    def residual(self, v: "npt.ArrayLike") -> Mat:
        w = reduce(v, self.p)
        if self.dim == 0:
            return w
        return (w - w[..., list(self.pivots)] @ self.basis) % self.p

    def contains(self, v: "npt.ArrayLike") -> bool:
        return not self.residual(v).any()

    def coordinates(self, v: "npt.ArrayLike") -> Mat:
        w = reduce(v, self.p)
        if self.residual(w).any():
            msg = "Vector does not lie in the subspace"
            raise PreconditionError(msg)
        return w[..., list(self.pivots)]

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return self.dim <= other.dim and other.contains(self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def complement_positions(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.ambient_dim) if i not in self.pivots)

    def image(self, m: "npt.ArrayLike") -> "Subspace":
        """Image under the linear map v -> v @ m.T."""
        a = reduce(m, self.p)
        return Subspace.span((self.basis @ a.T) % self.p, a.shape[0], self.p)

    def is_invariant(self, m: "npt.ArrayLike") -> bool:
        return self.contains((self.basis @ reduce(m, self.p).T) % self.p)


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim or u.p != v.p:
        msg = f"Ambient spaces differ: {u!r} vs {v!r}"
        raise DimensionMismatchError(msg)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim, u.p)
    stacked = np.vstack([u.basis, (-v.basis) % u.p]).T
    null = nullspace(stacked, u.p)
    return Subspace.span((null[:, : u.dim] @ u.basis) % u.p, u.ambient_dim, u.p)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace.span(np.vstack([u.basis, v.basis]), u.ambient_dim, u.p)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_subspaces(n: int, p: int, cap: int = 10**6) -> "Iterator[Subspace]":
    """Every subspace of F_p^n once, by dimension, then pivot set, then free entries."""
    total = subspace_count(n, p)
    if total > cap:
        raise CapExceededError(f"subspaces of F_{p}^{n}", total, cap)
    logger.debug("enumerating %d subspaces of F_%d^%d", total, p, n)
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [
                (r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free)):
                basis = zeros(k, n)
                for r, pc in enumerate(pivots):
                    basis[r, pc] = 1
                for (r, c), value in zip(free, values, strict=True):
                    basis[r, c] = value
                yield Subspace(n, p, basis, pivots)


def projective_points(n: int, p: int) -> "Iterator[Mat]":
    """One representative per line of F_p^n: first nonzero entry equal to 1."""
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            v = np.zeros(n, dtype=np.int64)
            v[lead] = 1
            v[lead + 1 :] = tail
            yield v


def invariant_closure(vectors: "npt.ArrayLike", mats: "Iterable[Mat]", n: int, p: int) -> Subspace:
    """Smallest subspace containing `vectors` and stable under every matrix in `mats`."""
    mats = list(mats)
    space = Subspace.span(vectors, n, p)
    queue = list(space.basis)
    while queue:
        v = queue.pop()
        for m in mats:
            w = (m @ v) % p
            if not space.contains(w):
                space = Subspace.span(np.vstack([space.basis, w]), n, p)
                queue.append(w)
    return space


def normalize_rows(m: "npt.ArrayLike", p: int) -> Mat:
    """Scale each nonzero row so that its first nonzero entry is 1."""
    a = reduce(m, p)
    if a.size == 0:
        return a
    inverses = np.array([0, *(pow(x, -1, p) for x in range(1, p))], dtype=np.int64)
    lead = a[np.arange(a.shape[0]), np.argmax(a != 0, axis=1)]
    return (a * inverses[lead][:, None]) % p
