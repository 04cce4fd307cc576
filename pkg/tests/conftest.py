# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import pytest

from auskit.catalog import LoadedAlgebra, catalog_algebra
from auskit.kronecker import KroneckerCatalog

CATALOG_ALGEBRAS = [
    "a2.alg",
    "a3-linear.alg",
    "a3-radsq.alg",
    "loop-b.alg",
    "kron2.alg",
    "kron2-f3.alg",
    "kron3.alg",
    "subspace3.alg",
    "onepoint-ext.alg",
    "uniserial-4.alg",
    "uniserial-6.alg",
    "uniserial-8.alg",
]


@pytest.fixture
def a2() -> LoadedAlgebra:
    return catalog_algebra("a2.alg")


@pytest.fixture
def a3() -> LoadedAlgebra:
    return catalog_algebra("a3-linear.alg")


@pytest.fixture
def a3_radsq() -> LoadedAlgebra:
    return catalog_algebra("a3-radsq.alg")


@pytest.fixture
def loop_b() -> LoadedAlgebra:
    return catalog_algebra("loop-b.alg")


@pytest.fixture
def kron2() -> LoadedAlgebra:
    return catalog_algebra("kron2.alg")


@pytest.fixture
def kron2_f3() -> LoadedAlgebra:
    return catalog_algebra("kron2-f3.alg")


@pytest.fixture
def subspace3() -> LoadedAlgebra:
    return catalog_algebra("subspace3.alg")


@pytest.fixture
def onepoint_ext() -> LoadedAlgebra:
    return catalog_algebra("onepoint-ext.alg")


@pytest.fixture
def uniserial4() -> LoadedAlgebra:
    return catalog_algebra("uniserial-4.alg")


@pytest.fixture
def uniserial8() -> LoadedAlgebra:
    return catalog_algebra("uniserial-8.alg")


@pytest.fixture
def kronecker(kron2: LoadedAlgebra) -> KroneckerCatalog:
    return KroneckerCatalog(kron2.algebra)
