# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import logging

import pytest

from auskit.config import ENV_VAR, Caps, configure_logging
from auskit.errors import ParseError


def test_parse():
    caps = Caps.parse("max_dim=4, seed=7")
    assert caps.max_dim == 4
    assert caps.seed == 7
    assert caps.max_nodes == Caps().max_nodes


@pytest.mark.parametrize(
    ("text", "column"),
    [("bogus=1", 1), ("seed=1,bogus=2", 8), ("seed", 1), ("seed=x", 1)],
)
def test_parse_errors(text, column):
    with pytest.raises(ParseError) as e:
        Caps.parse(text)
    assert e.value.column == column


def test_from_env():
    assert Caps.from_env({ENV_VAR: "max_nodes=10"}).max_nodes == 10
    assert Caps.from_env({}) == Caps()
    assert Caps.from_env({ENV_VAR: "  "}) == Caps()


def test_hom_dim_caps():
    caps = Caps()
    assert [caps.hom_dim_cap(p) for p in (2, 3, 5, 7)] == [10, 7, 5, 3]
    assert Caps(max_dim=4).hom_dim_cap(3) == 4


def test_overrides_skip_none():
    caps = Caps(seed=5).with_overrides(seed=None, max_dim=2)
    assert caps.seed == 5
    assert caps.max_dim == 2


def test_configure_logging():
    configure_logging(2)
    configure_logging(2)
    logger = logging.getLogger("auskit")
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 1
    configure_logging(0)
    assert logger.level == logging.WARNING
