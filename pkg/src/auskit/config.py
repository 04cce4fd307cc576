# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import logging
import os
from dataclasses import dataclass, fields, replace
from typing import TYPE_CHECKING, Any

from rich.logging import RichHandler

from .errors import ParseError

if TYPE_CHECKING:
    from collections.abc import Mapping

ENV_VAR = "AUSKIT_CAPS"

_HOM_DIM_DEFAULTS = {2: 10, 3: 7, 5: 5}


@dataclass(frozen=True)
class Caps:
    """Bounds on every exhaustive enumeration.

    `max_dim` and `max_ext_mult` default to None, meaning the per-field Hom
    dimension cap and the Ext-length bound respectively.
    """

    max_dim: int | None = None
    max_ext_mult: int | None = None
    max_subspaces: int = 10**6
    max_path_length: int = 30
    max_nodes: int = 20000
    seed: int = 0
    injectivity_samples: int = 2
    meet_samples: int = 50
    probes: int = 20

    def hom_dim_cap(self, p: int) -> int:
        if self.max_dim is not None:
            return self.max_dim
        if p in _HOM_DIM_DEFAULTS:
            return _HOM_DIM_DEFAULTS[p]
        n = 0
        while p ** (n + 1) <= 2**10:
            n += 1
        return n

    def with_overrides(self, **overrides: Any) -> "Caps":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def parse(cls, text: str) -> "Caps":
        names = {f.name for f in fields(cls)}
        values: dict[str, int] = {}
        for column, item in _items(text):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in names:
                msg = f"Bad {ENV_VAR} entry {item!r}"
                raise ParseError(msg, column=column)
            try:
                values[key] = int(value)
            except ValueError:
                msg = f"{ENV_VAR} value for {key} is not an integer"
                raise ParseError(msg, column=column) from None
        return cls(**values)

    @classmethod
    def from_env(cls, env: "Mapping[str, str] | None" = None) -> "Caps":
        text = (os.environ if env is None else env).get(ENV_VAR, "")
        return cls.parse(text) if text.strip() else cls()


def _items(text: str) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    column = 1
    for item in text.split(","):
        if item.strip():
            out.append((column, item))
        column += len(item) + 1
    return out


def configure_logging(verbosity: int = 0) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logger = logging.getLogger("auskit")
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        logger.addHandler(RichHandler(show_path=False, markup=False))
