# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The built-in example catalog: algebra files and their expected facts."""

import logging
import tomllib
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum, auto
from functools import cache
from importlib.resources import files
from typing import Any

from .algebra import Algebra, build_algebra
from .ar import hom_through_proj
from .config import Caps
from .determine import GammaModule, gamma_module
from .errors import InputError, ParseError, UnknownIdentifierError
from .factor import FactorizationLattice, REClass, enumerate_classes
from .krs import is_isomorphic
from .lattice import FiniteLattice, classify_shape, submodule_lattice
from .parsing import Expressions, parse_algebra_document
from .rep import Rep

logger = logging.getLogger(__name__)

CATALOG = files("auskit") / "catalog"


class Provenance(StrEnum):
    published = auto()
    derived = auto()


@dataclass(frozen=True)
class Fact:
    value: Any
    provenance: Provenance


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    description: str
    algebra: str
    c: str
    y: str
    facts: dict[str, Fact]
    enumerate: bool = True


@dataclass
class FactResult:
    key: str
    expected: Fact
    observed: object
    passed: bool


@dataclass
class ExampleResult:
    spec: ExampleSpec
    facts: list[FactResult] = field(default_factory=list[FactResult])
    classes: FactorizationLattice | None = None

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.facts) and (
            self.classes is None or self.classes.report.passed
        )


@dataclass(frozen=True, eq=False)
class LoadedAlgebra:
    algebra: Algebra
    expressions: Expressions

    @property
    def names(self) -> dict[str, Rep]:
        return self.expressions.names


def load_algebra_text(text: str, caps: Caps | None = None) -> LoadedAlgebra:
    caps = caps or Caps()
    document = parse_algebra_document(text)
    algebra = build_algebra(document.presentation, caps.max_path_length)
    expressions = Expressions(algebra)
    expressions.define(document.modules)
    return LoadedAlgebra(algebra, expressions)


@cache
def catalog_algebra(filename: str) -> LoadedAlgebra:
    resource = CATALOG / filename
    if not resource.is_file():
        msg = f"No algebra file {filename!r} in the catalog"
        raise UnknownIdentifierError(msg)
    return load_algebra_text(resource.read_text("utf-8"))


def _fact(key: str, raw: object) -> Fact:
    if not isinstance(raw, dict) or {"value", "provenance"} - raw.keys():
        msg = f"Fact {key!r} needs a value and a provenance"
        raise ParseError(msg)
    data: dict[str, Any] = raw  # pyright: ignore[reportUnknownVariableType]
    try:
        provenance = Provenance(data["provenance"])
    except ValueError:
        msg = f"Fact {key!r} has unknown provenance {data['provenance']!r}"
        raise ParseError(msg) from None
    return Fact(data["value"], provenance)


def parse_examples(text: str) -> list[ExampleSpec]:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ParseError(str(e)) from None
    out: list[ExampleSpec] = []
    for entry in data.get("example", []):
        facts = {k: _fact(k, v) for k, v in entry.get("facts", {}).items()}
        unknown = facts.keys() - FACTS.keys()
        if unknown:
            msg = f"Example {entry['name']!r} has unknown facts: {', '.join(sorted(unknown))}"
            raise ParseError(msg)
        out.append(
            ExampleSpec(
                entry["name"],
                entry.get("description", ""),
                entry["algebra"],
                entry["c"],
                entry["y"],
                facts,
                entry.get("enumerate", True),
            )
        )
    return out


@cache
def load_examples() -> tuple[ExampleSpec, ...]:
    return tuple(parse_examples((CATALOG / "examples.toml").read_text("utf-8")))


def find_example(name: str) -> ExampleSpec:
    for spec in load_examples():
        if spec.name == name:
            return spec
    msg = f"No example named {name!r}"
    raise UnknownIdentifierError(msg)


@dataclass
class _Context:
    loaded: LoadedAlgebra
    c: Rep
    y: Rep
    caps: Caps
    enumerate: bool
    _gamma: GammaModule | None = None
    _lattice: FiniteLattice | None = None
    _classes: FactorizationLattice | None = None

    @property
    def gamma(self) -> GammaModule:
        if self._gamma is None:
            self._gamma = gamma_module(self.c, self.y)
        return self._gamma

    @property
    def lattice(self) -> FiniteLattice:
        if self._classes is not None:
            return self._classes.lattice
        if self._lattice is None:
            self._lattice = submodule_lattice(self.gamma, self.caps)
        return self._lattice

    @property
    def classes(self) -> FactorizationLattice:
        if self._classes is None:
            if not self.enumerate:
                msg = "This fact needs the class enumeration, which the example turns off"
                raise InputError(msg)
            self._classes = enumerate_classes(self.c, self.y, self.caps)
        return self._classes

    def module(self, text: str) -> Rep:
        if text == "0":
            return Rep.zero(self.loaded.algebra)
        return self.loaded.expressions.module(text)

    def same(self, rep: Rep, text: str) -> bool:
        return is_isomorphic(rep, self.module(text))


def _chain_sources(ctx: _Context, expected: object) -> tuple[object, bool]:
    ordered = sorted(ctx.classes.classes, key=lambda k: ctx.lattice.nodes[k.node].height)
    observed = [k.source_description for k in ordered]
    if not isinstance(expected, list):
        return observed, False
    texts = [str(e) for e in expected]  # pyright: ignore[reportUnknownVariableType]
    if len(texts) != len(ordered):
        return observed, False
    return observed, all(ctx.same(k.source, t) for k, t in zip(ordered, texts, strict=True))


def _zero_source(ctx: _Context, expected: object) -> tuple[object, bool]:
    bottom = ctx.classes.classes[ctx.lattice.bottom]
    return bottom.source_description, ctx.same(bottom.source, str(expected))


def _items(value: object) -> list[object]:
    if not isinstance(value, list):
        return [value]
    return list(value)  # pyright: ignore[reportUnknownArgumentType]


def _level_sources(ctx: _Context, expected: object) -> tuple[object, bool]:
    """Sources grouped by height, bottom first; a level matches in any order."""
    levels: dict[int, list[REClass]] = {}
    for k in ctx.classes.classes:
        levels.setdefault(ctx.lattice.nodes[k.node].height, []).append(k)
    ordered = [levels[h] for h in sorted(levels)]
    observed = [[k.source_description for k in level] for level in ordered]
    wanted = [[str(t) for t in _items(level)] for level in _items(expected)]
    if len(wanted) != len(ordered):
        return observed, False
    for level, texts in zip(ordered, wanted, strict=True):
        if len(texts) != len(level):
            return observed, False
        for k in level:
            hit = next((t for t in texts if ctx.same(k.source, t)), None)
            if hit is None:
                return observed, False
            texts.remove(hit)
    return observed, True


def _marker_source(ctx: _Context, expected: object) -> tuple[object, bool]:
    """Source of the class whose submodule is Hom(C, projectives, Y)."""
    marked = ctx.classes.classes[ctx.lattice.find(hom_through_proj(ctx.c, ctx.y))]
    return marked.source_description, ctx.same(marked.source, str(expected))


type FactCheck = Callable[[_Context, object], tuple[object, bool]]


def _plain(compute: Callable[[_Context], object]) -> FactCheck:
    def check(ctx: _Context, expected: object) -> tuple[object, bool]:
        observed = compute(ctx)
        return observed, observed == expected

    return check


FACTS: dict[str, FactCheck] = {
    "hom_dim": _plain(lambda ctx: ctx.gamma.dim),
    "gamma_dim": _plain(lambda ctx: ctx.gamma.end.dim),
    "gamma_length": _plain(lambda ctx: ctx.gamma.length()),
    "distinct_labels": _plain(lambda ctx: sum(1 for n in ctx.gamma.total if n)),
    "max_multiplicity": _plain(lambda ctx: max(ctx.gamma.total, default=0)),
    "c_dimvec": _plain(lambda ctx: list(ctx.c.dims)),
    "nodes": _plain(lambda ctx: len(ctx.lattice)),
    "height": _plain(lambda ctx: ctx.lattice.height),
    "shape": _plain(lambda ctx: str(classify_shape(ctx.lattice))),
    "length_one": _plain(lambda ctx: sum(1 for k in ctx.classes.classes if k.c_length == 1)),
    "through_projective_length": _plain(
        lambda ctx: ctx.gamma.length(hom_through_proj(ctx.c, ctx.y))
    ),
    "chain_sources": _chain_sources,
    "zero_source": _zero_source,
    "level_sources": _level_sources,
    "marker_source": _marker_source,
    "edges": _plain(lambda ctx: len(ctx.lattice.covers)),
}


def run_example(spec: ExampleSpec, caps: Caps | None = None) -> ExampleResult:
    caps = caps or Caps()
    loaded = catalog_algebra(spec.algebra)
    c = loaded.expressions.module(spec.c)
    y = loaded.expressions.module(spec.y)
    ctx = _Context(loaded, c, y, caps, spec.enumerate)
    result = ExampleResult(spec)
    if spec.enumerate:
        result.classes = ctx.classes
    for key, fact in spec.facts.items():
        observed, passed = FACTS[key](ctx, fact.value)
        result.facts.append(FactResult(key, fact, observed, passed))
        if not passed:
            logger.warning(
                "%s: %s is %r, expected %r (%s)",
                spec.name, key, observed, fact.value, fact.provenance,
            )  # fmt: skip
    logger.info("example %s: %s", spec.name, "passed" if result.passed else "FAILED")
    return result
