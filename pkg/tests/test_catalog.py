# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import pytest

from auskit.catalog import (
    ExampleSpec,
    Fact,
    Provenance,
    catalog_algebra,
    find_example,
    load_examples,
    parse_examples,
    run_example,
)
from auskit.errors import InputError, ParseError, UnknownIdentifierError
from auskit.factor import determiner_checks, enumerate_classes

QUICK = ["a2", "a3-linear", "a3-linear-type-one", "a3-radsq", "loop-b", "kron2-preprojective"]

ENTRY = """
[[example]]
name = "t"
algebra = "a2.alg"
c = "P(a)"
y = "P(b)"
"""


def test_catalog_is_well_formed():
    specs = load_examples()
    assert len(specs) == 20
    assert len({s.name for s in specs}) == len(specs)
    for spec in specs:
        assert spec.facts
        loaded = catalog_algebra(spec.algebra)
        assert loaded.expressions.module(spec.c).dim > 0
        assert loaded.expressions.module(spec.y).dim > 0
    assert not find_example("subspace3-hammock").enumerate


def test_lookup_errors():
    with pytest.raises(UnknownIdentifierError):
        find_example("no-such-example")
    with pytest.raises(UnknownIdentifierError):
        catalog_algebra("no-such-file.alg")


def test_fact_parsing():
    (spec,) = parse_examples(ENTRY + 'facts.hom_dim = { value = 1, provenance = "published" }\n')
    assert spec.facts["hom_dim"] == Fact(1, Provenance.published)
    assert spec.enumerate
    with pytest.raises(ParseError):
        parse_examples(ENTRY + 'facts.colour = { value = 1, provenance = "published" }\n')
    with pytest.raises(ParseError):
        parse_examples(ENTRY + 'facts.hom_dim = { value = 1, provenance = "folklore" }\n')
    with pytest.raises(ParseError):
        parse_examples(ENTRY + "facts.hom_dim = { value = 1 }\n")
    with pytest.raises(ParseError):
        parse_examples(ENTRY + "facts.hom_dim = \n")


def test_mismatches_are_reported():
    spec = ExampleSpec(
        "wrong", "", "a2.alg", "P(a) ++ P(b)", "P(b)", {"hom_dim": Fact(3, Provenance.derived)}
    )
    result = run_example(spec)
    assert not result.passed
    (fact,) = result.facts
    assert fact.observed == 2
    assert not fact.passed


def test_class_facts_need_enumeration():
    facts = {"length_one": Fact(1, Provenance.derived)}
    spec = ExampleSpec("t", "", "a2.alg", "P(a)", "P(b)", facts, enumerate=False)
    with pytest.raises(InputError):
        run_example(spec)


def test_lattice_position_facts():
    facts = {
        "edges": Fact(2, Provenance.derived),
        "level_sources": Fact([["0"], ["P(a)"], ["P(b)"]], Provenance.derived),
        "marker_source": Fact("P(b)", Provenance.derived),
        "zero_source": Fact("0", Provenance.derived),
    }
    spec = ExampleSpec("t", "", "a2.alg", "P(a) ++ P(b)", "P(b)", facts)
    result = run_example(spec)
    assert result.passed, [f for f in result.facts if not f.passed]

    facts = {
        "level_sources": Fact([["0"], ["P(b)"], ["P(a)"]], Provenance.derived),
        "marker_source": Fact("P(a)", Provenance.derived),
    }
    result = run_example(ExampleSpec("t", "", "a2.alg", "P(a) ++ P(b)", "P(b)", facts))
    assert not any(f.passed for f in result.facts)
    levels = next(f for f in result.facts if f.key == "level_sources")
    assert [len(level) for level in levels.observed] == [1, 1, 1]


@pytest.mark.parametrize("name", QUICK)
def test_quick_examples(name):
    result = run_example(find_example(name))
    assert result.passed, [f for f in result.facts if not f.passed]


@pytest.mark.slow
@pytest.mark.parametrize("name", [s.name for s in load_examples() if s.name not in QUICK])
def test_remaining_examples(name):
    result = run_example(find_example(name))
    assert result.passed, [f for f in result.facts if not f.passed]


def _determiner_failures(name):
    spec = find_example(name)
    loaded = catalog_algebra(spec.algebra)
    c, y = loaded.expressions.module(spec.c), loaded.expressions.module(spec.y)
    checks = determiner_checks(enumerate_classes(c, y))
    assert checks
    return [check for check in checks if not check.passed]


ENUMERATED = [s.name for s in load_examples() if s.enumerate]


@pytest.mark.parametrize("name", [n for n in ENUMERATED if n in QUICK])
def test_determiners_quick(name):
    assert _determiner_failures(name) == []


@pytest.mark.slow
@pytest.mark.parametrize("name", [n for n in ENUMERATED if n not in QUICK])
def test_determiners_remaining(name):
    assert _determiner_failures(name) == []
