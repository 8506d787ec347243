import pytest
from hypothesis import given, settings, strategies as st

from conftest import SUBCLASS, THING, iri, prepare
from kg_path_features.exceptions import InvalidInputError
from kg_path_features.neighbors import BACKWARD, FORWARD
from kg_path_features.pathfeat import (
    PATH, PATTERN, Atom, PathFeature, atom_more_specific, enumerate_generalizations,
    feature_more_specific, render,
)
from kg_path_features.utils import Blacklist


@pytest.fixture
def atom(ids):
    def make(p, e, is_class=False, direction=FORWARD):
        element = ids.top if e == "top" else ids.v(e)
        return Atom(ids.p(p), direction, element, is_class)
    return make


def test_atom_order(fig1, atom):
    ont = fig1.ontology
    assert atom_more_specific(atom("p2", "v3"), atom("p2", "T3", True), ont)
    assert atom_more_specific(atom("p2", "T2", True), atom("p2", "T3", True), ont)
    assert not atom_more_specific(atom("p1", "v2"), atom("p2", "v2"), ont)
    assert not atom_more_specific(atom("p2", "v3"), atom("p2", "v3", direction=BACKWARD), ont)


def test_feature_order(fig1, atom):
    ont = fig1.ontology
    path = (atom("p1", "v2"), atom("p2", "v3"))
    pattern = (atom("p1", "T1", True), atom("p2", "T3", True))
    assert feature_more_specific(path, pattern, ont)
    assert not feature_more_specific(pattern, path, ont)
    assert feature_more_specific(pattern, pattern, ont)
    assert not feature_more_specific(pattern[:1], pattern, ont)
    assert feature_more_specific(PathFeature(path), PathFeature(pattern), ont)


def test_kind(atom):
    assert PathFeature((atom("p1", "v2"),)).kind == PATH
    assert PathFeature((atom("p1", "v2"), atom("p2", "T3", True))).kind == PATTERN


def test_render(fig1, atom):
    pattern = (atom("p1", "T1", True), atom("p2", "v3", direction=BACKWARD))
    assert render(pattern, fig1.tables) == (
        f"-[{iri('p1')}]->({iri('T1')}#class)<-[{iri('p2')}]-({iri('v3')})"
    )


def test_generalization_counts(fig1, atom):
    ont = fig1.ontology
    two = (atom("p1", "v2"), atom("p2", "v3"))
    three = two + (atom("p3", "v6"),)
    assert len(enumerate_generalizations(two, ont, 2)) == 11
    assert len(enumerate_generalizations(two, ont, 5)) == 11
    assert len(enumerate_generalizations(three, ont, 2)) == 23
    assert enumerate_generalizations(two, ont, 0, Blacklist.from_entries([THING])) == set()
    assert all(feature_more_specific(three, g, ont) for g in enumerate_generalizations(three, ont, 2))


def test_only_paths_are_enumerated(fig1, atom):
    with pytest.raises(InvalidInputError):
        enumerate_generalizations((atom("p1", "T1", True),), fig1.ontology, 2)


@st.composite
def orders(draw):
    n = draw(st.integers(1, 6))
    triples = [(f"C{i}", SUBCLASS, f"C{j}") for i in range(1, n) for j in draw(st.sets(st.integers(0, i - 1), max_size=2))]
    triples += [(f"i{v}", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", f"C{draw(st.integers(0, n - 1))}") for v in range(3)]
    ctx = prepare(triples, ["i0"])
    table = ctx.tables.vertices
    elements = [(table.lookup(iri(f"i{v}")), False) for v in range(3)]
    elements += [(table.lookup(iri(f"C{c}")), True) for c in range(n) if table.lookup(iri(f"C{c}")) is not None]
    elements.append((ctx.ontology.top, True))
    feature = st.lists(st.sampled_from(elements), min_size=2, max_size=2).map(
        lambda es: tuple(Atom(0, FORWARD, e, c) for e, c in es)
    )
    return ctx.ontology, draw(feature), draw(feature), draw(feature)


@settings(max_examples=200)
@given(orders())
def test_more_specific_is_a_partial_order(case):
    ont, a, b, c = case
    assert feature_more_specific(a, a, ont)
    if feature_more_specific(a, b, ont) and feature_more_specific(b, a, ont):
        assert a == b
    if feature_more_specific(a, b, ont) and feature_more_specific(b, c, ont):
        assert feature_more_specific(a, c, ont)
