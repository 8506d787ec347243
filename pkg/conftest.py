from types import SimpleNamespace

import pytest

from kg_path_features.canonical import canonicalize
from kg_path_features.ingest import RawGraph, SymbolTables, load_seed_list, load_triples
from kg_path_features.ontology import OntologyIndex
from kg_path_features.settings import MiningSettings

EX = "http://ex.org/"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
SUBCLASS = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
SAMEAS = "http://www.w3.org/2002/07/owl#sameAs"
THING = "http://www.w3.org/2002/07/owl#Thing"


def iri(name):
    return name if name.startswith("http") else EX + name


# The small running example: seeds n1 and n2, a hub v1 with five onward arcs,
# two three-arc paths meeting in v6 and a class hierarchy under owl:Thing.
FIG1_ARCS = [
    ("n1", "p4", "v1"), ("n2", "p4", "v1"),
    ("n1", "p6", "v8"), ("n2", "p6", "v9"),
    ("v7", "p5", "n2"),
    ("n1", "p1", "v2"), ("v2", "p2", "v3"), ("v3", "p3", "v6"),
    ("n2", "p1", "v4"), ("v4", "p2", "v5"), ("v5", "p3", "v6"),
] + [("v1", "p7", f"x{i}") for i in range(1, 6)]
FIG1_TYPES = [
    ("v2", "T1"), ("v3", "T2"), ("v8", "T5"), ("v8", "T6"),
    ("v9", "T6"), ("v9", "T5"), ("v4", "T1"), ("v5", "T4"),
]
FIG1_SUBCLASSES = [
    ("T5", THING), ("T6", THING), ("T1", THING), ("T2", "T3"), ("T3", THING), ("T4", "T3"),
]
FIG1_SETTINGS = dict(k=3, t=2, d=4, u=False, l_min=2, l_max=3)


def fig1_triples():
    triples = [(iri(s), iri(p), iri(o)) for s, p, o in FIG1_ARCS]
    triples += [(iri(v), RDF_TYPE, iri(c)) for v, c in FIG1_TYPES]
    triples += [(iri(a), SUBCLASS, iri(b)) for a, b in FIG1_SUBCLASSES]
    return triples


def write_nt(path, triples):
    with open(path, "w", encoding="utf-8") as f:
        for s, p, o in triples:
            f.write(f"<{s}> <{p}> <{o}> .\n")
    return path


def raw_graph(tables, triples):
    graph, seen = RawGraph(), set()
    for s, p, o in triples:
        arc = (tables.vertices.intern(iri(s)), tables.predicates.intern(iri(p)), tables.vertices.intern(iri(o)))
        graph.vertices.update((arc[0], arc[2]))
        if arc not in seen:
            seen.add(arc)
            graph.arcs.append(arc)
    graph.counts["kept"] = len(graph.arcs)
    return graph


def prepare(triples, seeds, tables=None, raw=None, **values):
    """Canonical graph, ontology and settings the way the pipeline builds them."""
    settings = MiningSettings(**values)
    settings.validate()
    tables = tables or SymbolTables()
    raw = raw or raw_graph(tables, triples)
    seed_ids = [tables.vertices.intern(iri(s)) for s in seeds]
    type_p = tables.predicates.lookup(settings.type_uri)
    subclass_p = tables.predicates.lookup(settings.subclassof_uri)
    graph = canonicalize(raw, tables.predicates.lookup(settings.sameas_uri), seed_ids, tables, (type_p, subclass_p))
    ontology = OntologyIndex.from_settings(graph, tables, settings)
    return SimpleNamespace(tables=tables, raw=raw, graph=graph, ontology=ontology, settings=settings)


@pytest.fixture
def fig1_files(tmp_path):
    graph = write_nt(tmp_path / "fig1.nt", fig1_triples())
    seeds = tmp_path / "seeds.txt"
    seeds.write_text(f"{iri('n1')}\n{iri('n2')}\n", encoding="utf-8")
    return SimpleNamespace(graph=graph, seeds=seeds, dir=tmp_path)


@pytest.fixture
def fig1(fig1_files):
    tables = SymbolTables()
    raw = load_triples(fig1_files.graph, tables)
    load_seed_list(fig1_files.seeds, tables, raw)
    return prepare(None, ["n1", "n2"], tables=tables, raw=raw, **FIG1_SETTINGS)


@pytest.fixture
def ids(fig1):
    """Short name -> id lookups on the example graph."""
    def vertex(name):
        return fig1.tables.vertices.lookup(iri(name))

    def predicate(name):
        return fig1.tables.predicates.lookup(iri(name))

    return SimpleNamespace(v=vertex, p=predicate, top=fig1.ontology.top)
