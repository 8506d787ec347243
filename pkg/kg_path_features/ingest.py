"""
Loading of N-Triples files into a raw directed labeled multigraph.

Literal objects are counted and discarded together with their arcs; subjects
of such triples still become vertices. Exact duplicate triples collapse into
one arc. Parsing of a single line is delegated to rdflib's N-Triples parser so
that errors can be reported with their line number.
"""

import re
from dataclasses import dataclass, field

from rdflib import BNode, Literal
from rdflib.exceptions import ParserError
from rdflib.plugins.parsers.ntriples import W3CNTriplesParser

from kg_path_features.exceptions import InputIOError, InvalidInputError, ParseError
from kg_path_features.symbols import PREDICATE, TOP_KEY, VERTEX, SymbolTable
from kg_path_features.utils import logger, read_list_file

# `<a>` style IRI without a scheme, which the N-Triples grammar rejects
RELATIVE_IRI = re.compile(r"<[^:<>\s]*>")


@dataclass
class SymbolTables:
    vertices: SymbolTable = field(default_factory=lambda: SymbolTable(VERTEX))
    predicates: SymbolTable = field(default_factory=lambda: SymbolTable(PREDICATE))

    def __post_init__(self):
        # the top class always owns vertex id 0
        self.top = self.vertices.intern(TOP_KEY)


@dataclass
class RawGraph:
    vertices: set = field(default_factory=set)
    arcs: list = field(default_factory=list)  # (source, predicate, target)
    counts: dict = field(default_factory=lambda: {"parsed": 0, "kept": 0, "duplicates": 0, "dropped_literal": 0})


class _BlankNodeLabels(dict):
    """bnode context remembering the document label of every generated BNode."""

    def __init__(self):
        super().__init__()
        self.labels = {}

    def __setitem__(self, label, bnode):
        super().__setitem__(label, bnode)
        self.labels[str(bnode)] = label


class _TripleSink:
    def __init__(self):
        self.triples = []

    def triple(self, s, p, o):
        self.triples.append((s, p, o))


def _term_key(term, bnodes):
    if isinstance(term, BNode):
        return "_:" + bnodes.labels.get(str(term), str(term))
    return str(term)


def load_triples(path, tables):
    """Parse `path` (N-Triples, UTF-8) into a RawGraph interned in `tables`."""
    sink = _TripleSink()
    bnodes = _BlankNodeLabels()
    parser = W3CNTriplesParser(sink=sink, bnode_context=bnodes)
    graph = RawGraph()
    seen = set()

    try:
        f = open(path, encoding="utf-8")
    except OSError as e:
        raise InputIOError(f"cannot read graph {path}: {e}")
    with f:
        for line_number, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            sink.triples.clear()
            try:
                parser.parsestring(stripped + "\n")
            except ParserError as e:
                message = f"malformed triple {stripped!r} ({e})"
                if RELATIVE_IRI.search(stripped):
                    message += "; IRIs must be absolute, e.g. <http://ex.org/a> instead of <a>"
                raise ParseError(message, line_number=line_number)
            except UnicodeDecodeError as e:
                raise ParseError(f"invalid UTF-8 ({e})", line_number=line_number)
            if not sink.triples:
                raise ParseError(f"no triple found in {stripped!r}", line_number=line_number)

            for s, p, o in sink.triples:
                graph.counts["parsed"] += 1
                source = tables.vertices.intern(_term_key(s, bnodes))
                graph.vertices.add(source)
                if isinstance(o, Literal):
                    graph.counts["dropped_literal"] += 1
                    continue
                arc = (source, tables.predicates.intern(str(p)), tables.vertices.intern(_term_key(o, bnodes)))
                if arc in seen:
                    graph.counts["duplicates"] += 1
                    continue
                seen.add(arc)
                graph.vertices.add(arc[2])
                graph.arcs.append(arc)

    graph.counts["kept"] = len(graph.arcs)
    logger("ingest").info(
        "loaded %s: %d triples, %d arcs kept, %d literal triples dropped, %d duplicates",
        path, graph.counts["parsed"], graph.counts["kept"], graph.counts["dropped_literal"], graph.counts["duplicates"],
    )
    return graph


def load_seed_list(path, tables, graph=None):
    """Seed ids in file order, duplicates collapsed; unknown URIs only warn."""
    uris = read_list_file(path)
    if not uris:
        raise InvalidInputError(f"seed file {path} lists no URI")
    seeds, known = [], set()
    for uri in uris:
        sid = tables.vertices.intern(uri)
        if sid in known:
            logger("ingest").warning("seed %s listed more than once", uri)
            continue
        if graph is not None and sid not in graph.vertices:
            logger("ingest").warning("seed %s does not occur in the graph", uri)
        known.add(sid)
        seeds.append(sid)
    return seeds
