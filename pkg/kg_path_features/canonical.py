"""
Contraction of owl:sameAs arcs into the canonical graph.

Two raw vertices share a canonical vertex iff they are connected in the
undirected subgraph of sameAs arcs. The canonical id of a component is the
vertex id of its lexicographically smallest member URI.
"""

from collections import defaultdict
from dataclasses import dataclass, field

from kg_path_features.exceptions import NotFoundError
from kg_path_features.utils import logger


class UnionFind:
    """Disjoint sets over hashable items, union by size with path halving."""

    def __init__(self, items=()):
        self._parent = {}
        self._size = {}
        self.unions = 0
        for item in items:
            self.add(item)

    def add(self, item):
        if item not in self._parent:
            self._parent[item] = item
            self._size[item] = 1

    def find(self, item):
        self.add(item)
        parent = self._parent
        while parent[item] != item:
            parent[item] = parent[parent[item]]
            item = parent[item]
        return item

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]
        self.unions += 1
        return True

    def groups(self):
        out = defaultdict(set)
        for item in self._parent:
            out[self.find(item)].add(item)
        return dict(out)


@dataclass
class CanonicalGraph:
    table: object  # vertex SymbolTable
    predicates: object = None  # predicate SymbolTable
    vertices: set = field(default_factory=set)
    out_adj: dict = field(default_factory=lambda: defaultdict(list))  # v -> [(predicate, target)]
    in_adj: dict = field(default_factory=lambda: defaultdict(list))  # v -> [(predicate, source)]
    lam: dict = field(default_factory=dict)
    members: dict = field(default_factory=dict)
    seeds: list = field(default_factory=list)
    seed_merges: dict = field(default_factory=dict)  # canonical seed -> merged raw seeds
    cross_kind_merges: list = field(default_factory=list)
    unions: int = 0

    def canonical_label(self, v):
        if v not in self.vertices:
            raise NotFoundError(f"no canonical vertex {v!r}")
        return self.table.resolve(v)

    def arcs(self):
        for source in sorted(self.out_adj):
            for predicate, target in self.out_adj[source]:
                yield source, predicate, target

    @property
    def arc_count(self):
        return sum(len(adj) for adj in self.out_adj.values())


def canonicalize(graph, sameas_predicate, seeds, tables, class_predicates=None):
    """
    Merge sameAs components of `graph` and map `seeds` (raw ids, ordered)
    onto canonical seeds. `class_predicates` = (type, subClassOf) predicate ids
    lets the contraction report components mixing classes and individuals.
    """
    log = logger("canonical")
    table = tables.vertices
    uf = UnionFind(sorted(graph.vertices | set(seeds)))
    for source, predicate, target in graph.arcs:
        if predicate == sameas_predicate:
            uf.union(source, target)

    cg = CanonicalGraph(table=table, predicates=tables.predicates, unions=uf.unions)
    for component in uf.groups().values():
        rep = min(component, key=table.resolve)
        cg.vertices.add(rep)
        cg.members[rep] = component
        for raw in component:
            cg.lam[raw] = rep

    seen = set()
    for source, predicate, target in graph.arcs:
        if predicate == sameas_predicate:
            continue
        arc = (cg.lam[source], predicate, cg.lam[target])
        if arc in seen:
            continue
        seen.add(arc)
        cg.out_adj[arc[0]].append((predicate, arc[2]))
        cg.in_adj[arc[2]].append((predicate, arc[0]))

    by_canonical = defaultdict(list)
    for raw in seeds:
        canonical = cg.lam[raw]
        if canonical not in by_canonical:
            cg.seeds.append(canonical)
        by_canonical[canonical].append(raw)
    for canonical, raws in by_canonical.items():
        if len(raws) > 1:
            cg.seed_merges[canonical] = raws
            log.warning(
                "seeds %s identified as one entity %s",
                ", ".join(table.resolve(r) for r in raws), table.resolve(canonical),
            )

    if class_predicates:
        classes = set()
        type_p, subclass_p = class_predicates
        for source, predicate, target in graph.arcs:
            if predicate == type_p:
                classes.add(target)
            elif predicate == subclass_p:
                classes.update((source, target))
        for rep, component in cg.members.items():
            if len(component) > 1 and (component & classes) and (component - classes):
                cg.cross_kind_merges.append(rep)
                log.warning("sameAs merges classes and individuals into %s", table.resolve(rep))

    log.info(
        "canonical graph: %d vertices (%d merges), %d arcs, %d seeds",
        len(cg.vertices), cg.unions, cg.arc_count, len(cg.seeds),
    )
    return cg


def dump_members_tsv(graph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rep in sorted(graph.members):
            uris = sorted(graph.table.resolve(m) for m in graph.members[rep])
            f.write(f"{rep}\t" + "\t".join(uris) + "\n")
