"""
Constrained breadth-first search from the canonical seeds.

The frontier of each level maps a vertex to the bitset of seeds (by ordinal)
that reach it at exactly that distance, so one pass serves every seed. Seeds
are always expanded; other vertices are not expanded once they are hubs.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from kg_path_features.utils import logger

FORWARD = 0
BACKWARD = 1


@dataclass(frozen=True)
class SupportSet:
    """Seeds as bits of an int, indexed by seed ordinal."""

    bits: int = 0

    @classmethod
    def of(cls, ordinals):
        bits = 0
        for i in ordinals:
            bits |= 1 << i
        return cls(bits)

    def __or__(self, other):
        return SupportSet(self.bits | other.bits)

    def __and__(self, other):
        return SupportSet(self.bits & other.bits)

    def __len__(self):
        return self.bits.bit_count()

    def __iter__(self):
        return iter(self.ordinals())

    def __contains__(self, ordinal):
        return bool(self.bits >> ordinal & 1)

    def issubset(self, other):
        return self.bits & ~other.bits == 0

    def ordinals(self):
        out, bits, i = [], self.bits, 0
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return out

    def seeds(self, seeds):
        return [seeds[i] for i in self.ordinals()]


EMPTY = SupportSet()


class Traversal:
    """Arc permissions shared by neighbor mining and path expansion."""

    def __init__(self, graph, ontology, settings):
        self.graph = graph
        self.ontology = ontology
        self.u = bool(settings.u)
        self.d = settings.d
        self.b_exp = settings.exp_blacklist
        blacklist = settings.predicate_blacklist
        predicates = graph.predicates
        self.blocked = frozenset(
            pid for pid, uri in (predicates.items() if predicates is not None else ()) if blacklist.matches(uri)
        )
        self._degree = {}

    def effective_degree(self, v):
        degree = self._degree.get(v)
        if degree is None:
            degree = sum(1 for p, _ in self.graph.out_adj.get(v, ()) if p not in self.blocked)
            if self.u:
                degree += sum(1 for p, _ in self.graph.in_adj.get(v, ()) if p not in self.blocked)
            self._degree[v] = degree
        return degree

    def is_hub(self, v):
        return self.effective_degree(v) > self.d

    def reachable(self, w):
        return not self.ontology.is_instance_of_blacklisted(w, self.b_exp)

    def steps(self, v):
        """(predicate, direction, vertex) moves out of `v`, in adjacency order."""
        for p, w in self.graph.out_adj.get(v, ()):
            if p not in self.blocked and self.reachable(w):
                yield p, FORWARD, w
        if self.u:
            for p, w in self.graph.in_adj.get(v, ()):
                if p not in self.blocked and self.reachable(w):
                    yield p, BACKWARD, w


def effective_degree(graph, v, ontology, settings):
    return Traversal(graph, ontology, settings).effective_degree(v)


@dataclass
class NeighborhoodResult:
    seeds: list
    k: int
    reached_at: list  # level h -> {vertex: seed bits at distance exactly h}
    support: dict = field(default_factory=dict)  # vertex -> SupportSet
    hubs: set = field(default_factory=set)
    interesting_neighbors: set = field(default_factory=set)
    type_support: dict = field(default_factory=dict)  # every instantiated class
    interesting_types: dict = field(default_factory=dict)

    def distance(self, ordinal, v):
        for h, level in enumerate(self.reached_at):
            if level.get(v, 0) >> ordinal & 1:
                return h
        return None

    @property
    def neighbors(self):
        return set(self.support)


def bfs_levels(traversal, seeds, ordinals, k):
    """Levels of the BFS restricted to the seeds at `ordinals`, up to the last non-empty one."""
    frontier = {seeds[i]: 1 << i for i in ordinals}
    merged = {}
    for v, bits in frontier.items():
        merged[v] = merged.get(v, 0) | bits
    frontier = merged
    seen = dict(frontier)
    levels = [dict(frontier)]
    for h in range(1, k + 1):
        nxt = {}
        for v, bits in frontier.items():
            if h > 1 and traversal.is_hub(v):
                continue
            for _, _, w in traversal.steps(v):
                new = bits & ~seen.get(w, 0)
                if new:
                    nxt[w] = nxt.get(w, 0) | new
        for w, bits in nxt.items():
            seen[w] = seen.get(w, 0) | bits
        if not nxt:
            break
        levels.append(nxt)
        frontier = nxt
    return levels


def _chunks(n, parts):
    size = max(1, -(-n // max(1, parts)))
    return [range(i, min(n, i + size)) for i in range(0, n, size)]


def mine_neighbors(graph, ontology, settings, traversal=None):
    traversal = traversal or Traversal(graph, ontology, settings)
    seeds = list(graph.seeds)
    k = settings.k
    reached_at = [{} for _ in range(k + 1)]

    chunks = _chunks(len(seeds), settings.threads)
    if settings.threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            partials = list(pool.map(lambda c: bfs_levels(traversal, seeds, c, k), chunks))
    else:
        partials = [bfs_levels(traversal, seeds, c, k) for c in chunks]
    for levels in partials:
        for h, level in enumerate(levels):
            target = reached_at[h]
            for v, bits in level.items():
                target[v] = target.get(v, 0) | bits

    result = NeighborhoodResult(seeds=seeds, k=k, reached_at=reached_at)
    support = {}
    for level in reached_at[1:]:
        for v, bits in level.items():
            support[v] = support.get(v, 0) | bits
    result.support = {v: SupportSet(bits) for v, bits in support.items()}
    result.hubs = {v for v in result.support if traversal.is_hub(v)}
    result.interesting_neighbors = {
        v for v, s in result.support.items() if settings.l_min <= len(s) <= settings.l_max
    }
    interesting_types(result, ontology, settings)
    logger("neighbors").info(
        "neighbors: %d reached, %d hubs, %d interesting, %d of %d types interesting",
        len(result.support), len(result.hubs), len(result.interesting_neighbors),
        len(result.interesting_types), len(result.type_support),
    )
    return result


def interesting_types(result, ontology, settings):
    """Supports of classes over every reached vertex; keeps those reaching l_min."""
    b_gen = settings.gen_blacklist
    type_support = {}
    for v, s in result.support.items():
        for c in ontology.generalizations(v, settings.t, b_gen):
            type_support[c] = type_support.get(c, EMPTY) | s
    result.type_support = type_support
    result.interesting_types = {c: s for c, s in type_support.items() if len(s) >= settings.l_min}
    return result.interesting_types
