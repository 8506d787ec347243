"""
Class hierarchy index over the canonical graph.

Levels count hops from the vertex: the type arc is hop 1, every subClassOf arc
after it one more. The top class is synthetic (its own reserved vertex id) and
every vertex instantiates it at every level. Type and subClassOf arcs touching
the class the data declares as top (owl:Thing by default) are ignored.
"""

import threading
from collections import defaultdict, deque

from kg_path_features.utils import logger


class OntologyIndex:
    def __init__(self, table, top, type_predicate=None, subclass_predicate=None, top_uri=None):
        self.table = table
        self.top = top
        self.top_uri = top_uri
        self.type_predicate = type_predicate
        self.subclass_predicate = subclass_predicate
        self.direct_types = defaultdict(set)
        self.superclasses = defaultdict(set)
        self.subclasses = defaultdict(set)
        self.instances = defaultdict(set)
        self.classes = {top}
        self._generalizations = {}
        self._ancestors = {}
        self._class_ancestors = {}
        self._blacklisted = {}
        self._lock = threading.Lock()

    @classmethod
    def build(cls, graph, top, type_predicate=None, subclass_predicate=None, top_uri=None, declared_top=None):
        """`declared_top` is the canonical vertex of `top_uri` in the data, if any."""
        index = cls(graph.table, top, type_predicate, subclass_predicate, top_uri)
        ignored = 0
        for source, predicate, target in graph.arcs():
            if predicate not in (type_predicate, subclass_predicate):
                continue
            if declared_top is not None and declared_top in (source, target):
                ignored += 1
                continue
            if predicate == type_predicate:
                index.direct_types[source].add(target)
                index.instances[target].add(source)
                index.classes.add(target)
            else:
                index.superclasses[source].add(target)
                index.subclasses[target].add(source)
                index.classes.update((source, target))
        logger("ontology").info(
            "ontology index: %d classes, %d typed vertices, %d arcs on the declared top class ignored",
            len(index.classes), len(index.direct_types), ignored,
        )
        return index

    @classmethod
    def from_settings(cls, graph, tables, settings):
        declared = tables.vertices.lookup(settings.top_uri)
        return cls.build(
            graph,
            tables.top,
            tables.predicates.lookup(settings.type_uri),
            tables.predicates.lookup(settings.subclassof_uri),
            top_uri=settings.top_uri,
            declared_top=None if declared is None else graph.lam.get(declared, declared),
        )

    def is_class(self, e):
        return e in self.classes

    def uri(self, e):
        if e == self.top and self.top_uri:
            return self.top_uri
        return self.table.resolve(e)

    def levels(self, v, t):
        """Class -> minimum hop count from `v`, for classes within `t` hops."""
        if t < 1:
            return {}
        found = {}
        queue = deque()
        for c in sorted(self.direct_types.get(v, ())):
            found[c] = 1
            queue.append(c)
        while queue:
            c = queue.popleft()
            if found[c] >= t:
                continue
            for sup in sorted(self.superclasses.get(c, ())):
                if sup not in found:
                    found[sup] = found[c] + 1
                    queue.append(sup)
        return found

    def instantiates(self, v, T, t, b_gen=None):
        return T in self.generalizations(v, t, b_gen)

    def generalizations(self, v, t, b_gen=None):
        key = (v, t, b_gen)
        cached = self._generalizations.get(key)
        if cached is not None:
            return cached
        classes = set(self.levels(v, t))
        classes.add(self.top)
        if b_gen:
            classes = {c for c in classes if not b_gen.matches(self.uri(c))}
        cached = frozenset(classes)
        with self._lock:
            return self._generalizations.setdefault(key, cached)

    def _closure(self, start):
        seen = set()
        stack = list(start)
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            stack.extend(self.superclasses.get(c, ()))
        return frozenset(seen)

    def ancestors(self, v):
        """Every class reachable from `v` by a type arc then any subClassOf arcs."""
        cached = self._ancestors.get(v)
        if cached is None:
            cached = self._closure(self.direct_types.get(v, ()))
            with self._lock:
                self._ancestors[v] = cached
        return cached

    def class_ancestors(self, c):
        """Strict superclasses of `c` (c itself only on a cycle)."""
        cached = self._class_ancestors.get(c)
        if cached is None:
            cached = self._closure(self.superclasses.get(c, ()))
            with self._lock:
                self._class_ancestors[c] = cached
        return cached

    def is_instance_of_blacklisted(self, v, b_exp):
        if not b_exp:
            return False
        key = (v, b_exp)
        cached = self._blacklisted.get(key)
        if cached is None:
            cached = any(b_exp.matches(self.uri(c)) for c in self.ancestors(v))
            with self._lock:
                self._blacklisted[key] = cached
        return cached

    def element_more_specific(self, a, a_is_class, b, b_is_class):
        if a == b and a_is_class == b_is_class:
            return True
        if not b_is_class:
            return False
        if b == self.top:
            return True
        if a_is_class:
            return b in self.class_ancestors(a)
        return b in self.ancestors(a)

    def instances_of(self, c):
        """Vertices instantiating `c` at any level."""
        if c == self.top:
            return set(self.direct_types)
        classes, stack = set(), [c]
        while stack:
            x = stack.pop()
            if x in classes:
                continue
            classes.add(x)
            stack.extend(self.subclasses.get(x, ()))
        out = set()
        for x in classes:
            out |= self.instances.get(x, set())
        return out


def seeds_of_class(graph, ontology, c):
    """Seeds given in intension: canonical instances of `c`, ordered by label."""
    return sorted((v for v in ontology.instances_of(c) if v in graph.vertices), key=graph.table.resolve)
