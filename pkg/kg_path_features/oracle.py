"""
Brute-force reference for small inputs.

Every seed walks its own shortest-path arcs up to k atoms, so paths and their
supports come from per-seed walk sets. Patterns are every generalization
`enumerate_generalizations` gives for those paths, restricted to interesting
classes, and their supports are recounted from the walk sets. Most specific
retention compares candidates pairwise.

Candidates are filtered level by level with the same pruning the miner
relies on: a pattern is only considered when its prefix is a path that was
kept alive or a pattern that survived with enough support, and a path is only
extended while it has enough support or a surviving pattern captures it.
"""

from collections import deque

from kg_path_features.neighbors import EMPTY, SupportSet, Traversal
from kg_path_features.pathfeat import PATTERN, Atom, enumerate_generalizations, kind_of, strictly_more_specific
from kg_path_features.utils import logger


def seed_distances(traversal, seed, k):
    """Shortest permitted distance from `seed` to every vertex within k arcs."""
    dist = {seed: 0}
    queue = deque([seed])
    while queue:
        v = queue.popleft()
        if dist[v] == k or (dist[v] > 0 and traversal.is_hub(v)):
            continue
        for _, _, w in traversal.steps(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def seed_walks(traversal, seed, dist, k):
    """Walks of `seed` by length: every atom moves to a vertex one hop farther."""
    walks = [{()}]
    for h in range(1, k + 1):
        level = set()
        for walk in walks[-1]:
            v = walk[-1].element if walk else seed
            if walk and traversal.is_hub(v):
                continue
            for p, d, w in traversal.steps(v):
                if dist.get(w) == h:
                    level.add(walk + (Atom(p, d, w),))
        if not level:
            break
        walks.append(level)
    return walks


def _minimal(group, ontology):
    return [x for x in group if not any(strictly_more_specific(y, x, ontology) for y in group)]


def brute_force_features(graph, ontology, settings):
    """(neighbor vertices, {atoms: SupportSet} path features) for `graph.seeds`."""
    traversal = Traversal(graph, ontology, settings)
    seeds = list(graph.seeds)
    k, l_min, l_max = settings.k, settings.l_min, settings.l_max
    b_gen = settings.gen_blacklist
    distances = [seed_distances(traversal, s, k) for s in seeds]

    support = {}
    for i, dist in enumerate(distances):
        for v, h in dist.items():
            if h > 0:
                support[v] = support.get(v, EMPTY) | SupportSet(1 << i)
    neighbors = {v for v, s in support.items() if l_min <= len(s) <= l_max}
    types = {}
    for v, s in support.items():
        for c in ontology.generalizations(v, settings.t, b_gen):
            types[c] = types.get(c, EMPTY) | s
    interesting = {c for c, s in types.items() if len(s) >= l_min}

    features = {}
    if l_min > len(seeds):
        return neighbors, features

    walks = [seed_walks(traversal, s, dist, k) for s, dist in zip(seeds, distances)]

    def seeds_having(paths, h):
        return SupportSet.of(i for i, w in enumerate(walks) if h < len(w) and not paths.isdisjoint(w[h]))

    alive, next_paths = {}, {()}
    for h in range(1, k + 1):
        level = set().union(*(w[h] for w in walks if h < len(w)))
        expanded = {c: seeds_having({c}, h) for c in level if c[:-1] in next_paths}

        captured = {}
        for c in expanded:
            for q in enumerate_generalizations(c, ontology, settings.t, b_gen):
                if any(a.is_class and a.element not in interesting for a in q):
                    continue
                if kind_of(q[:-1]) == PATTERN and q[:-1] not in alive:
                    continue
                captured.setdefault(q, set()).add(c)
        patterns = {q: seeds_having(cs, h) for q, cs in captured.items()}

        groups = {}
        for q, qsupport in patterns.items():
            if len(captured[q]) > 1:
                groups.setdefault(qsupport, []).append(q)
        kept = {}
        for qsupport, group in groups.items():
            for q in _minimal(group, ontology):
                kept[q] = qsupport

        snapshot = dict(features)
        replaced = set()

        def admit(atoms, s):
            if not l_min <= len(s) <= l_max:
                return
            prefixes = []
            for j in range(1, len(atoms)):
                if snapshot.get(atoms[:j]) == s:
                    if not atoms[j - 1].is_class:
                        return
                    prefixes.append(atoms[:j])
            features[atoms] = s
            replaced.update(prefixes)

        for c, csupport in sorted(expanded.items()):
            admit(c, csupport)
        for q, qsupport in sorted(kept.items()):
            if any(expanded[c] == qsupport for c in captured[q]):
                continue
            admit(q, qsupport)
        for atoms in replaced:
            features.pop(atoms, None)

        alive = {q: s for q, s in kept.items() if len(s) >= l_min}
        next_paths = {
            c for c, s in expanded.items()
            if len(s) >= l_min or any(c in captured[q] for q in alive)
        }
        if not next_paths:
            break

    logger("oracle").info("oracle: %d neighbors, %d path features", len(neighbors), len(features))
    return neighbors, features
