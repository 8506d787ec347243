"""
Level-wise mining of path features.

Every iteration h expands the alive paths of length h-1 by one atom, derives
patterns from the expanded paths and from the surviving patterns of the
previous iteration, keeps the most specific patterns of every support set and
selects features. A path or pattern can only lose seeds when expanded, so
anything below l_min is dropped from the dependency structure unless a
surviving pattern still needs its expansions.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from kg_path_features.neighbors import EMPTY, SupportSet, Traversal
from kg_path_features.pathfeat import Atom, PATTERN, PathFeature, kind_of
from kg_path_features.symbols import FEATURE, SymbolTable
from kg_path_features.utils import logger


@dataclass
class DependencyStructure:
    paths_h: dict = field(default_factory=dict)  # path atoms -> SupportSet
    generalizers: dict = field(default_factory=dict)  # path atoms -> set of pattern atoms
    supports: dict = field(default_factory=dict)  # feature id -> SupportSet
    expansion_links: dict = field(default_factory=dict)  # feature id -> parent feature id


@dataclass
class IterationTrace:
    h: int
    paths: int = 0
    expanded: int = 0
    candidates: int = 0
    single_path: int = 0
    survivors: int = 0
    below_l_min: int = 0
    added: list = field(default_factory=list)
    replaced: list = field(default_factory=list)

    def as_dict(self, render=None):
        out = {k: getattr(self, k) for k in ("h", "paths", "expanded", "candidates", "single_path", "survivors", "below_l_min")}
        render = render or (lambda atoms: atoms)
        out["added"] = [render(a) for a in self.added]
        out["replaced"] = [render(a) for a in self.replaced]
        return out


@dataclass
class PathMiningResult:
    features: dict  # atoms -> SupportSet, the selected path features
    table: SymbolTable
    dependency: DependencyStructure
    trace: list = field(default_factory=list)

    @property
    def generated(self):
        return sum(it.expanded + it.candidates for it in self.trace)

    @property
    def retained(self):
        return len(self.features)

    def feature_id(self, atoms):
        return self.table.lookup(atoms)

    def path_features(self):
        """Selected features with their ids and supports filled in, by id."""
        out = [PathFeature(atoms, self.feature_id(atoms), support) for atoms, support in self.features.items()]
        return sorted(out, key=lambda f: f.id)


class PrefixTree:
    """
    Patterns of one length sharing one support set, most specific only.

    Levels alternate between (predicate, direction) keys and (element, is_class)
    keys; the last element level is a set.
    """

    def __init__(self, ontology):
        self.ontology = ontology
        self.root = {}
        self.size = 0

    def _walk(self, node, atoms, i, accept, prefix):
        a = atoms[i]
        branch = node.get((a.predicate, a.direction))
        if not branch:
            return
        last = i == len(atoms) - 1
        for element, is_class in list(branch):
            if not accept(element, is_class, a):
                continue
            stored = prefix + (Atom(a.predicate, a.direction, element, is_class),)
            if last:
                yield stored
            else:
                yield from self._walk(branch[(element, is_class)], atoms, i + 1, accept, stored)

    def more_specific(self, atoms):
        """Stored patterns strictly more specific than `atoms`."""
        le = self.ontology.element_more_specific
        for stored in self._walk(self.root, atoms, 0, lambda e, c, a: le(e, c, a.element, a.is_class), ()):
            if not all(le(a.element, a.is_class, s.element, s.is_class) for a, s in zip(atoms, stored)):
                yield stored

    def more_general(self, atoms):
        """Stored patterns strictly more general than `atoms`."""
        le = self.ontology.element_more_specific
        for stored in self._walk(self.root, atoms, 0, lambda e, c, a: le(a.element, a.is_class, e, c), ()):
            if not all(le(s.element, s.is_class, a.element, a.is_class) for a, s in zip(atoms, stored)):
                yield stored

    def insert(self, atoms):
        if next(self.more_specific(atoms), None) is not None:
            return False
        for stored in list(self.more_general(atoms)):
            self.remove(stored)
        node = self.root
        for i, a in enumerate(atoms):
            last = i == len(atoms) - 1
            branch = node.setdefault((a.predicate, a.direction), set() if last else {})
            if last:
                if (a.element, a.is_class) not in branch:
                    branch.add((a.element, a.is_class))
                    self.size += 1
            else:
                node = branch.setdefault((a.element, a.is_class), {})
        return True

    def remove(self, atoms):
        trail, node = [], self.root
        for i, a in enumerate(atoms):
            branch = node[(a.predicate, a.direction)]
            trail.append((node, (a.predicate, a.direction), branch))
            if i < len(atoms) - 1:
                node = branch[(a.element, a.is_class)]
        last = atoms[-1]
        trail[-1][2].discard((last.element, last.is_class))
        self.size -= 1
        for depth in range(len(trail) - 1, -1, -1):
            node, key, branch = trail[depth]
            if branch:
                break
            del node[key]
            if node or depth == 0:
                break
            a = atoms[depth - 1]
            del trail[depth - 1][2][(a.element, a.is_class)]

    def __iter__(self):
        def walk(node, prefix):
            for (p, d), branch in node.items():
                for e, c in branch:
                    atoms = prefix + (Atom(p, d, e, c),)
                    if isinstance(branch, set):
                        yield atoms
                    else:
                        yield from walk(branch[(e, c)], atoms)
        return walk(self.root, ())

    def __len__(self):
        return self.size


def expand_paths(paths_h, nres, traversal, h):
    """Expanded paths of length h: child atoms -> (parent atoms, SupportSet)."""
    expanded = {}
    level = nres.reached_at[h] if h < len(nres.reached_at) else {}
    if h == 1:
        for i, seed in enumerate(nres.seeds):
            for p, direction, w in traversal.steps(seed):
                if level.get(w, 0) >> i & 1:
                    child = (Atom(p, direction, w),)
                    _, support = expanded.get(child, ((), EMPTY))
                    expanded[child] = ((), support | SupportSet(1 << i))
        return expanded
    for parent in sorted(paths_h):
        support = paths_h[parent]
        v = parent[-1].element
        if traversal.is_hub(v):
            continue
        for p, direction, w in traversal.steps(v):
            # a seed keeps the path only if w is first reached from it at distance h
            bits = support.bits & level.get(w, 0)
            if bits:
                expanded[parent + (Atom(p, direction, w),)] = (parent, SupportSet(bits))
    return expanded


def generalize(expanded, dependency, interesting, ontology, settings):
    """
    Candidate patterns of the iteration.

    Returns (candidates, gen_of): candidates maps pattern atoms to
    [SupportSet, set of captured expanded paths]; gen_of maps each expanded
    path to the patterns it produced.
    """
    candidates, gen_of = {}, {}
    b_gen = settings.gen_blacklist
    for child, (parent, support) in expanded.items():
        last = child[-1]
        classes = sorted(c for c in ontology.generalizations(last.element, settings.t, b_gen) if c in interesting)
        tails = [Atom(last.predicate, last.direction, c, True) for c in classes]
        patterns = [parent + (tail,) for tail in tails]
        for g in sorted(dependency.generalizers.get(parent, ())):
            patterns.append(g + (last,))
            patterns.extend(g + (tail,) for tail in tails)
        gen_of[child] = set(patterns)
        for q in patterns:
            entry = candidates.get(q)
            if entry is None:
                candidates[q] = entry = [EMPTY, set()]
            entry[0] = entry[0] | support
            entry[1].add(child)
    return candidates, gen_of


def _retain_group(ontology, patterns):
    tree = PrefixTree(ontology)
    for atoms in patterns:
        tree.insert(atoms)
    return list(tree)


def keep_most_specific(candidates, ontology, threads=1):
    """
    Surviving patterns (atoms -> SupportSet) and the number of patterns
    dropped for capturing a single path.
    """
    groups, single = {}, 0
    for atoms in sorted(candidates):
        support, captured = candidates[atoms]
        if len(captured) == 1:
            single += 1
            continue
        groups.setdefault(support.bits, []).append(atoms)

    ordered = [groups[bits] for bits in sorted(groups)]
    if threads > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            kept = list(pool.map(lambda g: _retain_group(ontology, g), ordered))
    else:
        kept = [_retain_group(ontology, g) for g in ordered]

    survivors = {}
    for bits, atoms_list in zip(sorted(groups), kept):
        for atoms in atoms_list:
            survivors[atoms] = SupportSet(bits)
    return survivors, single


def _admissible(atoms, support, selected, table, settings):
    """(accepted, prefixes replaced) under the support bounds and the prefix rule."""
    if not settings.l_min <= len(support) <= settings.l_max:
        return False, []
    replaced = []
    for i in range(1, len(atoms)):
        prefix = atoms[:i]
        if table.lookup(prefix) is None or selected.get(prefix) != support:
            continue
        if not prefix[-1].is_class:
            return False, []
        replaced.append(prefix)
    return True, replaced


def select_features(expanded, survivors, candidates, gen_of, features, dependency, table, settings, trace):
    """
    Add this iteration's paths and surviving patterns to `features` and
    prepare the dependency structure for the next iteration.
    """
    snapshot = dict(features)
    replaced = set()

    def admit(atoms, support):
        ok, prefixes = _admissible(atoms, support, snapshot, table, settings)
        if ok:
            features[atoms] = support
            trace.added.append(atoms)
            replaced.update(prefixes)

    for child in sorted(expanded):
        admit(child, expanded[child][1])
    for atoms in sorted(survivors):
        support = survivors[atoms]
        # a pattern never stands in for one of its paths with the same support
        if any(expanded[c][1] == support for c in candidates[atoms][1]):
            continue
        admit(atoms, support)

    for atoms in sorted(replaced):
        features.pop(atoms, None)
        trace.replaced.append(atoms)

    alive = {q: s for q, s in survivors.items() if len(s) >= settings.l_min}
    trace.below_l_min = len(survivors) - len(alive)
    next_paths, generalizers = {}, {}
    for child in sorted(expanded):
        support = expanded[child][1]
        gens = {q for q in gen_of.get(child, ()) if q in alive}
        if len(support) >= settings.l_min or gens:
            next_paths[child] = support
            if gens:
                generalizers[child] = gens

    for atoms, support in list(next_paths.items()) + sorted(alive.items()):
        fid = table.intern(atoms)
        dependency.supports[fid] = support
        if len(atoms) > 1:
            parent = table.lookup(atoms[:-1])
            if parent is not None:
                dependency.expansion_links[fid] = parent
    for atoms in features:
        table.intern(atoms)
    dependency.paths_h = next_paths
    dependency.generalizers = generalizers
    return next_paths


def mine_path_features(graph, nres, ontology, settings, traversal=None, table=None):
    log = logger("pathmine")
    traversal = traversal or Traversal(graph, ontology, settings)
    table = table if table is not None else SymbolTable(FEATURE)
    dependency = DependencyStructure()
    result = PathMiningResult(features={}, table=table, dependency=dependency)

    if settings.l_min > len(nres.seeds):
        log.warning("l_min=%s exceeds the %d canonical seeds, no path feature can qualify", settings.l_min, len(nres.seeds))
        return result

    interesting = set(nres.interesting_types)
    for h in range(1, settings.k + 1):
        if h > 1 and not dependency.paths_h:
            break
        trace = IterationTrace(h=h, paths=len(dependency.paths_h) if h > 1 else len(nres.seeds))
        expanded = expand_paths(dependency.paths_h, nres, traversal, h)
        candidates, gen_of = generalize(expanded, dependency, interesting, ontology, settings)
        survivors, trace.single_path = keep_most_specific(candidates, ontology, settings.threads)
        trace.expanded, trace.candidates, trace.survivors = len(expanded), len(candidates), len(survivors)
        select_features(expanded, survivors, candidates, gen_of, result.features, dependency, table, settings, trace)
        result.trace.append(trace)
        log.info(
            "h=%d: %d paths in, %d expanded, %d patterns generated, %d kept, %d features added, %d replaced",
            h, trace.paths, trace.expanded, trace.candidates, trace.survivors, len(trace.added), len(trace.replaced),
        )

    log.info(
        "path features: %d generated, %d retained (%d patterns)",
        result.generated, result.retained, sum(1 for a in result.features if kind_of(a) == PATTERN),
    )
    return result
