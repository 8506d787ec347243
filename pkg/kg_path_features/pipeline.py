"""
Stages of a mining run, chained in the order of hooks.pipeline_stages.

Each stage reads and fills the shared RunContext. Errors are re-raised with
the name of the failing stage so the CLI can report it.
"""

import importlib
import json
import math
import time
from dataclasses import dataclass, field

from kg_path_features import hooks
from kg_path_features.canonical import canonicalize, dump_members_tsv
from kg_path_features.exceptions import InputIOError, InvalidInputError, MiningError, NotFoundError
from kg_path_features.features import DomainFilter, FeatureMatrix, apply_filter, emit_matrix
from kg_path_features.ingest import SymbolTables, load_seed_list, load_triples
from kg_path_features.neighbors import Traversal, bfs_levels, mine_neighbors
from kg_path_features.ontology import OntologyIndex, seeds_of_class
from kg_path_features.pathfeat import render
from kg_path_features.pathmine import mine_path_features
from kg_path_features.settings import MiningSettings
from kg_path_features.symbols import dump_tsv
from kg_path_features.utils import ensure_dir, log_error, logger


@dataclass
class RunContext:
    settings: MiningSettings
    graph_path: str
    seeds_path: str = None
    seed_class: str = None
    out_dir: str = None
    dump_dir: str = None
    tables: SymbolTables = field(default_factory=SymbolTables)
    raw: object = None
    raw_seeds: list = field(default_factory=list)
    graph: object = None
    ontology: object = None
    traversal: object = None
    neighbors: object = None
    paths: object = None
    matrix: object = None
    report: dict = field(default_factory=dict)


def validate_config(settings):
    """Diagnostics of `settings`; raises ValidationError on any error."""
    return settings.validate()


def resolve_stage(name):
    module, _, attr = hooks.pipeline_stages[name].rpartition(".")
    return getattr(importlib.import_module(module), attr)


def stage_ingest(ctx):
    ctx.raw = load_triples(ctx.graph_path, ctx.tables)
    if ctx.seeds_path:
        ctx.raw_seeds = load_seed_list(ctx.seeds_path, ctx.tables, ctx.raw)
    ctx.report["triples"] = dict(ctx.raw.counts)
    ctx.report["raw_vertices"] = len(ctx.raw.vertices)


def stage_canonicalize(ctx):
    s, tables = ctx.settings, ctx.tables
    type_p = tables.predicates.lookup(s.type_uri)
    subclass_p = tables.predicates.lookup(s.subclassof_uri)
    ctx.graph = canonicalize(
        ctx.raw, tables.predicates.lookup(s.sameas_uri), ctx.raw_seeds, tables, class_predicates=(type_p, subclass_p)
    )
    ctx.ontology = OntologyIndex.from_settings(ctx.graph, tables, s)

    if ctx.seed_class == s.top_uri:
        ctx.graph.seeds = seeds_of_class(ctx.graph, ctx.ontology, ctx.ontology.top)
    elif ctx.seed_class:
        raw_class = tables.vertices.lookup(ctx.seed_class)
        if raw_class is None:
            raise NotFoundError(f"seed class {ctx.seed_class} does not occur in the graph")
        ctx.graph.seeds = seeds_of_class(ctx.graph, ctx.ontology, ctx.graph.lam.get(raw_class, raw_class))
    if not ctx.graph.seeds:
        raise InvalidInputError("no seed vertex to mine from")
    for seed in ctx.graph.seeds:
        if ctx.ontology.is_class(seed):
            logger("pipeline").warning("seed %s is an ontology class", ctx.graph.canonical_label(seed))

    tables.vertices.freeze()
    tables.predicates.freeze()
    if ctx.dump_dir:
        dump_dir = ensure_dir(ctx.dump_dir)
        dump_tsv(tables.vertices, dump_dir / "vertices.tsv")
        dump_tsv(tables.predicates, dump_dir / "predicates.tsv")
        dump_members_tsv(ctx.graph, dump_dir / "members.tsv")

    ctx.report["canonical"] = {
        "vertices": len(ctx.graph.vertices),
        "arcs": ctx.graph.arc_count,
        "sameas_merges": ctx.graph.unions,
        "seeds": len(ctx.graph.seeds),
        "seed_merges": {
            ctx.graph.canonical_label(c): [tables.vertices.resolve(r) for r in raws]
            for c, raws in sorted(ctx.graph.seed_merges.items())
        },
        "cross_kind_merges": sorted(ctx.graph.canonical_label(c) for c in ctx.graph.cross_kind_merges),
    }


def stage_neighbors(ctx):
    ctx.traversal = Traversal(ctx.graph, ctx.ontology, ctx.settings)
    ctx.neighbors = nres = mine_neighbors(ctx.graph, ctx.ontology, ctx.settings, ctx.traversal)
    ctx.report["neighbors"] = {
        "reached": len(nres.support),
        "hubs": len(nres.hubs),
        "interesting": len(nres.interesting_neighbors),
        "types": len(nres.type_support),
        "interesting_types": len(nres.interesting_types),
    }


def stage_paths(ctx):
    ctx.paths = result = mine_path_features(ctx.graph, ctx.neighbors, ctx.ontology, ctx.settings, ctx.traversal)
    ctx.report["paths"] = {
        "generated": result.generated,
        "retained": result.retained,
        "iterations": [it.as_dict(lambda atoms: render(atoms, ctx.tables)) for it in result.trace],
    }


def stage_filter(ctx):
    domain_filter = DomainFilter.from_settings(ctx.settings)
    ctx.matrix = FeatureMatrix.build(ctx.graph, ctx.neighbors, ctx.paths, ctx.tables)
    before = ctx.matrix.counts()
    apply_filter(ctx.matrix, domain_filter, ctx.ontology)
    ctx.matrix.check(ctx.settings.l_min, ctx.settings.l_max)
    ctx.report["features"] = {"before_filter": before, "after_filter": ctx.matrix.counts(), "filter": domain_filter.selected}


def stage_emit(ctx):
    if ctx.out_dir:
        emit_matrix(ctx.matrix, ctx.out_dir)
    if ctx.dump_dir:
        dump_tsv(ctx.paths.table, ensure_dir(ctx.dump_dir) / "features.tsv", render=lambda atoms: render(atoms, ctx.tables))
    ctx.report["matrix"] = {"rows": ctx.matrix.shape[0], "columns": ctx.matrix.shape[1]}


def run_pipeline(settings, graph_path, seeds_path=None, seed_class=None, out_dir=None, report_path=None, dump_dir=None, stages=None):
    """Run every stage (or the first ones named in `stages`) and return the context."""
    ctx = RunContext(
        settings=settings, graph_path=graph_path, seeds_path=seeds_path,
        seed_class=seed_class, out_dir=out_dir, dump_dir=dump_dir,
    )
    warnings = validate_config(settings)
    ctx.report["settings"] = settings.as_dict()
    ctx.report["warnings"] = [str(w) for w in warnings]
    timings = ctx.report["seconds"] = {}

    for name in stages or hooks.pipeline_stages:
        started = time.perf_counter()
        try:
            resolve_stage(name)(ctx)
        except MiningError as e:
            e.stage = e.stage or name
            log_error(e.message, e.stage)
            raise
        timings[name] = round(time.perf_counter() - started, 6)
        logger("pipeline").info("stage %s done in %.3fs", name, timings[name])

    if report_path:
        write_report(ctx.report, report_path)
    return ctx


def write_report(report, path):
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise InputIOError(f"cannot write report {path}: {e}")


def full_neighborhood_stats(graph, ontology, settings):
    """Reach of the seeds with no bound on k and t, for the configured d and for d=inf."""
    out = {}
    bound = max(1, len(graph.vertices))
    for label, d in (("configured_d", settings.d), ("unbounded_d", math.inf)):
        probe = MiningSettings(**settings.as_dict())
        probe.update(d="inf" if math.isinf(d) else d)
        traversal = Traversal(graph, ontology, probe)
        levels = bfs_levels(traversal, list(graph.seeds), range(len(graph.seeds)), bound)
        reached = set()
        for level in levels[1:]:
            reached.update(level)
        classes, type_depth = {ontology.top}, 0
        for v in reached:
            hops = ontology.levels(v, bound)
            classes.update(hops)
            type_depth = max([type_depth, *hops.values()])
        out[label] = {
            "d": "inf" if math.isinf(d) else d,
            "neighbors": len(reached),
            "k_full": len(levels) - 1,
            "types": len(classes),
            "t_full": type_depth,
        }
    return out
