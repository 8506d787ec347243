"""
Command line entry point: `kg-path-features {mine,stats,oracle}`.
"""

import argparse
import json
import sys

from kg_path_features import __version__
from kg_path_features.config.kg_path_features import get_data
from kg_path_features.exceptions import InvariantViolation, MiningError, ValidationError
from kg_path_features.oracle import brute_force_features
from kg_path_features.pathfeat import render
from kg_path_features.pipeline import full_neighborhood_stats, run_pipeline, write_report
from kg_path_features.settings import MiningSettings
from kg_path_features.utils import log_error, logger, read_list_file, setup_logging, throw


def _add_common(parser):
    parser.add_argument("--graph", required=True, help="N-Triples file")
    seeds = parser.add_mutually_exclusive_group(required=True)
    seeds.add_argument("--seeds", help="file with one seed URI per line")
    seeds.add_argument("--seed-class", help="mine every instance of this class")
    parser.add_argument("--config", help="JSON file with mining settings")
    parser.add_argument("--k", type=int)
    parser.add_argument("--t", type=int)
    parser.add_argument("--d", help="maximum (out-)degree to expand, or inf")
    parser.add_argument("--u", action=argparse.BooleanOptionalAction, default=None)
    parser.add_argument("--l-min", type=int)
    parser.add_argument("--l-max", help="maximum support, or inf")
    parser.add_argument("--b-predicates", metavar="FILE")
    parser.add_argument("--b-exp-types", metavar="FILE")
    parser.add_argument("--b-gen-types", metavar="FILE")
    parser.add_argument("--type-uri")
    parser.add_argument("--subclassof-uri")
    parser.add_argument("--sameas-uri")
    parser.add_argument("--top-uri")
    parser.add_argument("--filter-group", action="append", default=[], metavar="NAME=FILE")
    parser.add_argument("--filter", help="comma separated filter group names")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--report", help="write the JSON run report here")
    parser.add_argument("--dump-dir", help="write symbol tables and sameAs members here")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="kg-path-features")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for section in get_data():
        for item in section["items"]:
            if item["type"] != "command":
                continue
            cmd = sub.add_parser(item["name"], help=item["label"], description=item["description"])
            _add_common(cmd)
            if item["name"] == "mine":
                cmd.add_argument("--out", required=True, help="output directory of the matrix")
    return parser


def settings_from_args(args):
    overrides = {
        "k": args.k,
        "t": args.t,
        "d": args.d,
        "u": args.u,
        "l_min": args.l_min,
        "l_max": args.l_max,
        "type_uri": args.type_uri,
        "subclassof_uri": args.subclassof_uri,
        "sameas_uri": args.sameas_uri,
        "top_uri": args.top_uri,
        "threads": args.threads,
    }
    for name in ("b_predicates", "b_exp_types", "b_gen_types"):
        path = getattr(args, name)
        if path:
            overrides[name] = read_list_file(path)
    settings = MiningSettings.from_file(args.config) if args.config else MiningSettings()
    settings.update(**overrides)

    if args.filter_group:
        groups = dict(settings.filter_groups)
        for spec in args.filter_group:
            name, sep, path = spec.partition("=")
            if not sep or not name or not path:
                throw(f"--filter-group expects NAME=FILE, got {spec!r}")
            groups[name] = read_list_file(path)
        settings.update(filter_groups=groups)
    if args.filter is not None:
        settings.update(filter=[g for g in args.filter.split(",") if g.strip()])
    return settings


def cmd_mine(args, settings):
    ctx = run_pipeline(
        settings, args.graph, seeds_path=args.seeds, seed_class=args.seed_class,
        out_dir=args.out, report_path=args.report, dump_dir=args.dump_dir,
    )
    shape = ctx.matrix.shape
    print(f"{shape[0]} seeds x {shape[1]} features written to {args.out}")
    return 0


def cmd_stats(args, settings):
    ctx = run_pipeline(
        settings, args.graph, seeds_path=args.seeds, seed_class=args.seed_class,
        dump_dir=args.dump_dir, stages=("ingest", "canonicalize"),
    )
    ctx.report["full_neighborhood"] = full_neighborhood_stats(ctx.graph, ctx.ontology, settings)
    if args.report:
        write_report(ctx.report, args.report)
    print(json.dumps(ctx.report["full_neighborhood"], indent=2, sort_keys=True))
    return 0


def cmd_oracle(args, settings):
    ctx = run_pipeline(
        settings, args.graph, seeds_path=args.seeds, seed_class=args.seed_class,
        report_path=args.report, dump_dir=args.dump_dir, stages=("ingest", "canonicalize", "neighbors", "paths"),
    )
    neighbors, features = brute_force_features(ctx.graph, ctx.ontology, settings)
    mined = ctx.paths.features
    missing = sorted(render(a, ctx.tables) for a in set(features) - set(mined))
    extra = sorted(render(a, ctx.tables) for a in set(mined) - set(features))
    wrong = sorted(render(a, ctx.tables) for a in set(mined) & set(features) if mined[a] != features[a])
    if neighbors != ctx.neighbors.interesting_neighbors:
        wrong.append("interesting neighbors differ")
    for label, items in (("missing", missing), ("unexpected", extra), ("support differs", wrong)):
        for item in items:
            print(f"{label}\t{item}")
    if missing or extra or wrong:
        raise InvariantViolation(
            f"miner and brute force disagree on {len(missing) + len(extra) + len(wrong)} features"
        )
    print(f"miner agrees with brute force on {len(neighbors)} neighbors and {len(features)} path features")
    return 0


COMMANDS = {"mine": cmd_mine, "stats": cmd_stats, "oracle": cmd_oracle}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse already printed the usage error
        if e.code == 2:
            return ValidationError.exit_code
        raise
    setup_logging(args.verbose)
    try:
        settings = settings_from_args(args)
        return COMMANDS[args.command](args, settings)
    except MiningError as e:
        # pipeline stages already logged theirs
        if e.stage is None:
            log_error(e.message, args.command)
        return e.exit_code
    except Exception:
        logger().exception("unexpected failure in %s", args.command)
        return InvariantViolation.exit_code


if __name__ == "__main__":
    sys.exit(main())
