"""Command line interface: ``cckg ingest|stats|parse|cluster|export``."""

from __future__ import annotations

import argparse
import logging
import math
import sys

from .cluster import ClusterConfig, build_cckg
from .config import config_path, load_settings
from .errors import CCKGError, UnknownTriggerError
from .graph import format_linear
from .lexicon import parse_dictionary
from .lkb import LkbArchive, export_dot, load_lkb, save_lkb
from .rules import load_rules

log = logging.getLogger("cckg")


class UsageError(Exception):
    pass


def _cluster_config(archive, args) -> ClusterConfig:
    settings = load_settings()
    rules = load_rules(config_path("rules.txt"))
    cutoff = getattr(args, "cutoff", None)
    if cutoff is None:
        cutoff = archive.lexicon.cutoff_override
    if cutoff is None:
        cutoff = settings.get("significance_cutoff")
    return ClusterConfig.from_settings(
        settings,
        rules,
        max_expansion_steps=getattr(args, "max_steps", None),
        significance_cutoff=cutoff,
        persist_covert=not getattr(args, "no_persist_covert", False),
    )


def cmd_ingest(args):
    try:
        with open(args.dictionary, encoding="utf-8") as fh:
            lex = parse_dictionary(fh, cutoff=args.cutoff)
    except OSError as exc:
        raise UsageError(f"cannot read {args.dictionary}: {exc.strerror}") from None
    archive = LkbArchive.build(lex, load_rules(config_path("rules.txt")))
    for child, parent in getattr(archive.concept_h, "rejected", ()):
        print(f"warning: genus link {child} < {parent} skipped (cycle)", file=sys.stderr)
    degraded = sorted(hw for hw, g in archive.graphs.items() if g.degraded)
    save_lkb(archive, args.output)
    print(f"{len(lex.entries)} entries, {lex.total_count} word occurrences -> {args.output}")
    if degraded:
        print("degraded graphs: " + ", ".join(degraded))
    return 0


def cmd_stats(args):
    archive = _load(args.lkb)
    lex = archive.lexicon
    ranked = sorted(lex.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    top = ranked[: math.ceil(len(ranked) / 10)]
    covered = sum(c for _, c in top)
    coverage = covered / lex.total_count if lex.total_count else 0.0
    print(f"entries: {len(lex.entries)}")
    print(f"word occurrences: {lex.total_count}")
    print(f"distinct words: {len(lex.counts)}")
    print(f"significance cutoff: {lex.significance_cutoff}")
    print(f"top-decile coverage: {coverage:.3f}")
    for word, count in ranked[: args.top]:
        print(f"{count:6d}  {word}")
    return 0


def cmd_parse(args):
    archive = _load(args.lkb)
    if args.headword not in archive.graphs:
        raise UnknownTriggerError(args.headword)
    print(format_linear(archive.graphs[args.headword]))
    return 0


def cmd_cluster(args):
    archive = _load(args.lkb)
    cfg = _cluster_config(archive, args)
    result = build_cckg(args.trigger, archive.lexicon, archive.context(), cfg)
    archive.clusters[args.trigger] = result
    save_lkb(archive, args.lkb)
    print("cluster: " + ", ".join(result.cluster))
    for event in result.trace:
        print(event)
    print("cckg: " + format_linear(result.cckg))
    return 0


def cmd_export(args):
    archive = _load(args.lkb)
    result = archive.clusters.get(args.trigger)
    if result is None:
        result = build_cckg(args.trigger, archive.lexicon, archive.context(), _cluster_config(archive, args))
    export_dot(result.cckg, args.dot, name=args.trigger)
    print(f"wrote {args.dot}")
    return 0


def _load(path):
    try:
        return load_lkb(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cckg", description="Concept clustering knowledge graphs from dictionary definitions.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="parse a dictionary file into an LKB archive")
    s.add_argument("dictionary")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--cutoff", type=int, help="absolute significance cutoff stored with the lexicon")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("stats", help="occurrence table and cutoff")
    s.add_argument("lkb")
    s.add_argument("--top", type=int, default=20)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("parse", help="print a temporary graph in linear notation")
    s.add_argument("lkb")
    s.add_argument("headword")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("cluster", help="build and store the cluster of a trigger word")
    s.add_argument("lkb")
    s.add_argument("trigger")
    s.add_argument("--max-steps", type=int, dest="max_steps")
    s.add_argument("--cutoff", type=int)
    s.add_argument("--no-persist-covert", action="store_true", help="do not keep new covert categories")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("export", help="write a cluster graph as DOT")
    s.add_argument("lkb")
    s.add_argument("trigger")
    s.add_argument("--dot", required=True)
    s.add_argument("--cutoff", type=int)
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, CCKGError, ValueError) as exc:
        print(f"cckg: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - reported, not hidden
        log.debug("internal error", exc_info=True)
        print(f"cckg: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
