"""Command-line front end.

Every subcommand reads one input (network JSON, JSON-lines events or
tweets, or a contact CSV) and writes deterministic artifacts: identical
inputs and flags give byte-identical outputs. Floats are serialized with
fixed 9-decimal formatting and all collections are emitted sorted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import communities as comm
from . import continuous, discrete, ingest, views
from .errors import MalformedRecord, TTNError
from .model import TemporalTextNetwork

INPUT_FORMATS = ("auto", "network", "events", "tweets", "contacts")


def _sniff_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return "contacts"
    if suffix == ".json":
        return "network"
    if suffix in (".jsonl", ".ndjson"):
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                break
            if isinstance(rec, dict):
                if "author" in rec:
                    return "tweets"
                if "kind" in rec:
                    return "events"
            break
    raise MalformedRecord(f"cannot infer input format of {path}; pass --format")


def load_network(
    path: str | Path, fmt: str = "auto", allow_dangling_retweets: bool = False
) -> TemporalTextNetwork:
    path = Path(path)
    if fmt == "auto":
        fmt = _sniff_format(path)
    if fmt == "network":
        return TemporalTextNetwork.load(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if fmt == "events":
        return ingest.parse_event_stream(lines)
    if fmt == "tweets":
        return ingest.parse_tweet_records(lines, allow_dangling_retweets)
    if fmt == "contacts":
        return ingest.parse_contact_csv(lines)
    raise MalformedRecord(f"unknown input format {fmt!r}")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _distance_config(args) -> continuous.DistanceConfig:
    return continuous.DistanceConfig(
        w_topo=args.w_topo,
        w_time=args.w_time,
        w_text=args.w_text,
        topo_cap=args.topo_cap,
        asym_penalty=args.asym_penalty,
        text_metric=args.text_metric,
    )


def _discretized(net: TemporalTextNetwork, args) -> discrete.KPartiteNetwork:
    keywords = args.keywords.split(",") if args.keywords else None
    classes = discrete.tag_messages(net, args.tagger, keywords)
    bins = None
    if args.bin_width is not None:
        anchor = None if args.bin_anchor == "auto" else int(args.bin_anchor)
        bins = discrete.time_bins(net, args.bin_width, anchor)
    return discrete.discretize(net, classes, bins)


def _drop_none_layers(ml: discrete.MultilayerActorNetwork) -> discrete.MultilayerActorNetwork:
    kept = {
        label: edges
        for label, edges in ml.layers.items()
        if label.text_class != discrete.NONE_CLASS
    }
    return discrete.MultilayerActorNetwork(ml.directed, ml.weighted, kept)


# -- subcommands -------------------------------------------------------------

def cmd_validate(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    report = net.validate()
    if report:
        for violation in report:
            print(str(violation), file=sys.stderr)
        return 1
    print("valid")
    return 0


def cmd_stats(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    _emit(_json_text(net.stats()), args.out)
    return 0


def cmd_contacts(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    _emit(views.contacts_csv(views.contact_sequence_view(net)), args.out)
    return 0


def cmd_slices(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    cutpoints = [int(c) for c in args.cutpoints.split(",")]
    series = views.time_slice_view(net, cutpoints, args.policy)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, ts in enumerate(series.slices):
        ts.network.save(out_dir / f"slice_{i:03d}.json")
    print(f"wrote {len(series.slices)} slices to {out_dir}")
    return 0


def cmd_memory(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    contacts = views.contact_sequence_view(net)
    graph = views.memory_graph_view(contacts, args.delta)
    if args.as_format == "dot":
        _emit(views.memory_graph_dot(graph), args.out)
    else:
        _emit(views.memory_graph_csv(graph), args.out)
    return 0


def cmd_discretize(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    kp = _discretized(net, args)
    _emit(_json_text(discrete.kpartite_to_dict(kp)), args.out)
    return 0


def cmd_project(args) -> int:
    doc = json.loads(Path(args.in_path).read_text(encoding="utf-8"))
    kp = discrete.kpartite_from_dict(doc)
    ml = discrete.project(kp, weighted=args.weighted, directed=args.directed)
    _emit(discrete.multilayer_csv(ml), args.out)
    return 0


def cmd_distances(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    ids = args.ids.split(",") if args.ids else None
    dm = continuous.distance_matrix(net, ids, _distance_config(args))
    _emit(continuous.distance_csv(dm, decimals=9), args.out)
    return 0


def cmd_nearest(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    tokens = continuous.tokenize(args.query_text)
    results = continuous.nearest(net, tokens, args.query_t, args.k, _distance_config(args))
    _emit(continuous.neighbors_csv(results), args.out)
    return 0


def cmd_cluster(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    dm = continuous.distance_matrix(net, None, _distance_config(args))
    result = continuous.cluster_kmedoids(dm, args.k, seed=args.seed, max_iter=args.max_iter)
    _emit(continuous.clusters_csv(result), args.out)
    return 0


def cmd_communities(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    kp = _discretized(net, args)
    ml = discrete.project(kp, weighted=args.weighted, directed=args.directed)
    if not args.include_none:
        ml = _drop_none_layers(ml)
    found = comm.kclique_communities(ml, args.k, args.scope)
    found = comm.filter_communities(found, args.min_actors)
    _emit(_json_text(comm.communities_to_dicts(found)), args.out)
    return 0


def cmd_evolution(args) -> int:
    docs = json.loads(Path(args.in_path).read_text(encoding="utf-8"))
    found = comm.communities_from_dicts(docs)
    graph = comm.community_evolution(found)
    _emit(comm.evolution_dot(graph), args.out)
    return 0


def cmd_pipeline(args) -> int:
    net = load_network(args.in_path, args.format, args.allow_dangling_retweets)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    net.save(out_dir / "net.json")
    (out_dir / "stats.json").write_text(_json_text(net.stats()), encoding="utf-8")
    kp = _discretized(net, args)
    ml = discrete.project(kp, weighted=args.weighted, directed=args.directed)
    (out_dir / "layers.csv").write_text(discrete.multilayer_csv(ml), encoding="utf-8")
    detected = ml if args.include_none else _drop_none_layers(ml)
    found = comm.kclique_communities(detected, args.k, args.scope)
    found = comm.filter_communities(found, args.min_actors)
    (out_dir / "communities.json").write_text(
        _json_text(comm.communities_to_dicts(found)), encoding="utf-8"
    )
    graph = comm.community_evolution(found)
    (out_dir / "evolution.dot").write_text(comm.evolution_dot(graph), encoding="utf-8")
    print(f"wrote net.json, stats.json, layers.csv, communities.json, evolution.dot to {out_dir}")
    return 0


# -- argument plumbing --------------------------------------------------------

def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="in_path", required=True, help="input file")
    p.add_argument("--format", choices=INPUT_FORMATS, default="auto",
                   help="input format (default: inferred from the file)")
    p.add_argument("--allow-dangling-retweets", action="store_true",
                   help="downgrade unknown retweet targets to a warning")


def _add_out_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def _add_distance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--w-topo", type=float, default=1 / 3)
    p.add_argument("--w-time", type=float, default=1 / 3)
    p.add_argument("--w-text", type=float, default=1 / 3)
    p.add_argument("--topo-cap", type=int, default=6)
    p.add_argument("--asym-penalty", type=float, default=0.0)
    p.add_argument("--text-metric", choices=continuous.TEXT_METRICS, default="jaccard")


def _add_discretize_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tagger", choices=("hashtags", "keywords"), default="hashtags")
    p.add_argument("--keywords", default=None, help="comma-separated keyword list")
    p.add_argument("--bin-width", type=int, default=None,
                   help="time bin width in ticks (omit for a single '_all' bin)")
    p.add_argument("--bin-anchor", default="auto",
                   help="bin origin tick, or 'auto' for the earliest production time")


def _add_projection_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weighted", action="store_true", help="count witnessing messages")
    p.add_argument("--directed", action="store_true", help="keep edge direction")


def _add_community_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=3, help="clique size (>= 3)")
    p.add_argument("--scope", choices=comm.SCOPES, default="per_time_bin")
    p.add_argument("--include-none", action="store_true",
                   help="also detect communities in the reserved '_none' layers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttn", description="temporal text network toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check model constraints")
    _add_input_args(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("stats", help="basic size figures (|A|,|M|,|E|,|L|)")
    _add_input_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("contacts", help="contact sequence CSV")
    _add_input_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_contacts)

    p = sub.add_parser("slices", help="time-slice sub-networks")
    _add_input_args(p)
    p.add_argument("--cutpoints", required=True, help="comma-separated ascending ticks")
    p.add_argument("--policy", choices=views.SLICE_POLICIES, default="production")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_slices)

    p = sub.add_parser("memory", help="pair-node memory graph")
    _add_input_args(p)
    p.add_argument("--delta", type=int, default=None,
                   help="relay window in ticks (omit for unbounded)")
    p.add_argument("--as", dest="as_format", choices=("dot", "csv"), default="dot")
    _add_out_arg(p)
    p.set_defaults(fn=cmd_memory)

    p = sub.add_parser("discretize", help="k-partite network JSON")
    _add_input_args(p)
    _add_discretize_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_discretize)

    p = sub.add_parser("project", help="multilayer edge list from a k-partite JSON")
    p.add_argument("--in", dest="in_path", required=True, help="k-partite JSON file")
    _add_projection_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_project)

    p = sub.add_parser("distances", help="message distance matrix CSV")
    _add_input_args(p)
    p.add_argument("--ids", default=None, help="comma-separated message ids (default: all)")
    _add_distance_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_distances)

    p = sub.add_parser("nearest", help="retrieve messages closest to a query")
    _add_input_args(p)
    p.add_argument("--query-text", required=True)
    p.add_argument("--query-t", type=int, required=True)
    p.add_argument("--k", type=int, default=10)
    _add_distance_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_nearest)

    p = sub.add_parser("cluster", help="k-medoids clustering of all messages")
    _add_input_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=100)
    _add_distance_args(p)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_cluster)

    p = sub.add_parser("communities", help="k-clique percolation communities")
    _add_input_args(p)
    _add_discretize_args(p)
    _add_projection_args(p)
    _add_community_args(p)
    p.add_argument("--min-actors", type=int, default=1)
    _add_out_arg(p)
    p.set_defaults(fn=cmd_communities)

    p = sub.add_parser("evolution", help="community succession graph (DOT)")
    p.add_argument("--in", dest="in_path", required=True, help="communities JSON file")
    _add_out_arg(p)
    p.set_defaults(fn=cmd_evolution)

    p = sub.add_parser("pipeline", help="ingest, discretize, project, detect, evolve")
    _add_input_args(p)
    _add_discretize_args(p)
    _add_projection_args(p)
    _add_community_args(p)
    p.add_argument("--min-actors", type=int, default=4,
                   help="keep communities with at least this many actors")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (TTNError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
