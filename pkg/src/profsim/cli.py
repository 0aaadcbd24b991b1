"""Command-line front end: ``profsim rank|plot|metric|validate``.

Exit codes: 0 success, 1 usage, 2 parse/validation failure, 3 I/O failure.
Options may also come from a ``key = value`` config file (``--config``);
command-line flags override the file, which overrides the defaults.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .errors import ParseError, ProfsimError, format_problem
from .gdf import document_to_graph, infer_schema, parse_gdf_document
from .ingest import (
    ReportDocument,
    export_plot_data,
    load_profiles,
    merge_profiles,
    write_atomic,
    write_plot,
)
from .model import AttributeKind
from .scoring import ScoringConfig, rank_candidates, similar_ids
from .string_metrics import edit_distance_similarity, jaro_similarity, levenshtein_distance
from .weighting import WeightConfig

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {
    "metric": "jaro",
    "mode": "vector",
    "mutual": "binary",
    "waf": 100.0,
    "rounding": "table",
    "candidates": "friends",
    "profiles_format": "delimited",
    "plot_kind": "rescaled",
    "undirected": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    graph: Path
    target: str
    profiles: Optional[Path] = None
    profiles_format: str = DEFAULTS["profiles_format"]
    kinds: dict = field(default_factory=dict)
    metric: str = DEFAULTS["metric"]
    mode: str = DEFAULTS["mode"]
    mutual: str = DEFAULTS["mutual"]
    waf: float = DEFAULTS["waf"]
    rounding: str = DEFAULTS["rounding"]
    candidates: str = DEFAULTS["candidates"]
    undirected: bool = DEFAULTS["undirected"]
    report: Optional[Path] = None
    plot: Optional[Path] = None
    plot_kind: str = DEFAULTS["plot_kind"]

    def __post_init__(self):
        if not self.target:
            raise UsageError("a target profile id is required")
        if not self.waf > 0:
            raise UsageError(f"waf must be positive, got {self.waf}")

    def scoring(self) -> ScoringConfig:
        return ScoringConfig(
            metric=self.metric,
            mode=self.mode,
            rounding=self.rounding,
            weights=WeightConfig(waf=self.waf, mutual_mode=self.mutual),
        )

    def echo(self) -> dict:
        d = asdict(self)
        del d["report"], d["plot"]
        for key in ("graph", "profiles"):
            d[key] = None if d[key] is None else str(d[key])
        return d


def read_config_file(path: Path) -> dict:
    values = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError([(lineno, f"{path}: expected 'key = value', got {line!r}")])
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _parse_kinds(items) -> dict:
    kinds = {}
    for item in items or ():
        name, sep, kind = item.partition("=")
        if not sep:
            raise UsageError(f"--kind expects name=kind, got {item!r}")
        try:
            kinds[name.strip()] = AttributeKind.parse(kind)
        except ProfsimError as exc:
            raise UsageError(str(exc)) from None
    return kinds


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def resolve_run_config(args) -> RunConfig:
    file_values = read_config_file(Path(args.config)) if args.config else {}
    known = set(RunConfig.__dataclass_fields__) | {"kind"}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")

    def pick(name):
        value = getattr(args, name, None)
        if value is not None:
            return value
        if name in file_values:
            return file_values[name]
        return DEFAULTS.get(name)

    graph = pick("graph")
    if graph is None:
        raise UsageError("--graph is required")
    kinds = _parse_kinds(file_values.get("kind", "").split(",") if file_values.get("kind") else ())
    kinds.update(_parse_kinds(args.kind))
    try:
        waf = float(pick("waf"))
    except ValueError:
        raise UsageError(f"waf must be a number, got {pick('waf')!r}") from None
    for name, allowed in (("metric", ("jaro", "edit")), ("mode", ("vector", "attribute")),
                          ("mutual", ("binary", "fractional")), ("rounding", ("full", "table")),
                          ("candidates", ("friends", "all")), ("plot_kind", ("raw", "rescaled")),
                          ("profiles_format", ("delimited", "structured"))):
        if pick(name) not in allowed:
            raise UsageError(f"{name} must be one of {', '.join(allowed)}, got {pick(name)!r}")

    def path_or_none(name):
        value = pick(name)
        return Path(value) if value else None

    return RunConfig(
        graph=Path(graph),
        target=pick("target") or "",
        profiles=path_or_none("profiles"),
        profiles_format=pick("profiles_format"),
        kinds=kinds,
        metric=pick("metric"),
        mode=pick("mode"),
        mutual=pick("mutual"),
        waf=waf,
        rounding=pick("rounding"),
        candidates=pick("candidates"),
        undirected=_bool(pick("undirected")),
        report=path_or_none("report"),
        plot=path_or_none("plot"),
        plot_kind=pick("plot_kind"),
    )


def load_inputs(graph_path: Path, profiles_path: Optional[Path], profiles_format: str, kinds: dict):
    """Read the graph (and optional attribute file) into a graph plus schema."""
    doc = parse_gdf_document(graph_path.read_text(encoding="utf-8"))
    if profiles_path is not None:
        profiles, schema = load_profiles(profiles_path.read_text(encoding="utf-8"), profiles_format)
        schema = schema.with_kinds(kinds)
        graph = merge_profiles(document_to_graph(doc, schema), profiles)
    else:
        schema = infer_schema(doc).with_kinds(kinds)
        graph = document_to_graph(doc, schema)
    for p in graph:
        schema.validate(p)
    return graph, schema


def run_ranking(cfg: RunConfig):
    graph, schema = load_inputs(cfg.graph, cfg.profiles, cfg.profiles_format, cfg.kinds)
    if cfg.undirected:
        graph = graph.symmetrized()
    target = graph.profile(cfg.target)
    if cfg.candidates == "friends":
        candidate_ids = sorted(graph.friends(target.id))
    else:
        candidate_ids = sorted(pid for pid in graph.ids if pid != target.id)
    if not candidate_ids:
        raise ProfsimError(f"target {target.id!r} has no candidate profiles to compare")
    candidates = [graph.profile(pid) for pid in candidate_ids]
    reports = rank_candidates(target, candidates, graph, schema, cfg.scoring())
    return ReportDocument(target.id, schema, reports, cfg.echo())


def _summary(doc: ReportDocument) -> str:
    names = ", ".join(similar_ids(doc.reports)) or "(none)"
    threshold = doc.reports[0].threshold
    return f"Similar to {doc.target_id}: {names} (threshold {threshold:.2f})"


def cmd_rank(args) -> int:
    cfg = resolve_run_config(args)
    doc = run_ranking(cfg)
    text = doc.to_json() if cfg.report and cfg.report.suffix.lower() == ".json" else doc.to_csv()
    series = export_plot_data(doc.reports, cfg.plot_kind) if cfg.plot else None
    if cfg.report:
        write_atomic(cfg.report, text)
    else:
        sys.stdout.write(text)
    if series is not None:
        write_plot(series, cfg.plot)
    print(_summary(doc))
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.output is None:
        raise UsageError("plot needs --output")
    args.plot = args.output
    cfg = resolve_run_config(args)
    doc = run_ranking(cfg)
    write_plot(export_plot_data(doc.reports, cfg.plot_kind), cfg.plot)
    print(_summary(doc))
    return EXIT_OK


def cmd_metric(args) -> int:
    fns = {
        "jaro": jaro_similarity,
        "edit": levenshtein_distance,
        "editsim": edit_distance_similarity,
    }
    if args.metric not in fns:
        raise UsageError(f"unknown metric {args.metric!r}; choose from {', '.join(fns)}")
    print(repr(fns[args.metric](args.s, args.t)))
    return EXIT_OK


def cmd_validate(args) -> int:
    kinds = _parse_kinds(args.kind)
    problems: list[str] = []

    def collect(label, exc):
        if isinstance(exc, ParseError):
            problems.extend(f"{label}: {format_problem(line, msg)}" for line, msg in exc.problems)
        else:
            problems.append(f"{label}: {exc}")

    graph_doc = profiles = schema = None
    try:
        graph_doc = parse_gdf_document(Path(args.graph).read_text(encoding="utf-8"))
    except ProfsimError as exc:
        collect(args.graph, exc)
    if args.profiles:
        try:
            profiles, schema = load_profiles(Path(args.profiles).read_text(encoding="utf-8"),
                                             args.profiles_format or "delimited")
        except ProfsimError as exc:
            collect(args.profiles, exc)

    if graph_doc is not None and not (args.profiles and profiles is None):
        try:
            schema = (schema if schema is not None else infer_schema(graph_doc)).with_kinds(kinds)
            graph = document_to_graph(graph_doc, schema)
            for p in profiles or ():
                if p.id not in graph:
                    problems.append(f"{args.profiles}: profile {p.id!r} is not a node of {args.graph}")
            known = [p for p in profiles or () if p.id in graph]
            graph = merge_profiles(graph, known)
            for p in graph:
                try:
                    schema.validate(p)
                except ProfsimError as exc:
                    problems.append(str(exc))
            if args.target and args.target not in graph:
                problems.append(f"unknown target profile id {args.target!r}")
        except ProfsimError as exc:
            problems.append(str(exc))

    if problems:
        for line in problems:
            print(line, file=sys.stderr)
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file with defaults for these options")
    p.add_argument("--graph", help="GDF friendship graph")
    p.add_argument("--profiles", help="profile attribute file (overrides graph attributes)")
    p.add_argument("--profiles-format", dest="profiles_format", choices=("delimited", "structured"))
    p.add_argument("--target", help="id of the target profile")
    p.add_argument("--kind", action="append", metavar="NAME=KIND",
                   help="override an attribute kind (exact, text, numeric, tag-set)")
    p.add_argument("--metric", choices=("jaro", "edit"))
    p.add_argument("--mode", choices=("vector", "attribute"))
    p.add_argument("--mutual", choices=("binary", "fractional"))
    p.add_argument("--waf", type=float)
    p.add_argument("--rounding", choices=("full", "table"))
    p.add_argument("--candidates", choices=("friends", "all"))
    p.add_argument("--undirected", action="store_true", default=None,
                   help="treat every friendship edge as mutual")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="profsim", description="Rank friend profiles by similarity to a target profile.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    rank = sub.add_parser("rank", help="score, threshold and rank candidate profiles")
    _add_run_options(rank)
    rank.add_argument("--report", help="report output (.csv or .json); stdout if omitted")
    rank.add_argument("--plot", help="optional plot output (.svg or .csv)")
    rank.add_argument("--plot-kind", dest="plot_kind", choices=("raw", "rescaled"))
    rank.set_defaults(func=cmd_rank)

    plot = sub.add_parser("plot", help="write a bar chart (.svg) or series file (.csv) of scores")
    _add_run_options(plot)
    plot.add_argument("--output", help="destination file")
    plot.add_argument("--plot-kind", dest="plot_kind", choices=("raw", "rescaled"))
    plot.set_defaults(func=cmd_plot, report=None)

    metric = sub.add_parser("metric", help="evaluate a string metric on two strings")
    metric.add_argument("metric", help="jaro, edit (distance) or editsim")
    metric.add_argument("s")
    metric.add_argument("t")
    metric.set_defaults(func=cmd_metric)

    validate = sub.add_parser("validate", help="check input files without scoring")
    validate.add_argument("--graph", required=True)
    validate.add_argument("--profiles")
    validate.add_argument("--profiles-format", dest="profiles_format", choices=("delimited", "structured"))
    validate.add_argument("--kind", action="append", metavar="NAME=KIND")
    validate.add_argument("--target")
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (rank, plot, metric, validate)")
        return args.func(args)
    except UsageError as exc:
        print(f"profsim: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        extra = f" (+{len(exc.problems) - 1} more)" if len(exc.problems) > 1 else ""
        print(f"profsim: error: {exc}{extra}", file=sys.stderr)
        return EXIT_INVALID
    except (ProfsimError, ValueError) as exc:
        print(f"profsim: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"profsim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
