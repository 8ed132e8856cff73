"""Command-line front end.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 model invalid, 2 --strict with findings (incompatible exchanges, broken
capabilities, interoperability gaps), 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .clustering import EXHAUSTIVE_LIMIT, cluster_exhaustive, cluster_greedy, cluster_report
from .compatibility import (
    COMPATIBLE_WITH_WARNING,
    INCOMPATIBLE,
    VersionChange,
    check_compatibility,
    evolution_impact,
    expand_system_change,
)
from .emergence import (
    check_capabilities,
    connectivity_index,
    emergent_paths,
    format_chain,
    strongly_connected_components,
)
from .errors import AnalysisError, ParseError, SosmError
from .governance import (
    Bridge,
    compose_sos,
    contract_map,
    integrator_report,
    interop_gaps,
    introduce_infrastructure,
)
from .matrix import build_matrix, density, render, sources_and_sinks
from .model import SosModel, validate_model
from .modelio import export_model, load_model_text
from .timeline import Bundle, ModelDiff, bundle_report, intertwining

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FINDINGS = 2
EXIT_USAGE = 3


class UsageError(SosmError):
    pass


class _ModelInvalid(SosmError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want exit 3
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load(path: str) -> SosModel:
    model = load_model_text(_read(path))
    diagnostics = validate_model(model)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        for d in errors:
            print(d, file=sys.stderr)
        raise _ModelInvalid(f"{len(errors)} validation error(s) in {path}")
    return model


def _fmt_ref(label: str, from_id: int, to_id: int) -> str:
    return f"[{label}] {from_id}->{to_id}"


def cmd_validate(args) -> int:
    model = load_model_text(_read(args.model))
    diagnostics = validate_model(model)
    for d in diagnostics:
        print(d)
    statuses = check_capabilities(model, build_matrix(model))
    for status in statuses:
        if status.intact:
            print(f"capability {status.capability.name!r}: intact")
        else:
            a, b = status.broken_at
            print(f"capability {status.capability.name!r}: broken at {a}->{b}")
    errors = sum(1 for d in diagnostics if d.severity == "error")
    warnings = sum(1 for d in diagnostics if d.severity == "warning")
    print(f"{errors} error(s), {warnings} warning(s)")
    if errors:
        return EXIT_INVALID
    if args.strict and (warnings or any(not s.intact for s in statuses)):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_matrix(args) -> int:
    model = _load(args.model)
    if args.format in ("text", "csv"):
        sys.stdout.write(render(build_matrix(model), args.format))
    else:  # dot | json
        sys.stdout.write(export_model(model, args.format))
    return EXIT_OK


def cmd_paths(args) -> int:
    model = _load(args.model)
    chains = emergent_paths(build_matrix(model), args.from_id, args.to_id, args.max_hops)
    for chain in chains:
        print(format_chain(chain))
    print(f"{len(chains)} chain(s) from {args.from_id} to {args.to_id} "
          f"(max {args.max_hops} hops)", file=sys.stderr)
    return EXIT_OK


def cmd_scc(args) -> int:
    model = _load(args.model)
    components = strongly_connected_components(build_matrix(model))
    for idx, component in enumerate(components, start=1):
        members = ", ".join(str(m) for m in sorted(component))
        print(f"component {idx}: {{{members}}}")
    return EXIT_OK


def cmd_sources(args) -> int:
    model = _load(args.model)
    matrix = build_matrix(model)
    sources, sinks = sources_and_sinks(matrix)
    fmt = lambda ids: ", ".join(str(i) for i in sorted(ids)) if ids else "(none)"
    print(f"sources: {fmt(sources)}")
    print(f"sinks: {fmt(sinks)}")
    print(f"density: {density(matrix):.4f}" if matrix.size >= 2 else "density: n/a")
    return EXIT_OK


def cmd_connectivity(args) -> int:
    model = _load(args.model)
    matrix = build_matrix(model)
    ids = [args.system] if args.system is not None else list(matrix.order)
    for system_id in ids:
        ci = connectivity_index(matrix, system_id)
        print(f"system {system_id}: in_cells={ci.in_cells} out_cells={ci.out_cells} "
              f"in_instances={ci.in_instances} out_instances={ci.out_instances} "
              f"total={ci.total_instances}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    model = _load(args.model)
    matrix = build_matrix(model)
    method = args.method
    if method == "auto":
        method = "exhaustive" if matrix.size <= EXHAUSTIVE_LIMIT else "greedy"
    clustering = (cluster_exhaustive if method == "exhaustive" else cluster_greedy)(
        matrix, args.pow)
    sys.stdout.write(cluster_report(clustering, matrix))
    return EXIT_OK


def cmd_compat(args) -> int:
    model = _load(args.model)
    report = check_compatibility(model)
    for entry in report.entries:
        e = entry.exchange
        line = f"{_fmt_ref(e.label, e.from_id, e.to_id)}: {entry.status}"
        if entry.status == INCOMPATIBLE:
            line += " (" + ", ".join(entry.failing_hops) + ")"
        elif entry.status == COMPATIBLE_WITH_WARNING:
            line += " (unversioned)"
        print(line)
    ok, warn, bad = report.counts()
    print(f"{ok} compatible, {warn} unversioned, {bad} incompatible", file=sys.stderr)
    if args.strict and bad:
        return EXIT_FINDINGS
    return EXIT_OK


def _parse_set_spec(spec: str) -> VersionChange:
    # label@from->to:side=version
    head, sep, assignment = spec.rpartition(":")
    if not sep or "=" not in assignment:
        raise UsageError(f"malformed --set {spec!r} "
                         "(expected label@from->to:side=version)")
    side, _, version = assignment.partition("=")
    label, sep, cell = head.rpartition("@")
    if not sep:
        raise UsageError(f"malformed --set {spec!r}: missing @cell")
    left, sep, right = cell.partition("->")
    if not sep:
        raise UsageError(f"malformed --set {spec!r}: cell must be from->to")
    try:
        from_id, to_id = int(left), int(right)
    except ValueError:
        raise UsageError(f"malformed --set {spec!r}: system ids must be integers") from None
    return VersionChange((label, from_id, to_id), side, version)


def cmd_impact(args) -> int:
    model = _load(args.model)
    changes = [_parse_set_spec(spec) for spec in args.set or []]
    if args.system is not None:
        if not args.side or not args.to_version:
            raise UsageError("--system needs --side and --to")
        changes.extend(expand_system_change(model, args.system, args.side, args.to_version))
    report = evolution_impact(model, changes)
    for change in report.changed:
        label, from_id, to_id = change.ref
        print(f"changed {_fmt_ref(label, from_id, to_id)} {change.side}: "
              f"{change.old_version} -> {change.new_version}")
    for label, from_id, to_id in report.newly_incompatible:
        print(f"newly incompatible: {_fmt_ref(label, from_id, to_id)}")
    affected = ", ".join(str(i) for i in sorted(report.affected_systems)) or "(none)"
    print(f"affected systems: {affected}")
    for broken in report.broken_capabilities:
        a, b = broken.hop
        print(f"broken capability: {broken.name!r} at {a}->{b}")
    if args.strict and (report.newly_incompatible or report.broken_capabilities):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_contracts(args) -> int:
    model = _load(args.model)
    cmap = contract_map(model, build_matrix(model))
    if args.format == "csv":
        print("from,to,labels,src_owner,dst_owner,classification")
        for cell in cmap.cells:
            labels = ";".join(cell.labels)
            print(f"{cell.from_id},{cell.to_id},{labels},"
                  f"{cell.source_owner},{cell.target_owner},{cell.classification}")
    else:
        for cell in cmap.cells:
            labels = ",".join(f"[{label}]" for label in cell.labels)
            print(f"{cell.from_id}->{cell.to_id} {labels}: {cell.classification} "
                  f"({cell.source_owner} -> {cell.target_owner})")
        print(f"{cmap.internal_count} internal cell(s), {cmap.contract_count} contract cell(s)")
    return EXIT_OK


def cmd_integrators(args) -> int:
    model = _load(args.model)
    entries = integrator_report(model, build_matrix(model))
    if args.top:
        entries = entries[:args.top]
    for entry in entries:
        e = entry.exchange
        print(f"{_fmt_ref(e.label, e.from_id, e.to_id)}: score {entry.score}, "
              f"suggested owner: {entry.suggested_owner}")
    return EXIT_OK


def cmd_interop(args) -> int:
    model = _load(args.model)
    gaps = interop_gaps(model)
    for gap in gaps:
        e = gap.exchange
        print(f"{_fmt_ref(e.label, e.from_id, e.to_id)}: missing {', '.join(gap.missing)}")
    print(f"{len(gaps)} exchange(s) with undeclared levels", file=sys.stderr)
    if args.strict and gaps:
        return EXIT_FINDINGS
    return EXIT_OK


def _parse_bridge_spec(spec: str, names: dict[str, int]) -> Bridge:
    # A.4<->B.4:coord  or  A.2->B.2:report
    head, sep, label = spec.rpartition(":")
    if not sep or not label:
        raise UsageError(f"malformed --bridge {spec!r} (missing :label)")
    bidirectional = "<->" in head
    left, _, right = head.partition("<->" if bidirectional else "->")
    if not right:
        raise UsageError(f"malformed --bridge {spec!r} (expected A.<id>->B.<id>)")

    def endpoint(text: str) -> tuple[int, int]:
        name, sep, id_text = text.rpartition(".")
        if not sep or name not in names:
            raise UsageError(f"unknown bridge endpoint {text!r}")
        try:
            return names[name], int(id_text)
        except ValueError:
            raise UsageError(f"malformed bridge endpoint {text!r}") from None

    (fm, fs), (tm, ts) = endpoint(left), endpoint(right)
    return Bridge(fm, fs, tm, ts, label, bidirectional=bidirectional)


def cmd_compose(args) -> int:
    models = [_load(path) for path in args.models]
    names = {m.name: idx for idx, m in enumerate(models)}
    bridges = [_parse_bridge_spec(spec, names) for spec in args.bridge or []]
    composed, report = compose_sos(models, bridges)
    sys.stdout.write(export_model(composed, "json"))
    print(f"{report.model_count} model(s), {report.bridges_declared} bridge(s) "
          f"adding {report.bridge_exchanges} exchange(s); "
          f"{report.configurations} configurations, "
          f"{report.directed_pairs} directed inter-SoS pairs", file=sys.stderr)
    return EXIT_OK


def cmd_infra(args) -> int:
    model = _load(args.model)
    try:
        scope = {int(part) for part in args.scope.split(",") if part.strip()}
    except ValueError:
        raise UsageError(f"malformed --scope {args.scope!r}") from None
    new_model, report = introduce_infrastructure(model, scope, args.hub,
                                                 hub_owner=args.hub_owner)
    sys.stdout.write(export_model(new_model, "json"))
    print(f"scope of {report.scope_size}: {report.replaced_instances} in-scope "
          f"instance(s) -> {report.hub_links} hub link(s) (delta {report.delta}); "
          f"full mesh {report.theoretical_mesh} vs hub {report.theoretical_hub}",
          file=sys.stderr)
    if report.warning:
        print("warning: hub topology does not reduce interfaces at this scope size",
              file=sys.stderr)
    return EXIT_OK


def _print_diff(d: ModelDiff) -> None:
    for s in d.removed_systems:
        print(f"  - system {s.id} {s.name!r}")
    for s in d.added_systems:
        print(f"  + system {s.id} {s.name!r}")
    for change in d.owner_changes:
        print(f"  ~ system {change.system_id} owner: "
              f"{change.old_owner} -> {change.new_owner}")
    for e in d.removed_exchanges:
        print(f"  - exchange {_fmt_ref(e.label, e.from_id, e.to_id)}")
    for e in d.added_exchanges:
        print(f"  + exchange {_fmt_ref(e.label, e.from_id, e.to_id)}")
    for change in d.version_changes:
        label, from_id, to_id = change.ref
        print(f"  ~ exchange {_fmt_ref(label, from_id, to_id)} {change.side}: "
              f"{change.old_version} -> {change.new_version}")
    for a in d.removed_adapters:
        print(f"  - adapter {a.exchange_label} {a.from_id}->{a.to_id} {a.hop}")
    for a in d.added_adapters:
        print(f"  + adapter {a.exchange_label} {a.from_id}->{a.to_id} {a.hop}")
    for c in d.removed_capabilities:
        print(f"  - capability {c.name!r}")
    for c in d.added_capabilities:
        print(f"  + capability {c.name!r}")
    if d.is_empty():
        print("  (no changes)")


def cmd_timeline(args) -> int:
    models = [_load(path) for path in args.models]
    try:
        bundle = Bundle(tuple(models))
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = bundle_report(bundle)
    for idx, summary in enumerate(report.summaries, start=1):
        print(f"snapshot {idx} ({summary.timestamp.isoformat()}): "
              f"{summary.exchange_count} exchange(s), "
              f"{summary.incompatible_count} incompatible")
    for idx, d in enumerate(report.diffs, start=1):
        print(f"diff snapshot {idx} -> {idx + 1}:")
        _print_diff(d)
    pairs = intertwining(bundle)
    if pairs:
        print("intertwining:")
        for (a, b), fraction in pairs.items():
            print(f"  {a} ~ {b}: {fraction:.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sosm", description="Coupling-matrix analysis for systems of systems")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, model_arg=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        if model_arg:
            p.add_argument("model", help="model file (.sosm or exported JSON)")
        return p

    p = add("validate", cmd_validate, "check model invariants and capability paths")
    p.add_argument("--strict", action="store_true")

    p = add("matrix", cmd_matrix, "render the coupling matrix or export the model")
    p.add_argument("--format", choices=("text", "csv", "dot", "json"), default="text")

    p = add("paths", cmd_paths, "enumerate emergent-service chains")
    p.add_argument("--from", dest="from_id", type=int, required=True)
    p.add_argument("--to", dest="to_id", type=int, required=True)
    p.add_argument("--max-hops", type=int, default=6)

    add("scc", cmd_scc, "strongly connected components (interaction loops)")
    add("sources", cmd_sources, "sources, sinks and matrix density")

    p = add("connectivity", cmd_connectivity, "per-system connectivity indices")
    p.add_argument("--system", type=int)

    p = add("cluster", cmd_cluster, "block-diagonal clustering")
    p.add_argument("--pow", type=float, default=2.0)
    p.add_argument("--method", choices=("auto", "exhaustive", "greedy"), default="auto")

    p = add("compat", cmd_compat, "version compatibility of every exchange")
    p.add_argument("--strict", action="store_true")

    p = add("impact", cmd_impact, "asynchronous-evolution impact of version changes")
    p.add_argument("--set", action="append", metavar="label@from->to:side=version")
    p.add_argument("--system", type=int, help="bump every versioned instance of a system")
    p.add_argument("--side", choices=("provider", "infrastructure", "client"))
    p.add_argument("--to", dest="to_version", metavar="VERSION")
    p.add_argument("--strict", action="store_true")

    p = add("contracts", cmd_contracts, "ownership/contract map of non-empty cells")
    p.add_argument("--format", choices=("text", "csv"), default="text")

    p = add("integrators", cmd_integrators, "integration responsibility ranking")
    p.add_argument("--top", type=int)

    p = add("interop", cmd_interop, "undeclared interoperability levels per exchange")
    p.add_argument("--strict", action="store_true")

    p = add("compose", cmd_compose, "merge several models with bridges", model_arg=False)
    p.add_argument("models", nargs="+", help="model files")
    p.add_argument("--bridge", action="append", metavar="A.4<->B.4:label")

    p = add("infra", cmd_infra, "reroute a scope through a shared infrastructure hub")
    p.add_argument("--scope", required=True, help="comma list of system ids")
    p.add_argument("--hub", required=True, help="name of the new hub system")
    p.add_argument("--hub-owner", default="Infrastructure operator")

    p = add("timeline", cmd_timeline, "diff a time-ordered bundle of snapshots",
            model_arg=False)
    p.add_argument("models", nargs="+", help="snapshot files, oldest first")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _ModelInvalid as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
