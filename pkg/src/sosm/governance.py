"""Ownership, contracting and architecture transforms.

Covers the managerial side of the coupling matrix: which cells cross an
ownership boundary (and therefore need a contract), who should integrate the
most connected services, which interoperability levels are still undeclared,
how several models compose into a multinational system-of-systems, and how a
shared infrastructure hub replaces pairwise interfaces.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import AnalysisError
from .emergence import connectivity_index
from .matrix import CouplingMatrix, build_matrix
from .model import (
    INTEROP_LEVELS,
    Adapter,
    Capability,
    Exchange,
    SosModel,
    SystemNode,
)

INTERNAL = "internal"
CONTRACT = "contract"


@dataclass(frozen=True)
class CellContract:
    from_id: int
    to_id: int
    labels: tuple[str, ...]
    source_owner: str
    target_owner: str
    classification: str


@dataclass(frozen=True)
class ContractMap:
    cells: tuple[CellContract, ...]

    @property
    def internal_count(self) -> int:
        return sum(1 for c in self.cells if c.classification == INTERNAL)

    @property
    def contract_count(self) -> int:
        return sum(1 for c in self.cells if c.classification == CONTRACT)

    def by_cell(self) -> dict[tuple[int, int], CellContract]:
        return {(c.from_id, c.to_id): c for c in self.cells}


def contract_map(model: SosModel, matrix: CouplingMatrix) -> ContractMap:
    """Classify every non-empty cell as internal (same owner) or contract.

    A uniform contract_override on every exchange of a cell wins over the
    owner rule; partial or conflicting overrides within a cell are an error.
    """
    owners = {s.id: s.owner for s in model.systems}
    cells = []
    for (i, j) in sorted(matrix.cells):
        exchanges = matrix.cells[(i, j)]
        if not exchanges:
            continue
        overrides = {e.contract_override for e in exchanges}
        if overrides == {None}:
            classification = INTERNAL if owners[i] == owners[j] else CONTRACT
        elif len(overrides) == 1:
            classification = overrides.pop()
        else:
            raise AnalysisError(
                f"mixed contract overrides in cell ({i},{j}): "
                "declare the same override on every exchange of the cell or on none")
        cells.append(CellContract(i, j, tuple(e.label for e in exchanges),
                                  owners[i], owners[j], classification))
    return ContractMap(tuple(cells))


@dataclass(frozen=True)
class IntegratorEntry:
    exchange: Exchange
    score: int
    suggested_owner: str


def integrator_report(model: SosModel, matrix: CouplingMatrix) -> list[IntegratorEntry]:
    """Exchange instances ranked by endpoint connectivity; the owner of the
    better-connected endpoint is the suggested integration responsible."""
    owners = {s.id: s.owner for s in model.systems}
    totals = {i: connectivity_index(matrix, i).total_instances for i in matrix.order}
    entries = []
    for e in model.exchanges:
        score = totals[e.from_id] + totals[e.to_id]
        if totals[e.to_id] > totals[e.from_id]:
            suggested = owners[e.to_id]
        else:
            suggested = owners[e.from_id]
        entries.append(IntegratorEntry(e, score, suggested))
    entries.sort(key=lambda entry: (-entry.score, entry.exchange.from_id,
                                    entry.exchange.to_id, entry.exchange.label))
    return entries


@dataclass(frozen=True)
class InteropGap:
    exchange: Exchange
    missing: tuple[str, ...]


def interop_gaps(model: SosModel) -> list[InteropGap]:
    """Exchanges with undeclared interoperability levels; complete ones are
    omitted."""
    gaps = []
    for e in model.exchanges:
        missing = tuple(level for level in INTEROP_LEVELS if level not in e.levels)
        if missing:
            gaps.append(InteropGap(e, missing))
    return gaps


@dataclass(frozen=True)
class Bridge:
    """One inter-model exchange declaration for composition.

    Model endpoints are (index into the model list, system id in that model).
    A bidirectional bridge adds one exchange per direction.
    """

    from_model: int
    from_system: int
    to_model: int
    to_system: int
    label: str
    description: str = ""
    bidirectional: bool = False


@dataclass(frozen=True)
class CompositionReport:
    model_count: int
    bridges_declared: int
    bridge_exchanges: int
    configurations: int  # model_count ** 2
    directed_pairs: int  # model_count * (model_count - 1)


def compose_sos(models: list[SosModel], bridges: list[Bridge]) -> tuple[SosModel, CompositionReport]:
    """Merge models into one system-of-systems with disjoint system ids.

    Systems are renamed "<model name>.<id>" and renumbered sequentially in
    model order; bridges become ordinary exchanges between the merged ids.
    """
    if not models:
        raise AnalysisError("compose needs at least one model")
    names = [m.name for m in models]
    if len(set(names)) != len(names):
        raise AnalysisError(f"duplicate model names: {names}")

    id_map: dict[tuple[int, int], int] = {}
    next_id = 1
    systems: list[SystemNode] = []
    for index, m in enumerate(models):
        for s in sorted(m.systems, key=lambda s: s.id):
            id_map[(index, s.id)] = next_id
            systems.append(replace(s, id=next_id, name=f"{m.name}.{s.id}"))
            next_id += 1

    exchanges: list[Exchange] = []
    adapters: list[Adapter] = []
    capabilities: list[Capability] = []
    for index, m in enumerate(models):
        for e in m.exchanges:
            exchanges.append(replace(e, from_id=id_map[(index, e.from_id)],
                                     to_id=id_map[(index, e.to_id)]))
        for a in m.adapters:
            adapters.append(replace(a, from_id=id_map[(index, a.from_id)],
                                    to_id=id_map[(index, a.to_id)]))
        for c in m.capabilities:
            capabilities.append(Capability(f"{m.name}.{c.name}",
                                           tuple(id_map[(index, p)] for p in c.path)))

    bridge_exchanges = 0
    for b in bridges:
        for index, system_id in ((b.from_model, b.from_system), (b.to_model, b.to_system)):
            if (index, system_id) not in id_map:
                raise AnalysisError(
                    f"dangling bridge endpoint: model {index}, system {system_id}")
        ends = [(id_map[(b.from_model, b.from_system)], id_map[(b.to_model, b.to_system)])]
        if b.bidirectional:
            ends.append((ends[0][1], ends[0][0]))
        for from_id, to_id in ends:
            exchanges.append(Exchange(b.label, from_id, to_id,
                                      b.description or f"bridge {b.label}"))
            bridge_exchanges += 1

    n = len(models)
    composed = SosModel(
        name="+".join(names),
        oim_level=min(m.oim_level for m in models),
        systems=tuple(systems),
        exchanges=tuple(exchanges),
        adapters=tuple(adapters),
        capabilities=tuple(capabilities),
    )
    report = CompositionReport(n, len(bridges), bridge_exchanges, n * n, n * (n - 1))
    return composed, report


@dataclass(frozen=True)
class InfraReport:
    scope_size: int
    replaced_instances: int  # in-scope instances before the refactoring
    hub_links: int           # distinct directed system<->hub cells after
    theoretical_mesh: int    # k * (k - 1)
    theoretical_hub: int     # 2 * k

    @property
    def delta(self) -> int:
        return self.replaced_instances - self.hub_links

    @property
    def warning(self) -> bool:
        return self.theoretical_hub >= self.theoretical_mesh


def introduce_infrastructure(model: SosModel, scope: set[int], hub_name: str,
                             hub_owner: str = "Infrastructure operator") -> tuple[SosModel, InfraReport]:
    """Reroute all exchanges inside scope through a new hub system.

    Every in-scope exchange (both endpoints in scope) is replaced by two
    legs, label suffixed ".in"/".out", carrying the original kind, versions
    and levels; adapters of a replaced exchange are duplicated onto both
    legs so compatibility verdicts survive the refactoring. Cells with at
    most one endpoint in scope are untouched.
    """
    ids = {s.id for s in model.systems}
    if len(scope) < 2:
        raise AnalysisError("infrastructure scope needs at least 2 systems")
    unknown = scope - ids
    if unknown:
        raise AnalysisError(f"unknown system id {sorted(unknown)[0]}")
    if any(s.name == hub_name for s in model.systems):
        raise AnalysisError(f"hub name {hub_name!r} collides with an existing system")

    hub_id = max(ids) + 1
    in_scope = [e for e in model.exchanges
                if e.from_id in scope and e.to_id in scope]

    # Leg labels carry ".in"/".out"; when several same-label exchanges from
    # (or to) the same system would collide on the hub cell, the lost
    # counterpart id is kept in the label.
    in_counts: dict[tuple[str, int], int] = {}
    out_counts: dict[tuple[str, int], int] = {}
    for e in in_scope:
        in_counts[(e.label, e.from_id)] = in_counts.get((e.label, e.from_id), 0) + 1
        out_counts[(e.label, e.to_id)] = out_counts.get((e.label, e.to_id), 0) + 1

    def leg_labels(e: Exchange) -> tuple[str, str]:
        in_label = (f"{e.label}.{e.to_id}.in" if in_counts[(e.label, e.from_id)] > 1
                    else f"{e.label}.in")
        out_label = (f"{e.label}.{e.from_id}.out" if out_counts[(e.label, e.to_id)] > 1
                     else f"{e.label}.out")
        return in_label, out_label

    replaced = {e.ref for e in in_scope}
    exchanges: list[Exchange] = []
    adapters: list[Adapter] = list(a for a in model.adapters if a.exchange_ref not in replaced)
    for e in model.exchanges:
        if e.ref not in replaced:
            exchanges.append(e)
            continue
        in_label, out_label = leg_labels(e)
        exchanges.append(replace(e, label=in_label, to_id=hub_id))
        exchanges.append(replace(e, label=out_label, from_id=hub_id))
        for a in model.adapters:
            if a.exchange_ref == e.ref:
                adapters.append(replace(a, exchange_label=in_label, to_id=hub_id))
                adapters.append(replace(a, exchange_label=out_label, from_id=hub_id))

    if len({e.ref for e in exchanges}) != len(exchanges):
        raise AnalysisError("exchange label collision while rerouting through the hub")
    new_model = replace(
        model,
        systems=model.systems + (SystemNode(hub_id, hub_name, hub_owner),),
        exchanges=tuple(exchanges),
        adapters=tuple(adapters),
    )
    hub_cells = {(e.from_id, e.to_id) for e in new_model.exchanges
                 if hub_id in (e.from_id, e.to_id)}
    k = len(scope)
    report = InfraReport(k, len(in_scope), len(hub_cells), k * (k - 1), 2 * k)
    return new_model, report


def reachable_pairs(model: SosModel) -> set[tuple[int, int]]:
    """Transitive closure of the exchange graph (excluding trivial i->i)."""
    matrix = build_matrix(model)
    ids = list(matrix.order)
    reach = {(i, j) for (i, j), exchanges in matrix.cells.items() if exchanges}
    for k in ids:
        for i in ids:
            if (i, k) in reach:
                for j in ids:
                    if (k, j) in reach:
                        reach.add((i, j))
    return {(i, j) for (i, j) in reach if i != j}
