"""Version compatibility of exchanges and asynchronous-evolution impact.

Each versioned exchange carries a provider/infrastructure/client triple and
is checked hop by hop: provider->infrastructure and infrastructure->client.
A hop is compatible when the two versions are equal or a declared adapter
translates exactly between them. Unversioned exchanges pass with a warning.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import AnalysisError
from .model import (
    HOP_CLIENT,
    HOP_PROVIDER,
    VERSION_SIDES,
    Exchange,
    ExchangeRef,
    SosModel,
    is_version,
)

COMPATIBLE = "compatible"
COMPATIBLE_WITH_WARNING = "compatible_with_warning"
INCOMPATIBLE = "incompatible"


@dataclass(frozen=True)
class ExchangeCompat:
    exchange: Exchange
    status: str
    failing_hops: tuple[str, ...] = ()


@dataclass(frozen=True)
class CompatReport:
    entries: tuple[ExchangeCompat, ...]

    def by_ref(self) -> dict[ExchangeRef, ExchangeCompat]:
        return {entry.exchange.ref: entry for entry in self.entries}

    def incompatible(self) -> list[ExchangeCompat]:
        return [e for e in self.entries if e.status == INCOMPATIBLE]

    def counts(self) -> tuple[int, int, int]:
        """(compatible, compatible_with_warning, incompatible)."""
        return (
            sum(1 for e in self.entries if e.status == COMPATIBLE),
            sum(1 for e in self.entries if e.status == COMPATIBLE_WITH_WARNING),
            sum(1 for e in self.entries if e.status == INCOMPATIBLE),
        )


@dataclass(frozen=True)
class VersionChange:
    """One requested version change on one exchange instance."""

    ref: ExchangeRef
    side: str  # provider | infrastructure | client
    new_version: str


@dataclass(frozen=True)
class AppliedChange:
    ref: ExchangeRef
    side: str
    old_version: str
    new_version: str


@dataclass(frozen=True)
class BrokenCapability:
    name: str
    hop: tuple[int, int]


@dataclass(frozen=True)
class ImpactReport:
    changed: tuple[AppliedChange, ...]
    newly_incompatible: tuple[ExchangeRef, ...]
    affected_systems: frozenset[int]
    broken_capabilities: tuple[BrokenCapability, ...]

    def is_empty(self) -> bool:
        return not (self.changed or self.newly_incompatible
                    or self.affected_systems or self.broken_capabilities)


def _adapter_index(model: SosModel) -> dict[tuple[ExchangeRef, str], set[tuple[str, str]]]:
    index: dict[tuple[ExchangeRef, str], set[tuple[str, str]]] = {}
    for a in model.adapters:
        index.setdefault((a.exchange_ref, a.hop), set()).add((a.from_version, a.to_version))
    return index


def check_compatibility(model: SosModel) -> CompatReport:
    """Hop-by-hop status of every exchange instance, in declaration order."""
    adapters = _adapter_index(model)
    entries = []
    for e in model.exchanges:
        if e.versions is None:
            entries.append(ExchangeCompat(e, COMPATIBLE_WITH_WARNING))
            continue
        v = e.versions
        failing = []
        hops = (
            (HOP_PROVIDER, v.provider_version, v.infrastructure_version),
            (HOP_CLIENT, v.infrastructure_version, v.client_version),
        )
        for hop, left, right in hops:
            if left != right and (left, right) not in adapters.get((e.ref, hop), ()):
                failing.append(hop)
        if failing:
            entries.append(ExchangeCompat(e, INCOMPATIBLE, tuple(failing)))
        else:
            entries.append(ExchangeCompat(e, COMPATIBLE))
    return CompatReport(tuple(entries))


def apply_changes(model: SosModel, changes: list[VersionChange]) -> tuple[SosModel, tuple[AppliedChange, ...]]:
    """Return a copy of the model with the version changes applied, plus the
    log of actual value changes (no-op requests are validated but not logged)."""
    exchange_map = model.exchange_map()
    for change in changes:
        if change.side not in VERSION_SIDES:
            raise AnalysisError(f"unknown version side {change.side!r}")
        if not is_version(change.new_version):
            raise AnalysisError(f"malformed version {change.new_version!r}")
        label, from_id, to_id = change.ref
        exchange = exchange_map.get(change.ref)
        if exchange is None:
            raise AnalysisError(f"unknown exchange instance {label} {from_id}->{to_id}")
        if exchange.versions is None:
            raise AnalysisError(
                f"exchange {label} {from_id}->{to_id} is unversioned; "
                "declare versions before changing them")

    new_versions = {e.ref: e.versions for e in model.exchanges}
    applied: list[AppliedChange] = []
    for change in changes:
        old = new_versions[change.ref].side(change.side)
        if old != change.new_version:
            applied.append(AppliedChange(change.ref, change.side, old, change.new_version))
            new_versions[change.ref] = new_versions[change.ref].with_side(
                change.side, change.new_version)
    exchanges = tuple(
        e if new_versions[e.ref] == e.versions else replace(e, versions=new_versions[e.ref])
        for e in model.exchanges
    )
    return replace(model, exchanges=exchanges), tuple(applied)


def _fully_incompatible_cells(model: SosModel, report: CompatReport) -> set[tuple[int, int]]:
    by_ref = report.by_ref()
    cells: dict[tuple[int, int], list[str]] = {}
    for e in model.exchanges:
        cells.setdefault((e.from_id, e.to_id), []).append(by_ref[e.ref].status)
    return {
        cell for cell, statuses in cells.items()
        if statuses and all(status == INCOMPATIBLE for status in statuses)
    }


def evolution_impact(model: SosModel, changes: list[VersionChange]) -> ImpactReport:
    """Apply version changes to a copy and report the compatibility delta.

    A capability is broken only when some hop of its path lands on a cell
    whose every instance turned incompatible; one surviving compatible
    instance still carries the service.
    """
    before = check_compatibility(model)
    changed_model, applied = apply_changes(model, changes)
    after = check_compatibility(changed_model)

    before_status = before.by_ref()
    newly = tuple(sorted(
        entry.exchange.ref for entry in after.entries
        if entry.status == INCOMPATIBLE and before_status[entry.exchange.ref].status != INCOMPATIBLE
    ))
    affected = frozenset(
        system_id for label, from_id, to_id in newly for system_id in (from_id, to_id)
    )

    dead_before = _fully_incompatible_cells(model, before)
    dead_after = _fully_incompatible_cells(changed_model, after)
    became_dead = dead_after - dead_before
    broken = []
    for capability in model.capabilities:
        for hop in zip(capability.path, capability.path[1:]):
            if hop in became_dead:
                broken.append(BrokenCapability(capability.name, hop))
                break
    return ImpactReport(applied, newly, affected, tuple(broken))


def expand_system_change(model: SosModel, system_id: int, side: str,
                         new_version: str) -> list[VersionChange]:
    """System-wide bump expressed as per-instance changes.

    provider/infrastructure sides address the services the system provides
    (from = system); the client side addresses the services it consumes
    (to = system). Only versioned instances are included.
    """
    if side not in VERSION_SIDES:
        raise AnalysisError(f"unknown version side {side!r}")
    if system_id not in {s.id for s in model.systems}:
        raise AnalysisError(f"unknown system id {system_id}")
    if side == "client":
        picked = [e for e in model.exchanges if e.to_id == system_id]
    else:
        picked = [e for e in model.exchanges if e.from_id == system_id]
    return [VersionChange(e.ref, side, new_version) for e in picked if e.versions is not None]
