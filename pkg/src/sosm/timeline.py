"""Time-indexed bundles of model snapshots: diffing and evolution metrics.

Snapshot entities are identified by stable keys: system id and the
(label, from, to) exchange triple. Owner changes on a system and per-side
version changes on an exchange are reported field-level; any other field
change surfaces as a remove + add of the entity. Diffs cover the model
structure; name, oim level and timestamp are snapshot metadata and are not
diffed. ``apply_diff`` is the exact inverse: applying diff(a, b) to a
reconstructs b structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date

from .errors import AnalysisError
from .compatibility import check_compatibility
from .governance import CONTRACT, contract_map
from .matrix import build_matrix
from .model import (
    VERSION_SIDES,
    Adapter,
    Capability,
    Exchange,
    ExchangeRef,
    SosModel,
    SystemNode,
)


@dataclass(frozen=True)
class Bundle:
    """Snapshots of one model, ordered by strictly increasing timestamp."""

    snapshots: tuple[SosModel, ...]

    def __post_init__(self):
        if not self.snapshots:
            raise AnalysisError("a bundle needs at least one snapshot")
        names = {m.name for m in self.snapshots}
        if len(names) != 1:
            raise AnalysisError(f"bundle mixes different models: {sorted(names)}")
        stamps = [m.timestamp for m in self.snapshots]
        if any(t is None for t in stamps):
            raise AnalysisError("every bundle snapshot needs a timestamp")
        if any(a >= b for a, b in zip(stamps, stamps[1:])):
            raise AnalysisError("bundle timestamps must be strictly increasing")


@dataclass(frozen=True)
class OwnerChange:
    system_id: int
    old_owner: str
    new_owner: str


@dataclass(frozen=True)
class VersionChangeEntry:
    ref: ExchangeRef
    side: str
    old_version: str
    new_version: str


@dataclass(frozen=True)
class ModelDiff:
    added_systems: tuple[SystemNode, ...] = ()
    removed_systems: tuple[SystemNode, ...] = ()
    owner_changes: tuple[OwnerChange, ...] = ()
    added_exchanges: tuple[Exchange, ...] = ()
    removed_exchanges: tuple[Exchange, ...] = ()
    version_changes: tuple[VersionChangeEntry, ...] = ()
    added_adapters: tuple[Adapter, ...] = ()
    removed_adapters: tuple[Adapter, ...] = ()
    added_capabilities: tuple[Capability, ...] = ()
    removed_capabilities: tuple[Capability, ...] = ()

    def is_empty(self) -> bool:
        return not any((
            self.added_systems, self.removed_systems, self.owner_changes,
            self.added_exchanges, self.removed_exchanges, self.version_changes,
            self.added_adapters, self.removed_adapters,
            self.added_capabilities, self.removed_capabilities,
        ))


def _adapter_key(a: Adapter):
    return (a.exchange_label, a.from_id, a.to_id, a.hop, a.from_version, a.to_version)


def _capability_key(c: Capability):
    return (c.name, c.path)


def diff(before: SosModel, after: SosModel) -> ModelDiff:
    """Structural difference between two snapshots, deterministically ordered."""
    before_systems = before.system_map()
    after_systems = after.system_map()
    added_systems: list[SystemNode] = []
    removed_systems: list[SystemNode] = []
    owner_changes: list[OwnerChange] = []
    for system_id in sorted(before_systems.keys() | after_systems.keys()):
        old, new = before_systems.get(system_id), after_systems.get(system_id)
        if old is None:
            added_systems.append(new)
        elif new is None:
            removed_systems.append(old)
        elif old != new:
            if replace(old, owner=new.owner) == new:
                owner_changes.append(OwnerChange(system_id, old.owner, new.owner))
            else:
                removed_systems.append(old)
                added_systems.append(new)

    before_exchanges = before.exchange_map()
    after_exchanges = after.exchange_map()
    added_exchanges: list[Exchange] = []
    removed_exchanges: list[Exchange] = []
    version_changes: list[VersionChangeEntry] = []
    for ref in sorted(before_exchanges.keys() | after_exchanges.keys()):
        old, new = before_exchanges.get(ref), after_exchanges.get(ref)
        if old is None:
            added_exchanges.append(new)
        elif new is None:
            removed_exchanges.append(old)
        elif old != new:
            versions_only = (old.versions is not None and new.versions is not None
                             and replace(old, versions=new.versions) == new)
            if versions_only:
                for side in VERSION_SIDES:
                    if old.versions.side(side) != new.versions.side(side):
                        version_changes.append(VersionChangeEntry(
                            ref, side, old.versions.side(side), new.versions.side(side)))
            else:
                removed_exchanges.append(old)
                added_exchanges.append(new)

    before_adapters = {_adapter_key(a) for a in before.adapters}
    after_adapters = {_adapter_key(a) for a in after.adapters}
    added_adapters = tuple(a for a in sorted(after.adapters, key=_adapter_key)
                           if _adapter_key(a) not in before_adapters)
    removed_adapters = tuple(a for a in sorted(before.adapters, key=_adapter_key)
                             if _adapter_key(a) not in after_adapters)

    before_capabilities = {_capability_key(c) for c in before.capabilities}
    after_capabilities = {_capability_key(c) for c in after.capabilities}
    added_capabilities = tuple(c for c in sorted(after.capabilities, key=_capability_key)
                               if _capability_key(c) not in before_capabilities)
    removed_capabilities = tuple(c for c in sorted(before.capabilities, key=_capability_key)
                                 if _capability_key(c) not in after_capabilities)

    return ModelDiff(
        added_systems=tuple(added_systems),
        removed_systems=tuple(removed_systems),
        owner_changes=tuple(owner_changes),
        added_exchanges=tuple(added_exchanges),
        removed_exchanges=tuple(removed_exchanges),
        version_changes=tuple(version_changes),
        added_adapters=added_adapters,
        removed_adapters=removed_adapters,
        added_capabilities=added_capabilities,
        removed_capabilities=removed_capabilities,
    )


def apply_diff(model: SosModel, d: ModelDiff) -> SosModel:
    """Replay a diff on a model; inverse of diff at the structural level."""
    removed_system_ids = {s.id for s in d.removed_systems}
    systems = [s for s in model.systems if s.id not in removed_system_ids]
    owner_by_id = {c.system_id: c.new_owner for c in d.owner_changes}
    systems = [replace(s, owner=owner_by_id[s.id]) if s.id in owner_by_id else s
               for s in systems]
    systems.extend(d.added_systems)

    removed_refs = {e.ref for e in d.removed_exchanges}
    exchanges = [e for e in model.exchanges if e.ref not in removed_refs]
    changes_by_ref: dict[ExchangeRef, list[VersionChangeEntry]] = {}
    for change in d.version_changes:
        changes_by_ref.setdefault(change.ref, []).append(change)
    patched = []
    for e in exchanges:
        for change in changes_by_ref.get(e.ref, ()):
            e = replace(e, versions=e.versions.with_side(change.side, change.new_version))
        patched.append(e)
    patched.extend(d.added_exchanges)

    removed_adapter_keys = {_adapter_key(a) for a in d.removed_adapters}
    adapters = [a for a in model.adapters if _adapter_key(a) not in removed_adapter_keys]
    adapters.extend(d.added_adapters)

    removed_capability_keys = {_capability_key(c) for c in d.removed_capabilities}
    capabilities = [c for c in model.capabilities
                    if _capability_key(c) not in removed_capability_keys]
    capabilities.extend(d.added_capabilities)

    return replace(model, systems=tuple(systems), exchanges=tuple(patched),
                   adapters=tuple(adapters), capabilities=tuple(capabilities))


@dataclass(frozen=True)
class SnapshotSummary:
    timestamp: date
    exchange_count: int
    incompatible_count: int


@dataclass(frozen=True)
class BundleReport:
    summaries: tuple[SnapshotSummary, ...]
    diffs: tuple[ModelDiff, ...]  # one per consecutive snapshot pair


def bundle_report(bundle: Bundle) -> BundleReport:
    summaries = tuple(
        SnapshotSummary(m.timestamp, len(m.exchanges),
                        check_compatibility(m).counts()[2])
        for m in bundle.snapshots
    )
    diffs = tuple(diff(a, b) for a, b in zip(bundle.snapshots, bundle.snapshots[1:]))
    return BundleReport(summaries, diffs)


def intertwining(bundle: Bundle) -> dict[tuple[str, str], float]:
    """Per unordered pair of distinct owners: the fraction of snapshots in
    which the pair shares at least one contract cell. Pairs co-existing in
    some snapshot but never sharing a contract are listed with 0.0."""
    total = len(bundle.snapshots)
    seen_pairs: set[tuple[str, str]] = set()
    contract_hits: dict[tuple[str, str], int] = {}
    for m in bundle.snapshots:
        owners = sorted(m.owners())
        for i, a in enumerate(owners):
            for b in owners[i + 1:]:
                seen_pairs.add((a, b))
        cmap = contract_map(m, build_matrix(m))
        snapshot_pairs = {
            tuple(sorted((cell.source_owner, cell.target_owner)))
            for cell in cmap.cells
            if cell.classification == CONTRACT and cell.source_owner != cell.target_owner
        }
        for pair in snapshot_pairs:
            contract_hits[pair] = contract_hits.get(pair, 0) + 1
    return {pair: contract_hits.get(pair, 0) / total for pair in sorted(seen_pairs)}
