"""Core domain types for system-of-systems coupling models.

A model is one snapshot of a system-of-systems: the member systems, the
directed service/product exchanges between them, version adapters sitting on
exchange hops, and the capabilities (emergent services) the coupling is meant
to deliver. Everything is frozen; analyses never mutate a model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date

VERSION_RE = re.compile(r"^\d+\.\d+$")

INTEROP_LEVELS = ("physical", "procedural", "operational")
EXCHANGE_KINDS = ("service", "product")
CONTRACT_CLASSES = ("internal", "contract")

HOP_PROVIDER = "provider_to_infra"
HOP_CLIENT = "infra_to_client"
ADAPTER_HOPS = (HOP_PROVIDER, HOP_CLIENT)

VERSION_SIDES = ("provider", "infrastructure", "client")

# An exchange instance is identified by its (label, from_id, to_id) triple;
# the same label may legally appear in several cells.
ExchangeRef = tuple[str, int, int]


def is_version(text: str) -> bool:
    """True for two-component MAJOR.MINOR version strings such as "1.6"."""
    return bool(VERSION_RE.match(text))


@dataclass(frozen=True)
class SystemNode:
    """One member system; sits on the matrix diagonal."""

    id: int
    name: str
    owner: str
    provider: str | None = None


@dataclass(frozen=True)
class VersionTriple:
    """Running versions of one exchanged service: provider side,
    infrastructure, client side. Versions compare by exact string equality."""

    provider_version: str
    infrastructure_version: str
    client_version: str

    def side(self, side: str) -> str:
        if side not in VERSION_SIDES:
            raise ValueError(f"unknown version side {side!r}")
        return getattr(self, f"{side}_version")

    def with_side(self, side: str, version: str) -> "VersionTriple":
        if side not in VERSION_SIDES:
            raise ValueError(f"unknown version side {side!r}")
        values = {s: self.side(s) for s in VERSION_SIDES}
        values[side] = version
        return VersionTriple(*(values[s] for s in VERSION_SIDES))


@dataclass(frozen=True)
class Exchange:
    """One directed service/product flow instance from one system to another."""

    label: str
    from_id: int
    to_id: int
    description: str
    kind: str = "service"
    versions: VersionTriple | None = None
    levels: frozenset[str] = frozenset()
    contract_override: str | None = None

    @property
    def ref(self) -> ExchangeRef:
        return (self.label, self.from_id, self.to_id)


@dataclass(frozen=True)
class Adapter:
    """A declared version translation on one hop of one exchange instance."""

    exchange_label: str
    from_id: int
    to_id: int
    hop: str
    from_version: str
    to_version: str

    @property
    def exchange_ref(self) -> ExchangeRef:
        return (self.exchange_label, self.from_id, self.to_id)


@dataclass(frozen=True)
class Capability:
    """An emergent service, declared as the system chain that carries it."""

    name: str
    path: tuple[int, ...]


@dataclass(frozen=True)
class SosModel:
    """One time-indexed snapshot of a system-of-systems."""

    name: str
    oim_level: int
    systems: tuple[SystemNode, ...] = ()
    exchanges: tuple[Exchange, ...] = ()
    adapters: tuple[Adapter, ...] = ()
    capabilities: tuple[Capability, ...] = ()
    timestamp: date | None = None

    def system_map(self) -> dict[int, SystemNode]:
        return {s.id: s for s in self.systems}

    def exchange_map(self) -> dict[ExchangeRef, Exchange]:
        return {e.ref: e for e in self.exchanges}

    def find_exchange(self, ref: ExchangeRef) -> Exchange | None:
        return self.exchange_map().get(ref)

    def owners(self) -> set[str]:
        return {s.owner for s in self.systems}

    def cell_keys(self) -> set[tuple[int, int]]:
        """The (from, to) pairs that hold at least one exchange."""
        return {(e.from_id, e.to_id) for e in self.exchanges}


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding. Location is a line number or entity reference."""

    severity: str  # "error" | "warning"
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity} {self.location}: {self.message}"


def _exchange_loc(e: Exchange) -> str:
    return f"exchange {e.label} {e.from_id}->{e.to_id}"


def validate_model(model: SosModel) -> list[Diagnostic]:
    """Check every model invariant and return diagnostics.

    Errors mark invariant violations; warnings flag unversioned exchanges,
    undeclared interoperability levels and capability paths that are not an
    existing chain of non-empty cells.
    """
    out: list[Diagnostic] = []
    err = lambda loc, msg: out.append(Diagnostic("error", loc, msg))
    warn = lambda loc, msg: out.append(Diagnostic("warning", loc, msg))

    if not model.name:
        err("model", "empty model name")
    if not 0 <= model.oim_level <= 4:
        err("model", f"oim level {model.oim_level} out of range 0..4")

    seen_ids: set[int] = set()
    for s in model.systems:
        loc = f"system {s.id}"
        if s.id in seen_ids:
            err(loc, f"duplicate system id {s.id}")
        seen_ids.add(s.id)
        if s.id <= 0:
            err(loc, f"system id {s.id} is not positive")
        if not s.name:
            err(loc, "empty system name")

    ids = {s.id for s in model.systems}
    seen_refs: set[ExchangeRef] = set()
    for e in model.exchanges:
        loc = _exchange_loc(e)
        if e.ref in seen_refs:
            err(loc, f"duplicate exchange {e.label} {e.from_id}->{e.to_id}")
        seen_refs.add(e.ref)
        if e.from_id == e.to_id:
            err(loc, "self-loop exchange (the diagonal holds the system itself)")
        for endpoint in (e.from_id, e.to_id):
            if endpoint not in ids:
                err(loc, f"unknown system id {endpoint}")
        if e.kind not in EXCHANGE_KINDS:
            err(loc, f"unknown exchange kind {e.kind!r}")
        if e.contract_override is not None and e.contract_override not in CONTRACT_CLASSES:
            err(loc, f"unknown contract class {e.contract_override!r}")
        for level in e.levels:
            if level not in INTEROP_LEVELS:
                err(loc, f"unknown interoperability level {level!r}")
        if e.versions is None:
            warn(loc, "unversioned exchange")
        else:
            for side in VERSION_SIDES:
                v = e.versions.side(side)
                if not is_version(v):
                    err(loc, f"malformed version {v!r} on {side} side")
        if not e.levels:
            warn(loc, "undeclared interoperability levels")

    for a in model.adapters:
        loc = f"adapter {a.exchange_label} {a.from_id}->{a.to_id}"
        if a.exchange_ref not in seen_refs:
            err(loc, f"unknown exchange instance {a.exchange_label} {a.from_id}->{a.to_id}")
        if a.hop not in ADAPTER_HOPS:
            err(loc, f"unknown adapter hop {a.hop!r}")
        for v in (a.from_version, a.to_version):
            if not is_version(v):
                err(loc, f"malformed version {v!r}")
        if a.from_version == a.to_version:
            err(loc, f"identity adapter {a.from_version}->{a.to_version} (identity is implicit)")

    cells = model.cell_keys()
    for c in model.capabilities:
        loc = f"capability {c.name!r}"
        if len(c.path) < 2:
            err(loc, "capability path needs at least two systems")
        for member in c.path:
            if member not in ids:
                err(loc, f"unknown system id {member}")
        for a, b in zip(c.path, c.path[1:]):
            if a == b:
                err(loc, f"repeated consecutive system {a} in path")
        for a, b in zip(c.path, c.path[1:]):
            if a in ids and b in ids and a != b and (a, b) not in cells:
                warn(loc, f"capability path broken at {a}->{b}")
                break

    return out


def structurally_equal(a: SosModel, b: SosModel) -> bool:
    """Structural equality: same systems, exchanges, adapters and capabilities
    regardless of declaration order. Model name, oim level and timestamp are
    metadata and do not participate."""
    return (
        sorted(a.systems, key=lambda s: s.id) == sorted(b.systems, key=lambda s: s.id)
        and sorted(a.exchanges, key=lambda e: e.ref) == sorted(b.exchanges, key=lambda e: e.ref)
        and sorted(a.adapters, key=lambda x: (x.exchange_ref, x.hop, x.from_version, x.to_version))
        == sorted(b.adapters, key=lambda x: (x.exchange_ref, x.hop, x.from_version, x.to_version))
        and sorted(a.capabilities, key=lambda c: (c.name, c.path))
        == sorted(b.capabilities, key=lambda c: (c.name, c.path))
    )
