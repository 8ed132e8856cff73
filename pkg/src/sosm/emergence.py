"""Emergent-service analysis over the coupling matrix.

An emergent service is carried by a chain of non-empty cells from a source
system to a target system. Chains are simple paths: a system appears at most
once, which keeps enumeration finite on cyclic matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AnalysisError
from .matrix import CouplingMatrix
from .model import Capability, Exchange, SosModel


@dataclass(frozen=True)
class DependencyChain:
    """A simple path of systems plus, per hop, the exchanges of that cell."""

    systems: tuple[int, ...]
    hops: tuple[tuple[Exchange, ...], ...]


@dataclass(frozen=True)
class ConnectivityIndex:
    system_id: int
    in_cells: int
    out_cells: int
    in_instances: int
    out_instances: int

    @property
    def total_instances(self) -> int:
        return self.in_instances + self.out_instances


@dataclass(frozen=True)
class CapabilityStatus:
    capability: Capability
    intact: bool
    broken_at: tuple[int, int] | None = None


def _adjacency(matrix: CouplingMatrix) -> dict[int, list[int]]:
    adjacency: dict[int, list[int]] = {i: [] for i in matrix.order}
    for (i, j), exchanges in matrix.cells.items():
        if exchanges:
            adjacency[i].append(j)
    for neighbors in adjacency.values():
        neighbors.sort()
    return adjacency


def format_chain(chain: DependencyChain) -> str:
    """One-line rendering, e.g. ``8 -[8.2]-> 1 -[1.1|1.3]-> 2 -[2.4]-> 9``."""
    parts = [str(chain.systems[0])]
    for system, cell in zip(chain.systems[1:], chain.hops):
        labels = "|".join(e.label for e in cell)
        parts.append(f"-[{labels}]-> {system}")
    return " ".join(parts)


def emergent_paths(matrix: CouplingMatrix, source: int, target: int,
                   max_hops: int) -> list[DependencyChain]:
    """All simple paths source -> target using at most max_hops cells,
    in lexicographic order of their id sequences."""
    if source == target:
        raise AnalysisError("invalid query: source and target are the same system")
    for system_id in (source, target):
        if system_id not in matrix.order:
            raise AnalysisError(f"unknown system id {system_id}")
    if max_hops < 1:
        raise AnalysisError(f"max_hops must be at least 1, got {max_hops}")

    adjacency = _adjacency(matrix)
    found: list[tuple[int, ...]] = []
    path = [source]
    visited = {source}

    def walk(node: int) -> None:
        if len(path) - 1 >= max_hops:
            return
        for neighbor in adjacency[node]:
            if neighbor in visited:
                continue
            path.append(neighbor)
            if neighbor == target:
                found.append(tuple(path))
            else:
                visited.add(neighbor)
                walk(neighbor)
                visited.remove(neighbor)
            path.pop()

    walk(source)
    found.sort()
    return [
        DependencyChain(seq, tuple(matrix.cell(a, b) for a, b in zip(seq, seq[1:])))
        for seq in found
    ]


def strongly_connected_components(matrix: CouplingMatrix) -> list[frozenset[int]]:
    """Interaction loops: partition of the systems into strongly connected
    components (Tarjan), listed by smallest member id."""
    adjacency = _adjacency(matrix)
    index_of: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    components: list[frozenset[int]] = []

    def connect(node: int) -> None:
        nonlocal counter
        index_of[node] = lowlink[node] = counter
        counter += 1
        stack.append(node)
        on_stack.add(node)
        for neighbor in adjacency[node]:
            if neighbor not in index_of:
                connect(neighbor)
                lowlink[node] = min(lowlink[node], lowlink[neighbor])
            elif neighbor in on_stack:
                lowlink[node] = min(lowlink[node], index_of[neighbor])
        if lowlink[node] == index_of[node]:
            component = set()
            while True:
                member = stack.pop()
                on_stack.discard(member)
                component.add(member)
                if member == node:
                    break
            components.append(frozenset(component))

    for node in matrix.order:
        if node not in index_of:
            connect(node)
    components.sort(key=min)
    return components


def connectivity_index(matrix: CouplingMatrix, system_id: int) -> ConnectivityIndex:
    """Incident non-empty cells and exchange instances, both directions."""
    if system_id not in matrix.order:
        raise AnalysisError(f"unknown system id {system_id}")
    in_cells = out_cells = in_instances = out_instances = 0
    for (i, j), exchanges in matrix.cells.items():
        if not exchanges:
            continue
        if i == system_id:
            out_cells += 1
            out_instances += len(exchanges)
        if j == system_id:
            in_cells += 1
            in_instances += len(exchanges)
    return ConnectivityIndex(system_id, in_cells, out_cells, in_instances, out_instances)


def check_capabilities(model: SosModel, matrix: CouplingMatrix) -> list[CapabilityStatus]:
    """A capability is intact iff every consecutive pair of its path has a
    non-empty cell; otherwise the first missing hop is reported."""
    statuses = []
    for capability in model.capabilities:
        broken_at = None
        for a, b in zip(capability.path, capability.path[1:]):
            if not matrix.cell(a, b):
                broken_at = (a, b)
                break
        statuses.append(CapabilityStatus(capability, broken_at is None, broken_at))
    return statuses
