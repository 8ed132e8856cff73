"""Block-diagonal clustering of the coupling matrix.

The objective is the classic size-penalized trade-off: an exchange instance
inside a cluster costs |cluster|**pow, an instance crossing clusters costs
n**pow (n = total systems). Low cost therefore rewards strong internal
cohesion and loose external coupling. Exhaustive search enumerates all set
partitions (Bell numbers, so n <= 10); greedy merging scales beyond that.

Tie-break between equal-cost partitions: more clusters first (the finest
partition maximizes managerial independence), then the lexicographically
smallest canonical cluster list. All results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import AnalysisError
from .matrix import CouplingMatrix

EXHAUSTIVE_LIMIT = 10

Partition = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Clustering:
    clusters: Partition
    order: tuple[int, ...]
    cost: float
    method: str


def canonical_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    """Members ascending inside each cluster, clusters by smallest member."""
    return tuple(sorted((tuple(sorted(block)) for block in blocks), key=lambda b: b[0]))


def _induced_order(clusters: Partition) -> tuple[int, ...]:
    return tuple(member for block in clusters for member in block)


def _instance_pairs(matrix: CouplingMatrix) -> list[tuple[int, int]]:
    pairs: list[tuple[int, int]] = []
    for (i, j), exchanges in matrix.cells.items():
        pairs.extend((i, j) for _ in exchanges)
    return pairs


def clustering_cost(matrix: CouplingMatrix, partition: Iterable[Iterable[int]],
                    pow: float = 2.0) -> float:
    """Cost of a partition of the matrix's systems under exponent pow."""
    if pow < 1:
        raise AnalysisError(f"pow must be >= 1, got {pow}")
    blocks = [tuple(block) for block in partition]
    members = [m for block in blocks for m in block]
    if len(set(members)) != len(members) or set(members) != set(matrix.order) or any(
        not block for block in blocks
    ):
        raise AnalysisError("not a partition of the matrix's systems")
    cluster_of = {member: idx for idx, block in enumerate(blocks) for member in block}
    n = matrix.size
    cost = 0.0
    for i, j in _instance_pairs(matrix):
        if cluster_of[i] == cluster_of[j]:
            cost += len(blocks[cluster_of[i]]) ** pow
        else:
            cost += n ** pow
    return cost


def iter_partitions(items: Sequence[int]) -> Iterator[Partition]:
    """Every set partition of items, via restricted-growth strings."""
    n = len(items)
    if n == 0:
        yield ()
        return
    codes = [0] * n
    highest = [0] * n  # highest[i] = max(codes[0..i])
    while True:
        blocks: list[list[int]] = [[] for _ in range(max(codes) + 1)]
        for item, code in zip(items, codes):
            blocks[code].append(item)
        yield canonical_partition(blocks)
        i = n - 1
        while i > 0:
            if codes[i] <= highest[i - 1]:
                codes[i] += 1
                top = max(highest[i - 1], codes[i])
                for j in range(i, n):
                    highest[j] = top
                    if j > i:
                        codes[j] = 0
                break
            i -= 1
        else:
            return


def _selection_key(matrix: CouplingMatrix, partition: Partition, pow: float):
    return (clustering_cost(matrix, partition, pow), -len(partition), partition)


def cluster_exhaustive(matrix: CouplingMatrix, pow: float = 2.0) -> Clustering:
    """Globally optimal clustering by full set-partition enumeration."""
    n = matrix.size
    if n > EXHAUSTIVE_LIMIT:
        raise AnalysisError(
            f"{n} systems exceed the exhaustive enumeration limit of "
            f"{EXHAUSTIVE_LIMIT}; use cluster_greedy")
    best = min(iter_partitions(tuple(sorted(matrix.order))),
               key=lambda p: _selection_key(matrix, p, pow))
    return Clustering(best, _induced_order(best),
                      clustering_cost(matrix, best, pow), "exhaustive")


def cluster_greedy(matrix: CouplingMatrix, pow: float = 2.0) -> Clustering:
    """Agglomerative clustering: start from singletons and repeatedly apply
    the merge with the largest cost decrease, until none decreases cost.
    Ties pick the pair with the smallest (min of first, min of second)."""
    blocks: list[tuple[int, ...]] = [(i,) for i in sorted(matrix.order)]
    cost = clustering_cost(matrix, blocks, pow)
    while len(blocks) > 1:
        best: tuple[float, int, int, int, int] | None = None
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                merged = blocks[:a] + blocks[a + 1:b] + blocks[b + 1:]
                merged.append(tuple(sorted(blocks[a] + blocks[b])))
                decrease = cost - clustering_cost(matrix, merged, pow)
                candidate = (-decrease, blocks[a][0], blocks[b][0], a, b)
                if decrease > 0 and (best is None or candidate < best):
                    best = candidate
        if best is None:
            break
        _, _, _, a, b = best
        merged_block = tuple(sorted(blocks[a] + blocks[b]))
        blocks = blocks[:a] + blocks[a + 1:b] + blocks[b + 1:]
        blocks.append(merged_block)
        blocks.sort(key=lambda block: block[0])
        cost = clustering_cost(matrix, blocks, pow)
    partition = canonical_partition(blocks)
    return Clustering(partition, _induced_order(partition), cost, "greedy")


def cluster_report(clustering: Clustering, matrix: CouplingMatrix) -> str:
    """Per-cluster summary plus total cost, e.g.
    ``cluster 1: {1, 2, 4} (internal instances: 7, external: 8)``."""
    pairs = _instance_pairs(matrix)
    lines = []
    for idx, block in enumerate(clustering.clusters, start=1):
        members = set(block)
        internal = sum(1 for i, j in pairs if i in members and j in members)
        external = sum(1 for i, j in pairs if (i in members) != (j in members))
        body = ", ".join(str(m) for m in block)
        lines.append(f"cluster {idx}: {{{body}}} "
                     f"(internal instances: {internal}, external: {external})")
    lines.append(f"total cost: {clustering.cost:g} (method: {clustering.method})")
    return "\n".join(lines) + "\n"
