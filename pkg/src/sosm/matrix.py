"""The N2 coupling matrix: systems on the diagonal, exchange sets in cells.

Row = source system, column = target system. Cell (i, j) holds the exchange
instances flowing i -> j in declaration order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping

from .errors import AnalysisError
from .model import Exchange, SosModel


@dataclass(frozen=True)
class CouplingMatrix:
    order: tuple[int, ...]
    cells: Mapping[tuple[int, int], tuple[Exchange, ...]]

    @property
    def size(self) -> int:
        return len(self.order)

    def cell(self, from_id: int, to_id: int) -> tuple[Exchange, ...]:
        return self.cells.get((from_id, to_id), ())

    def instances(self) -> list[Exchange]:
        """Every exchange instance, cell by cell in row-major matrix order."""
        out: list[Exchange] = []
        for i in self.order:
            for j in self.order:
                out.extend(self.cells.get((i, j), ()))
        return out


def build_matrix(model: SosModel) -> CouplingMatrix:
    order = tuple(sorted(s.id for s in model.systems))
    cells: dict[tuple[int, int], tuple[Exchange, ...]] = {}
    for e in model.exchanges:
        key = (e.from_id, e.to_id)
        cells[key] = cells.get(key, ()) + (e,)
    return CouplingMatrix(order, cells)


def permute(matrix: CouplingMatrix, new_order: list[int] | tuple[int, ...]) -> CouplingMatrix:
    new_order = tuple(new_order)
    if sorted(new_order) != sorted(matrix.order):
        raise AnalysisError(f"{list(new_order)} is not a permutation of {list(matrix.order)}")
    return CouplingMatrix(new_order, matrix.cells)


def density(matrix: CouplingMatrix) -> float:
    """Fraction of off-diagonal cells that are non-empty."""
    n = matrix.size
    if n < 2:
        raise AnalysisError("density is undefined for fewer than 2 systems")
    occupied = sum(1 for exchanges in matrix.cells.values() if exchanges)
    return occupied / (n * (n - 1))


def sources_and_sinks(matrix: CouplingMatrix) -> tuple[set[int], set[int]]:
    """Systems with no incoming cells (sources) and no outgoing cells (sinks)."""
    has_in: set[int] = set()
    has_out: set[int] = set()
    for (i, j), exchanges in matrix.cells.items():
        if exchanges:
            has_out.add(i)
            has_in.add(j)
    ids = set(matrix.order)
    return ids - has_in, ids - has_out


def _cell_text(exchanges: tuple[Exchange, ...]) -> str:
    return ",".join(f"[{e.label}]" for e in exchanges)


def render(matrix: CouplingMatrix, format: str = "text") -> str:
    if format == "text":
        return _render_text(matrix)
    if format == "csv":
        return _render_csv(matrix)
    raise ValueError(f"unknown render format {format!r}")


def _render_text(matrix: CouplingMatrix) -> str:
    order = matrix.order
    grid = [
        [str(i) if i == j else _cell_text(matrix.cell(i, j)) for j in order]
        for i in order
    ]
    widths = [max((len(row[k]) for row in grid), default=1) for k in range(len(order))]
    lines = [
        "  ".join(value.ljust(width) for value, width in zip(row, widths)).rstrip()
        for row in grid
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _render_csv(matrix: CouplingMatrix) -> str:
    order = matrix.order
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(str(j) for j in order)
    for i in order:
        writer.writerow(
            str(i) if i == j else ";".join(e.label for e in matrix.cell(i, j))
            for j in order
        )
    return buffer.getvalue()
