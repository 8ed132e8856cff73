#!/usr/bin/env python3
"""Run the whole analysis battery on the bundled firefighting scenario.

Usage: python scripts/efs_report.py [path/to/model.sosm]
"""

from __future__ import annotations

import sys
from pathlib import Path

from sosm import (
    build_matrix,
    check_capabilities,
    check_compatibility,
    cluster_exhaustive,
    connectivity_index,
    contract_map,
    density,
    emergent_paths,
    evolution_impact,
    format_chain,
    integrator_report,
    load_efs,
    parse_model,
    render,
    sources_and_sinks,
    strongly_connected_components,
)
from sosm.clustering import cluster_report
from sosm.compatibility import VersionChange


def section(title):
    print(f"\n== {title} ==")


def main() -> int:
    if len(sys.argv) > 1:
        model = parse_model(Path(sys.argv[1]).read_text(encoding="utf-8"))
    else:
        model = load_efs()
    matrix = build_matrix(model)

    section("coupling matrix")
    print(render(matrix, "text"), end="")

    section("structure")
    sources, sinks = sources_and_sinks(matrix)
    print(f"density: {density(matrix):.4f}")
    print(f"sources: {sorted(sources)}  sinks: {sorted(sinks)}")
    for idx, component in enumerate(strongly_connected_components(matrix), start=1):
        print(f"loop {idx}: {sorted(component)}")

    section("connectivity")
    for system_id in matrix.order:
        ci = connectivity_index(matrix, system_id)
        print(f"system {system_id}: cells {ci.in_cells}/{ci.out_cells} "
              f"instances {ci.in_instances}/{ci.out_instances} "
              f"total {ci.total_instances}")

    section("emergent chains 8 -> 9 (max 3 hops)")
    for chain in emergent_paths(matrix, 8, 9, 3):
        print(format_chain(chain))

    section("capabilities")
    for status in check_capabilities(model, matrix):
        state = "intact" if status.intact else f"broken at {status.broken_at}"
        print(f"{status.capability.name}: {state}")

    section("clustering (pow=2)")
    print(cluster_report(cluster_exhaustive(matrix, 2), matrix), end="")

    section("compatibility")
    ok, warn, bad = check_compatibility(model).counts()
    print(f"{ok} compatible, {warn} unversioned, {bad} incompatible")

    section("ownership")
    cmap = contract_map(model, matrix)
    print(f"{cmap.internal_count} internal cells, {cmap.contract_count} contract cells")
    for entry in integrator_report(model, matrix)[:5]:
        e = entry.exchange
        print(f"[{e.label}] {e.from_id}->{e.to_id}: score {entry.score} "
              f"-> {entry.suggested_owner}")

    section("what if the weather feed jumps to infrastructure 2.0?")
    versioned = [e for e in model.exchanges if e.label == "8.2" and e.versions]
    impact = evolution_impact(model, [
        VersionChange(e.ref, "infrastructure", "2.0") for e in versioned])
    print(f"newly incompatible: {len(impact.newly_incompatible)}")
    print(f"affected systems: {sorted(impact.affected_systems)}")
    for broken in impact.broken_capabilities:
        print(f"capability lost: {broken.name} at {broken.hop}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
