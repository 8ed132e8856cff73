"""Hypothesis strategy for small valid models."""

from __future__ import annotations

from datetime import date

from hypothesis import strategies as st

from sosm.model import (
    HOP_CLIENT,
    HOP_PROVIDER,
    INTEROP_LEVELS,
    Adapter,
    Capability,
    Exchange,
    SosModel,
    SystemNode,
    VersionTriple,
)

versions = st.builds(lambda a, b: f"{a}.{b}", st.integers(0, 9), st.integers(0, 9))


@st.composite
def sos_models(draw, min_systems=1, max_systems=6, max_exchanges=10):
    n = draw(st.integers(min_systems, max_systems))
    ids = sorted(draw(st.lists(st.integers(1, 30), min_size=n, max_size=n, unique=True)))
    owner_pool = ("Alpha Agency", "Beta Office", "Gamma Brigade")
    systems = tuple(
        SystemNode(i, f"system {i}", draw(st.sampled_from(owner_pool)))
        for i in ids
    )

    exchanges: list[Exchange] = []
    if n >= 2:
        counters: dict[int, int] = {}
        for _ in range(draw(st.integers(0, max_exchanges))):
            from_id = draw(st.sampled_from(ids))
            to_id = draw(st.sampled_from([i for i in ids if i != from_id]))
            counters[from_id] = counters.get(from_id, 0) + 1
            label = f"{from_id}.{counters[from_id]}"
            triple = None
            if draw(st.booleans()):
                triple = VersionTriple(draw(versions), draw(versions), draw(versions))
            levels = frozenset(draw(st.lists(st.sampled_from(INTEROP_LEVELS),
                                             max_size=3, unique=True)))
            exchanges.append(Exchange(label, from_id, to_id, f"flow {label}",
                                      versions=triple, levels=levels))

    adapters: list[Adapter] = []
    for e in exchanges:
        if e.versions is None or not draw(st.booleans()):
            continue
        v = e.versions
        if v.provider_version != v.infrastructure_version and draw(st.booleans()):
            adapters.append(Adapter(e.label, e.from_id, e.to_id, HOP_PROVIDER,
                                    v.provider_version, v.infrastructure_version))
        if v.infrastructure_version != v.client_version and draw(st.booleans()):
            adapters.append(Adapter(e.label, e.from_id, e.to_id, HOP_CLIENT,
                                    v.infrastructure_version, v.client_version))

    capabilities: list[Capability] = []
    if n >= 2 and draw(st.booleans()):
        length = draw(st.integers(2, min(4, n)))
        path = tuple(draw(st.permutations(ids))[:length])
        capabilities.append(Capability("capability under test", path))

    timestamp = draw(st.one_of(
        st.none(), st.dates(min_value=date(2000, 1, 1), max_value=date(2030, 12, 31))))
    return SosModel("generated", draw(st.integers(0, 4)), systems, tuple(exchanges),
                    tuple(adapters), tuple(capabilities), timestamp)
