"""Model export (DOT, JSON) and JSON import.

JSON export is lossless: ``model_from_json(export_model(m, "json"))`` is
structurally identical to ``m``.
"""

from __future__ import annotations

import json
from datetime import date
from typing import Any

from .errors import ParseError
from .model import (
    INTEROP_LEVELS,
    Adapter,
    Capability,
    Exchange,
    SosModel,
    SystemNode,
    VersionTriple,
)
from .parser import parse_model


def _sorted_levels(levels: frozenset[str]) -> list[str]:
    return [level for level in INTEROP_LEVELS if level in levels]


def model_to_dict(model: SosModel) -> dict[str, Any]:
    return {
        "name": model.name,
        "oim": model.oim_level,
        "timestamp": model.timestamp.isoformat() if model.timestamp else None,
        "systems": [
            {"id": s.id, "name": s.name, "owner": s.owner, "provider": s.provider}
            for s in model.systems
        ],
        "exchanges": [
            {
                "label": e.label,
                "from": e.from_id,
                "to": e.to_id,
                "desc": e.description,
                "kind": e.kind,
                "versions": None if e.versions is None else {
                    "provider": e.versions.provider_version,
                    "infrastructure": e.versions.infrastructure_version,
                    "client": e.versions.client_version,
                },
                "levels": _sorted_levels(e.levels),
                "contract": e.contract_override,
            }
            for e in model.exchanges
        ],
        "adapters": [
            {
                "label": a.exchange_label,
                "from": a.from_id,
                "to": a.to_id,
                "hop": a.hop,
                "from_version": a.from_version,
                "to_version": a.to_version,
            }
            for a in model.adapters
        ],
        "capabilities": [
            {"name": c.name, "path": list(c.path)} for c in model.capabilities
        ],
    }


def _need(data: dict, key: str, where: str) -> Any:
    if key not in data:
        raise ParseError(f"missing key {key!r} in {where}")
    return data[key]


def model_from_dict(data: dict[str, Any]) -> SosModel:
    if not isinstance(data, dict):
        raise ParseError("model JSON root must be an object")
    timestamp_text = data.get("timestamp")
    timestamp = None
    if timestamp_text is not None:
        try:
            timestamp = date.fromisoformat(timestamp_text)
        except (TypeError, ValueError):
            raise ParseError(f"malformed date {timestamp_text!r}") from None
    systems = tuple(
        SystemNode(_need(s, "id", "system"), _need(s, "name", "system"),
                   _need(s, "owner", "system"), s.get("provider"))
        for s in data.get("systems", ())
    )
    exchanges = []
    for e in data.get("exchanges", ()):
        raw = e.get("versions")
        versions = None
        if raw is not None:
            versions = VersionTriple(
                _need(raw, "provider", "versions"),
                _need(raw, "infrastructure", "versions"),
                _need(raw, "client", "versions"),
            )
        exchanges.append(Exchange(
            label=_need(e, "label", "exchange"),
            from_id=_need(e, "from", "exchange"),
            to_id=_need(e, "to", "exchange"),
            description=_need(e, "desc", "exchange"),
            kind=e.get("kind", "service"),
            versions=versions,
            levels=frozenset(e.get("levels", ())),
            contract_override=e.get("contract"),
        ))
    adapters = tuple(
        Adapter(_need(a, "label", "adapter"), _need(a, "from", "adapter"),
                _need(a, "to", "adapter"), _need(a, "hop", "adapter"),
                _need(a, "from_version", "adapter"), _need(a, "to_version", "adapter"))
        for a in data.get("adapters", ())
    )
    capabilities = tuple(
        Capability(_need(c, "name", "capability"), tuple(_need(c, "path", "capability")))
        for c in data.get("capabilities", ())
    )
    return SosModel(
        name=_need(data, "name", "model"),
        oim_level=_need(data, "oim", "model"),
        systems=systems,
        exchanges=tuple(exchanges),
        adapters=adapters,
        capabilities=capabilities,
        timestamp=timestamp,
    )


def model_from_json(text: str) -> SosModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    return model_from_dict(data)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(model: SosModel) -> str:
    lines = [f"digraph {_dot_quote(model.name)} {{", "  rankdir=LR;"]
    for s in model.systems:
        lines.append(f"  {s.id} [label={_dot_quote(f'{s.id}: {s.name}')}];")
    for e in model.exchanges:
        lines.append(f"  {e.from_id} -> {e.to_id} [label={_dot_quote(e.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_model(model: SosModel, format: str) -> str:
    """Render a model as DOT (one node per system, one edge per exchange
    instance) or as round-trippable JSON."""
    if format == "dot":
        return _to_dot(model)
    if format == "json":
        return json.dumps(model_to_dict(model), indent=2) + "\n"
    raise ValueError(f"unknown export format {format!r}")


def load_model_text(text: str) -> SosModel:
    """Load a model from either .sosm or JSON text (sniffed)."""
    if text.lstrip().startswith("{"):
        return model_from_json(text)
    return parse_model(text)
