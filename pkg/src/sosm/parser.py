"""Reader for the line-oriented .sosm model format.

One directive per line; `#` starts a comment; double-quoted strings may
contain spaces. Directives:

    sos "<name>" oim=<0..4> [t=<ISO-8601 date>]
    system <id> "<name>" owner="<text>" [provider="<text>"]
    exchange <label> from=<id> to=<id> desc="<text>" [kind=service|product] [versions=<p>/<i>/<c>] [levels=<comma list>] [contract=internal|contract]
    adapter <label> from=<id> to=<id> hop=provider|client map=<verA>-><verB>
    capability "<name>" path=<id>-><id>[-><id>...]

Exactly one `sos` line is required. Declaration order is free otherwise;
forward references are resolved after the whole file is read. Unspecified
kind defaults to service.
"""

from __future__ import annotations

import shlex
from datetime import date

from .errors import ParseError
from .model import (
    CONTRACT_CLASSES,
    EXCHANGE_KINDS,
    HOP_CLIENT,
    HOP_PROVIDER,
    INTEROP_LEVELS,
    Adapter,
    Capability,
    Exchange,
    ExchangeRef,
    SosModel,
    SystemNode,
    VersionTriple,
    is_version,
)

_HOP_NAMES = {"provider": HOP_PROVIDER, "client": HOP_CLIENT}


def _split_line(raw: str, lineno: int) -> list[str]:
    try:
        return shlex.split(raw, comments=True, posix=True)
    except ValueError as exc:
        raise ParseError(f"syntax error: {exc}", lineno) from None


def _fields(tokens: list[str], lineno: int, directive: str, n_positional: int,
            required: tuple[str, ...], optional: tuple[str, ...] = ()) -> tuple[list[str], dict[str, str]]:
    """Split a directive's tokens into positional values and key=value pairs."""
    positionals = tokens[1:1 + n_positional]
    if len(positionals) < n_positional:
        raise ParseError(f"syntax error: {directive} needs {n_positional} positional value(s)", lineno)
    kv: dict[str, str] = {}
    for token in tokens[1 + n_positional:]:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ParseError(f"syntax error: expected key=value, got {token!r}", lineno)
        if key not in required and key not in optional:
            raise ParseError(f"syntax error: unknown key {key!r} for {directive}", lineno)
        if key in kv:
            raise ParseError(f"syntax error: duplicate key {key!r}", lineno)
        kv[key] = value
    for key in required:
        if key not in kv:
            raise ParseError(f"syntax error: {directive} is missing {key}=", lineno)
    return positionals, kv


def _int(text: str, what: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"malformed {what} {text!r}", lineno) from None


def _system_id(text: str, lineno: int) -> int:
    value = _int(text, "system id", lineno)
    if value <= 0:
        raise ParseError(f"system id {value} is not positive", lineno)
    return value


def _version(text: str, lineno: int) -> str:
    if not is_version(text):
        raise ParseError(f"malformed version {text!r} (expected MAJOR.MINOR)", lineno)
    return text


def parse_model(text: str) -> SosModel:
    """Parse .sosm file contents into a model.

    Raises ParseError (with a 1-based line number) on syntax errors,
    duplicate system ids, duplicate (label, from, to) triples, unknown
    system ids, malformed versions and out-of-range oim levels.
    """
    header: tuple[str, int, date | None] | None = None
    systems: list[SystemNode] = []
    system_lines: dict[int, int] = {}
    exchanges: list[Exchange] = []
    exchange_lines: dict[ExchangeRef, int] = {}
    adapters: list[tuple[Adapter, int]] = []
    capabilities: list[tuple[Capability, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _split_line(raw, lineno)
        if not tokens:
            continue
        directive = tokens[0]

        if directive == "sos":
            if header is not None:
                raise ParseError("duplicate sos header", lineno)
            (name,), kv = _fields(tokens, lineno, "sos", 1, ("oim",), ("t",))
            oim = _int(kv["oim"], "oim level", lineno)
            if not 0 <= oim <= 4:
                raise ParseError(f"oim level {oim} out of range 0..4", lineno)
            timestamp = None
            if "t" in kv:
                try:
                    timestamp = date.fromisoformat(kv["t"])
                except ValueError:
                    raise ParseError(f"malformed date {kv['t']!r}", lineno) from None
            header = (name, oim, timestamp)

        elif directive == "system":
            (id_text, name), kv = _fields(tokens, lineno, "system", 2, ("owner",), ("provider",))
            system_id = _system_id(id_text, lineno)
            if system_id in system_lines:
                raise ParseError(f"duplicate system id {system_id}", lineno)
            if not name:
                raise ParseError("empty system name", lineno)
            system_lines[system_id] = lineno
            systems.append(SystemNode(system_id, name, kv["owner"], kv.get("provider")))

        elif directive == "exchange":
            (label,), kv = _fields(tokens, lineno, "exchange", 1,
                                   ("from", "to", "desc"),
                                   ("kind", "versions", "levels", "contract"))
            from_id = _system_id(kv["from"], lineno)
            to_id = _system_id(kv["to"], lineno)
            if from_id == to_id:
                raise ParseError(f"self-loop exchange on system {from_id}", lineno)
            kind = kv.get("kind", "service")
            if kind not in EXCHANGE_KINDS:
                raise ParseError(f"unknown kind {kind!r}", lineno)
            versions = None
            if "versions" in kv:
                parts = kv["versions"].split("/")
                if len(parts) != 3:
                    raise ParseError(f"malformed version triple {kv['versions']!r}", lineno)
                versions = VersionTriple(*(_version(p, lineno) for p in parts))
            levels: frozenset[str] = frozenset()
            if "levels" in kv:
                names = [part.strip() for part in kv["levels"].split(",") if part.strip()]
                for level in names:
                    if level not in INTEROP_LEVELS:
                        raise ParseError(f"unknown interoperability level {level!r}", lineno)
                levels = frozenset(names)
            contract = kv.get("contract")
            if contract is not None and contract not in CONTRACT_CLASSES:
                raise ParseError(f"unknown contract class {contract!r}", lineno)
            exchange = Exchange(label, from_id, to_id, kv["desc"], kind, versions, levels, contract)
            if exchange.ref in exchange_lines:
                raise ParseError(f"duplicate exchange {label} {from_id}->{to_id}", lineno)
            exchange_lines[exchange.ref] = lineno
            exchanges.append(exchange)

        elif directive == "adapter":
            (label,), kv = _fields(tokens, lineno, "adapter", 1, ("from", "to", "hop", "map"))
            from_id = _system_id(kv["from"], lineno)
            to_id = _system_id(kv["to"], lineno)
            if kv["hop"] not in _HOP_NAMES:
                raise ParseError(f"unknown hop {kv['hop']!r} (expected provider or client)", lineno)
            left, sep, right = kv["map"].partition("->")
            if not sep:
                raise ParseError(f"malformed map {kv['map']!r} (expected verA->verB)", lineno)
            adapter = Adapter(label, from_id, to_id, _HOP_NAMES[kv["hop"]],
                              _version(left, lineno), _version(right, lineno))
            adapters.append((adapter, lineno))

        elif directive == "capability":
            (name,), kv = _fields(tokens, lineno, "capability", 1, ("path",))
            parts = kv["path"].split("->")
            if len(parts) < 2:
                raise ParseError("capability path needs at least two systems", lineno)
            path = tuple(_system_id(p, lineno) for p in parts)
            for a, b in zip(path, path[1:]):
                if a == b:
                    raise ParseError(f"repeated consecutive system {a} in path", lineno)
            capabilities.append((Capability(name, path), lineno))

        else:
            raise ParseError(f"syntax error: unknown directive {directive!r}", lineno)

    if header is None:
        raise ParseError("missing sos header line")

    # Resolve cross-references now that the whole file is known.
    ids = set(system_lines)
    for exchange in exchanges:
        lineno = exchange_lines[exchange.ref]
        for endpoint in (exchange.from_id, exchange.to_id):
            if endpoint not in ids:
                raise ParseError(f"unknown system id {endpoint}", lineno)
    refs = set(exchange_lines)
    for adapter, lineno in adapters:
        if adapter.exchange_ref not in refs:
            raise ParseError(
                f"unknown exchange instance {adapter.exchange_label} "
                f"{adapter.from_id}->{adapter.to_id}", lineno)
    for capability, lineno in capabilities:
        for member in capability.path:
            if member not in ids:
                raise ParseError(f"unknown system id {member}", lineno)

    name, oim, timestamp = header
    return SosModel(
        name=name,
        oim_level=oim,
        systems=tuple(systems),
        exchanges=tuple(exchanges),
        adapters=tuple(a for a, _ in adapters),
        capabilities=tuple(c for c, _ in capabilities),
        timestamp=timestamp,
    )
