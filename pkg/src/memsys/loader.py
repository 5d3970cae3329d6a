"""JSON system definition files."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .system import MemorySystem, MemorySystemError

_names = {"type": "array", "items": {"type": "string", "minLength": 1}}
_agent = {"type": ["string", "integer"]}

SYSTEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "memory system",
    "type": "object",
    "additionalProperties": False,
    "required": ["states", "signals", "signal_of", "agents", "neighbourhoods",
                 "transitions", "initial"],
    "properties": {
        "description": {"type": "string"},
        "states": _names,
        "signals": _names,
        "signal_of": {"type": "object", "additionalProperties": {"type": "string"}},
        "agents": {
            "oneOf": [
                {"type": "integer", "minimum": 1},
                {"type": "array", "items": _agent, "minItems": 1},
            ]
        },
        "neighbourhoods": {
            "oneOf": [
                {"type": "object", "additionalProperties": {"type": "array", "items": _agent}},
                {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["name", "members"],
                        "properties": {
                            "name": {"type": "string"},
                            "members": {"type": "array", "items": _agent},
                        },
                    },
                },
            ]
        },
        "transitions": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "neighbourhood", "guard", "rule"],
                "properties": {
                    "id": {"type": "string"},
                    "neighbourhood": {"type": "string"},
                    "guard": {"type": "array", "items": {"type": "integer"}},
                    "rule": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "string"},
                                  "minItems": 3, "maxItems": 3},
                    },
                },
            },
        },
        "initial": {
            "oneOf": [
                {"type": "object", "additionalProperties": {"type": "string"}},
                {"type": "array", "items": {"type": "string"}},
            ]
        },
    },
}


class SchemaError(MemorySystemError):
    pass


def system_from_dict(doc: dict) -> MemorySystem:
    try:
        jsonschema.validate(doc, SYSTEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None
    nbs = doc["neighbourhoods"]
    if isinstance(nbs, list):
        nbs = [(d["name"], d["members"]) for d in nbs]
    return MemorySystem.build(
        states=doc["states"],
        signals=doc["signals"],
        signal_of=doc["signal_of"],
        agents=doc["agents"],
        neighbourhoods=nbs,
        transitions=doc["transitions"],
        initial=doc["initial"],
    )


def system_to_dict(sys: MemorySystem) -> dict:
    return {
        "states": list(sys.states),
        "signals": list(sys.signals),
        "signal_of": dict(sys.signal_of),
        "agents": list(sys.agent_names),
        "neighbourhoods": {
            nb.name: [sys.agent_names[i] for i in sorted(nb.members)] for nb in sys.neighbourhoods
        },
        "transitions": [
            {"id": e.id, "neighbourhood": e.neighbourhood, "guard": list(e.guard),
             "rule": [list(r) for r in e.rule]}
            for e in sys.transitions
        ],
        "initial": list(sys.initial),
    }


def loads_system(text: str) -> MemorySystem:
    """Parse a system definition; JSON syntax errors propagate as ``json.JSONDecodeError``."""
    return system_from_dict(json.loads(text))


def load_system(path) -> MemorySystem:
    return loads_system(Path(path).read_text(encoding="utf-8"))
