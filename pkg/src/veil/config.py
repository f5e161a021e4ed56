"""Experiment documents: strict JSON in, :class:`NetworkConfig` out.

Example::

    {
      "version": 1,
      "network": {
        "gammas": [1.0, 1.0, {"alpha": 2.0, "g": 0.5}],
        "bs_a": "balanced",
        "bs_b": {"T": [0.6, 0.0], "R": [0.0, 0.8]},
        "object1": {"T": 1.0, "phi": 4.71238898038469},
        "object2": "absent",
        "delays": [0.0, 0.0, 0.0]
      },
      "sweep": {"param": "T2", "from": 0.0, "to": 1.0, "points": 5}
    }

Complex numbers are ``[re, im]`` pairs and angles are radians. Omitted
network fields take the default (unit gammas, balanced splitters, no objects,
no delays).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from veil.elements import BeamSplitterSpec, ObjectSpec, balanced_bs, effective_gamma, validate_bs
from veil.network import PARAMETERS, NetworkConfig

SCHEMA_VERSION = 1

_number = {"type": "number"}
_complex = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}
_angles = {"type": "array", "items": _number}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "network": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "gammas": {
                    "type": "array",
                    "minItems": 3,
                    "maxItems": 3,
                    "items": {
                        "oneOf": [
                            _number,
                            {
                                "type": "object",
                                "additionalProperties": False,
                                "required": ["alpha", "g"],
                                "properties": {"alpha": _number, "g": _number},
                            },
                        ]
                    },
                },
                "bs_a": {"$ref": "#/$defs/splitter"},
                "bs_b": {"$ref": "#/$defs/splitter"},
                "object1": {"$ref": "#/$defs/object"},
                "object2": {"$ref": "#/$defs/object"},
                "delays": {**_angles, "minItems": 3, "maxItems": 3},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "param": {"enum": list(PARAMETERS)},
                "from": _number,
                "to": _number,
                "points": {"type": "integer"},
            },
        },
        "scan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"T2": {**_angles, "minItems": 1}, "phi2": {**_angles, "minItems": 1}},
        },
        "solve": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dual": {"type": "boolean"}},
        },
    },
    "$defs": {
        "splitter": {
            "oneOf": [
                {"const": "balanced"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["T", "R"],
                    "properties": {"T": _complex, "R": _complex},
                },
            ]
        },
        "object": {
            "oneOf": [
                {"const": "absent"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["T"],
                    "properties": {"T": _number, "phi": _number},
                },
            ]
        },
    },
}


class SchemaError(ValueError):
    """The document is not valid JSON or does not match the schema."""


@dataclass(frozen=True)
class ExperimentDocument:
    network: NetworkConfig
    sweep: dict = field(default_factory=dict)
    scan: dict = field(default_factory=dict)
    solve: dict = field(default_factory=dict)


def validate_document(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for err in errors:
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            lines.append(f"{where}: {err.message}")
        raise SchemaError("\n".join(lines))


def _splitter(value, label: str) -> BeamSplitterSpec:
    if value == "balanced":
        return balanced_bs(label)
    return validate_bs(complex(*value["T"]), complex(*value["R"]), label)


def _object(value) -> ObjectSpec:
    if value == "absent":
        return ObjectSpec(1.0, 0.0)
    return ObjectSpec(value["T"], value.get("phi", 0.0))


def _gamma(value) -> float:
    if isinstance(value, dict):
        return effective_gamma(value["alpha"], value["g"])
    return float(value)


def network_from_dict(net: dict) -> NetworkConfig:
    """Build a config; physics errors (non-unitary splitter, ...) propagate."""
    return NetworkConfig(
        gammas=tuple(_gamma(g) for g in net.get("gammas", (1.0, 1.0, 1.0))),
        bs_a=_splitter(net.get("bs_a", "balanced"), "a"),
        bs_b=_splitter(net.get("bs_b", "balanced"), "b"),
        object1=_object(net.get("object1", "absent")),
        object2=_object(net.get("object2", "absent")),
        delays=tuple(net.get("delays", (0.0, 0.0, 0.0))),
    )


def parse_document(text: str) -> ExperimentDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    validate_document(doc)
    return ExperimentDocument(
        network=network_from_dict(doc.get("network", {})),
        sweep=doc.get("sweep", {}),
        scan=doc.get("scan", {}),
        solve=doc.get("solve", {}),
    )


def load_document(path: str | Path) -> ExperimentDocument:
    return parse_document(Path(path).read_text())


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def config_to_dict(config: NetworkConfig) -> dict:
    """Resolved network block, in document form."""
    return {
        "gammas": list(config.gammas),
        "bs_a": {"T": _pair(config.bs_a.T), "R": _pair(config.bs_a.R)},
        "bs_b": {"T": _pair(config.bs_b.T), "R": _pair(config.bs_b.R)},
        "object1": {"T": config.object1.T, "phi": config.object1.phi},
        "object2": {"T": config.object2.T, "phi": config.object2.phi},
        "delays": list(config.delays),
    }
