"""JSON schemas and loaders for every file the command line reads."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Union

import jsonschema

from .lch import C0Representation, DiscreteLCH
from .spectral import SCHEMA_VERSION, PositiveSpectralMeasure


class MalformedInputError(ValueError):
    """Input that is not valid JSON, fails its schema or is inconsistent."""


_NUMBER_MATRIX = {"type": "array", "minItems": 1,
                  "items": {"type": "array", "minItems": 1, "items": {"type": "number"}}}

CONTEXT_SCHEMA = {
    "type": "object",
    "required": ["dim"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "norm": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["l1", "l2", "linf", "wl1", "wlinf"]},
                "weights": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

MEASURE_SCHEMA = {
    "type": "object",
    "required": ["context", "atoms"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "context": CONTEXT_SCHEMA,
        "atoms": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "matrix"],
                "properties": {"label": {"type": "string"}, "matrix": _NUMBER_MATRIX},
                "additionalProperties": False,
            },
        },
        "lch": {
            "type": "object",
            "required": ["cutoff"],
            "properties": {"cutoff": {"type": "integer", "minimum": 1},
                           "tail": {"type": "boolean"}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

SUITES = ("definition", "norms", "variation", "weak", "monotone", "commutant", "subalgebra",
          "riesz", "regularity", "retrieval", "roundtrip", "continuity")

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "seed": {"type": "integer"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "corpus_size": {"type": "integer", "minimum": 1},
        "dims": {"type": "array", "minItems": 1,
                 "items": {"type": "integer", "minimum": 1, "maximum": 8}},
        "atom_counts": {"type": "array", "minItems": 1,
                        "items": {"type": "integer", "minimum": 1, "maximum": 16}},
        "norm_kinds": {"type": "array", "minItems": 1,
                       "items": {"enum": ["l1", "l2", "linf", "wl1", "wlinf"]}},
        "styles": {"type": "array", "minItems": 1, "items": {"enum": ["band", "rank1"]}},
        "max_points": {"type": "integer", "minimum": 1, "maximum": 10},
        "suites": {"type": "array", "items": {"enum": list(SUITES)}},
        "instances": {"type": "array", "items": MEASURE_SCHEMA},
    },
    "additionalProperties": False,
}

_CHECK_SCHEMA = {
    "type": "object",
    "required": ["suite", "instance_id", "check", "theorem_anchor", "pass", "lhs", "rhs",
                 "tolerance", "runtime_ms"],
    "properties": {
        "suite": {"type": "string"},
        "instance_id": {"type": "string"},
        "check": {"type": "string"},
        "theorem_anchor": {"type": "string"},
        "pass": {"type": "boolean"},
        "tolerance": {"type": ["number", "null"]},
        "runtime_ms": {"type": "number", "minimum": 0},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "config", "entries", "summary"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "config": {"type": "object"},
        "entries": {"type": "array", "items": _CHECK_SCHEMA},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed"],
            "properties": {"total": {"type": "integer"}, "passed": {"type": "integer"},
                           "failed": {"type": "integer"}},
        },
    },
}


def check_schema(data: Any, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise MalformedInputError(f"{what}: {exc.message} at {where}") from None


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from None


def dump_json(data: Any) -> str:
    """Canonical UTF-8 JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], data: Any) -> None:
    Path(path).write_text(dump_json(data), encoding="utf-8")


def parse_measure(data: Any) -> PositiveSpectralMeasure:
    check_schema(data, MEASURE_SCHEMA, "spectral measure")
    try:
        return PositiveSpectralMeasure.from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInputError(f"spectral measure: {exc}") from None


def parse_lch_representation(data: Any) -> C0Representation:
    check_schema(data, MEASURE_SCHEMA, "representation")
    if "lch" not in data:
        raise MalformedInputError("representation: missing 'lch' block")
    try:
        lch = DiscreteLCH.from_json(data["lch"])
        labels = [a["label"] for a in data["atoms"]]
        if sorted(labels) != sorted(str(i) for i in range(lch.cutoff)):
            raise ValueError(f"atom labels {labels} do not match the points of {lch}")
        return C0Representation.from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInputError(f"representation: {exc}") from None


def shipped(name: str) -> Path:
    """Path of a JSON file shipped in the package's data directory."""
    return Path(str(resources.files("posspec") / "data" / name))
