"""YAML norm-specification documents.

A document is a mapping validated against ``schema.json``::

    name: plato
    actions: [meet, help]
    norms:
      - {id: meet, kind: regular, action: meet}
      - {id: help, kind: conditional, action: help, condition: [Happens(emergency)]}
    preferences: [[help, meet]]      # first is preferred to second
    incompatible: [[help, meet]]
    dependencies: [{do: stop, if: give_first_aid}]
    rules: |
      :- theft, Do(carry_license), Do(carry_registration).
    facts: |
      Happens(emergency).

Norm fields: ``id``, ``kind``, ``modality`` (``O`` or ``F``, default ``O``),
either ``action`` or a ``targets`` list, ``condition`` (body elements such as
``Happens(e)`` or ``not rain``), ``exception`` (one literal), ``violates``
(the id a contrary-to-duty norm repairs) and ``weight`` (default 1).
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import yaml

from ..asp.parser import parse, parse_body, parse_literal
from ..asp.syntax import Program
from ..errors import AspSyntaxError, MalformedSpec, SchemaError
from .compile import NormativeSystem, NormSpec, term_from_text


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files(__package__).joinpath("schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _location(path) -> str:
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _term(text: str, where: str):
    try:
        return term_from_text(text)
    except (AspSyntaxError, MalformedSpec) as exc:
        raise SchemaError(f"invalid action term {text!r}: {exc}", where) from None


def _program(text: str, where: str) -> Program:
    try:
        return parse(text, where)
    except AspSyntaxError as exc:
        raise SchemaError(f"invalid program text: {exc}", where) from None


def _norm(doc: dict, where: str) -> NormSpec:
    raw_targets = doc["targets"] if "targets" in doc else [doc["action"]]
    targets = tuple(_term(t, f"{where}.targets[{i}]") for i, t in enumerate(raw_targets))
    condition: tuple = ()
    for i, text in enumerate(doc.get("condition", ())):
        try:
            condition += parse_body(text)
        except AspSyntaxError as exc:
            raise SchemaError(f"invalid condition {text!r}: {exc}", f"{where}.condition[{i}]") from None
    exception = None
    if "exception" in doc:
        try:
            exception = parse_literal(doc["exception"])
        except AspSyntaxError as exc:
            raise SchemaError(f"invalid exception {doc['exception']!r}: {exc}", f"{where}.exception") from None
    return NormSpec(
        id=doc["id"],
        kind=doc["kind"],
        targets=targets,
        modality=doc.get("modality", "O"),
        condition=condition,
        exception=exception,
        violates=doc.get("violates"),
        weight=doc.get("weight", 1),
    )


def system_from_dict(doc) -> NormativeSystem:
    """Validate a decoded document and build the :class:`NormativeSystem`."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _location(err.absolute_path))
    norms = tuple(_norm(n, f"$.norms[{i}]") for i, n in enumerate(doc.get("norms", ())))
    return NormativeSystem(
        name=doc.get("name", "system"),
        actions=tuple(_term(a, f"$.actions[{i}]") for i, a in enumerate(doc["actions"])),
        norms=norms,
        preferences=tuple(tuple(p) for p in doc.get("preferences", ())),
        equivalent=tuple(tuple(g) for g in doc.get("equivalent", ())),
        incompatible=tuple(
            tuple(_term(a, f"$.incompatible[{i}][{j}]") for j, a in enumerate(pair))
            for i, pair in enumerate(doc.get("incompatible", ()))
        ),
        dependencies=tuple(
            (_term(d["do"], f"$.dependencies[{i}].do"), _term(d["if"], f"$.dependencies[{i}].if"))
            for i, d in enumerate(doc.get("dependencies", ()))
        ),
        rules=_program(doc.get("rules", ""), "$.rules"),
        facts=_program(doc.get("facts", ""), "$.facts"),
    )


def parse_norm_spec(document: str) -> NormativeSystem:
    """Parse a YAML norm specification; every failure is a :class:`SchemaError`."""
    try:
        doc = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark is not None else "$"
        problem = getattr(exc, "problem", None) or str(exc)
        raise SchemaError(f"not a YAML document: {problem}", where) from None
    except (ValueError, TypeError, RecursionError) as exc:
        raise SchemaError(f"not a YAML document: {exc}") from None
    return system_from_dict(doc)


def load_norm_spec(path) -> NormativeSystem:
    return parse_norm_spec(Path(path).read_text(encoding="utf-8"))
