"""Norm specifications compiled to weak-constraint programs."""

from .compile import (
    KINDS,
    NormativeSystem,
    NormSpec,
    compile_norm,
    compile_system,
    lint,
    norm_levels,
    term_from_text,
    validate_system,
)
from .levels import BASE_LEVEL, assign_levels
from .spec_format import load_norm_spec, parse_norm_spec, system_from_dict

__all__ = [
    "BASE_LEVEL",
    "KINDS",
    "NormSpec",
    "NormativeSystem",
    "assign_levels",
    "compile_norm",
    "compile_system",
    "lint",
    "load_norm_spec",
    "norm_levels",
    "parse_norm_spec",
    "system_from_dict",
    "term_from_text",
    "validate_system",
]
