"""Finite models and an exhaustive checker for extended categories."""

from __future__ import annotations

from .kernel import (
    CheckReport,
    ElementSetF,
    ExtendedCategory,
    Morphism,
    ObjectF,
    check_all,
    check_c1,
    check_c2,
    check_c3,
    compose,
    is_em_shaped,
    replay,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport", "ElementSetF", "ExtendedCategory", "Morphism", "ObjectF", "check_all",
    "check_c1", "check_c2", "check_c3", "compose", "is_em_shaped", "replay",
]
