"""Core model, exhaustive checker and replay for extended categories."""

from __future__ import annotations

from .checker import MODES, check_all, check_c1, check_c2, check_c3, holds, is_em_shaped
from .engine import Engine
from .model import (
    C1Witness,
    C2Table,
    C2Witness,
    C3Witness,
    CheckReport,
    Composer,
    Counterexample,
    ElementSetF,
    ExtendedCategory,
    FailureKind,
    Morphism,
    ObjectF,
    canonical_id,
    compose,
)
from .replay import counterexample_holds, replay

__all__ = [
    "C1Witness", "C2Table", "C2Witness", "C3Witness", "CheckReport", "Composer",
    "Counterexample", "ElementSetF", "Engine", "ExtendedCategory", "FailureKind",
    "MODES", "Morphism", "ObjectF", "canonical_id", "check_all", "check_c1", "check_c2",
    "check_c3", "compose", "counterexample_holds", "holds", "is_em_shaped", "replay",
]
