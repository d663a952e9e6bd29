"""Machine-checked reproduction of the printed results as verdict reports."""

from __future__ import annotations

from .checks import (
    verify_complex_families_G4,
    verify_family_hitchin,
    verify_family_semi_para_kahler,
    verify_semi_kahler_system,
)
from .families import Family, FamilyError, Instance, SamplingError, sample_family, sample_sequence
from .fixtures import Fixture, FixtureError, fixture, fixture_keys
from .report import Check, Status, Verdict, render_markdown, report_document
from .theorems import THEOREMS, Settings, known_discrepancies, reproduce_theorem

__all__ = [
    "THEOREMS",
    "Check",
    "Family",
    "FamilyError",
    "Fixture",
    "FixtureError",
    "Instance",
    "SamplingError",
    "Settings",
    "Status",
    "Verdict",
    "fixture",
    "fixture_keys",
    "known_discrepancies",
    "render_markdown",
    "report_document",
    "reproduce_theorem",
    "sample_family",
    "sample_sequence",
    "verify_complex_families_G4",
    "verify_family_hitchin",
    "verify_family_semi_para_kahler",
    "verify_semi_kahler_system",
]
