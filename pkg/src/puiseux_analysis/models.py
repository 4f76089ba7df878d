"""
================================================================================
CONTEXT BLOCK
================================================================================
File: models.py
Module: puiseux_analysis.models
Purpose: Report models and run configuration shared by the front ends

Description:
    Dataclasses describing the results handed to the command-line front
    end, the batch runner and the tool server: stability verdicts with
    their witnesses, fundamental-lemma consistency reports, and the
    RunConfig that carries depth, precision and output choices.

Verdict Ladder:
    MORSE_STABLE implies ALMOST_MORSE_STABLE; UNSTABLE names the failing
    condition: "(1)" a critical point splits, "(2)" equal critical values
    separate, "(3)" a multiple root stops being a root, "polygon" a
    deformation dot stays below the Newton polygon.

Configuration:
    RunConfig.from_env() reads
    - PUISEUX_PRECISION: working precision in bits (default 128)
    - PUISEUX_JOBS: worker processes for batch runs (default 1)

Created: 2025-12-14
================================================================================
"""

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from .algebra import DEFAULT_PRECISION, Exponent, format_exponent
from .expansion import DEFAULT_EXTRA_STEPS


class Verdict(str, Enum):
    MORSE_STABLE = "MorseStable"
    ALMOST_MORSE_STABLE = "AlmostMorseStable"
    UNSTABLE = "Unstable"
    INCONCLUSIVE = "Inconclusive"

    @property
    def is_stable(self) -> bool:
        return self in (Verdict.MORSE_STABLE, Verdict.ALMOST_MORSE_STABLE)


@dataclass
class CriticalBranchReport:
    """
    Behaviour of one critical point c0 of p_0 under the deformation.

    Attributes:
        c0: Root enclosure of p_0' (exact or ball, as a coefficient dict)
        text: Printable form of c0
        multiplicity: m_crit(c0) at t = 0
        stable: True, False, or None when undecided
        witness: Factor data for the branch that carries c0
    """
    c0: dict
    text: str
    multiplicity: int
    stable: Optional[bool]
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "c0": self.c0,
            "text": self.text,
            "multiplicity": self.multiplicity,
            "stable": self.stable,
            "witness": self.witness,
        }


@dataclass
class StabilityReport:
    """
    Verdict of a stability check with its evidence.

    Attributes:
        verdict: Final verdict
        failing_condition: "(1)", "(2)", "(3)" or "polygon" when unstable
        witness: Machine-readable witness for the failing condition
        critical_points: Per critical point reports (polynomial families)
        families: Per edge-family reports (deformations)
        notes: Human-readable remarks, e.g. why a verdict is inconclusive
        subject: Printable form of the checked family
    """
    verdict: Verdict
    failing_condition: Optional[str] = None
    witness: dict = field(default_factory=dict)
    critical_points: list = field(default_factory=list)
    families: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    subject: str = ""

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "criterion": "per edge-family criterion" if self.families else "polynomial family",
            "failing_condition": self.failing_condition,
            "witness": self.witness,
            "critical_points": [c.to_dict() for c in self.critical_points],
            "families": [f.to_dict() for f in self.families],
            "notes": list(self.notes),
        }


@dataclass
class FamilyCheck:
    """Edge family P_E(z; t) read at one critical point of φ_0."""

    critical_point: str
    coslope: Exponent
    family: str
    report: StabilityReport

    def to_dict(self) -> dict:
        return {
            "critical_point": self.critical_point,
            "coslope": format_exponent(self.coslope),
            "family": self.family,
            "report": self.report.to_dict(),
        }


@dataclass
class LemmaReport:
    """Sampled-t consistency of the critical structure of φ_t."""

    samples: list
    consistent: bool
    mismatches: list = field(default_factory=list)
    reference: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "samples": [format_exponent(t) for t in self.samples],
            "consistent": self.consistent,
            "mismatches": self.mismatches,
            "reference": self.reference,
        }


def parse_depth(value: Optional[str]) -> Optional[Fraction]:
    """Parse a depth such as '7/4' or '3'; None and empty mean the default."""
    if value is None or str(value).strip() == "":
        return None
    depth = Fraction(str(value).strip())
    if depth <= 0:
        raise ValueError(f"depth must be positive, got {value}")
    return depth


@dataclass
class RunConfig:
    """
    Settings for one analysis run.

    Attributes:
        depth: Root expansion depth; None = separation depth + extra_steps
        extra_steps: Newton steps past separation
        precision_bits: Starting ball precision
        format: "text" or "json"
        svg: Optional path for the SVG figure
        regularize: "auto" applies a generic linear change when needed
        jobs: Worker processes for batch runs
    """
    depth: Optional[Fraction] = None
    extra_steps: int = DEFAULT_EXTRA_STEPS
    precision_bits: int = DEFAULT_PRECISION
    format: str = "text"
    svg: Optional[str] = None
    regularize: str = "auto"
    jobs: int = 1

    @classmethod
    def from_env(cls, **overrides: Any) -> "RunConfig":
        """Defaults from the environment, then explicit overrides (None ignored)."""
        config = cls(
            precision_bits=int(os.environ.get("PUISEUX_PRECISION", str(DEFAULT_PRECISION))),
            jobs=int(os.environ.get("PUISEUX_JOBS", "1")),
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(config, key, value)
        return config

    def to_dict(self) -> dict:
        return {
            "depth": format_exponent(self.depth) if self.depth is not None else None,
            "extra_steps": self.extra_steps,
            "precision_bits": self.precision_bits,
            "format": self.format,
            "svg": self.svg,
            "regularize": self.regularize,
            "jobs": self.jobs,
        }
