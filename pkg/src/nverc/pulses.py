"""Timed, phased microwave drive segments: the executable gate program.

A :class:`PulseSequence` serializes to the ``nverc-seq/1`` JSON document:
ordered segments with fields ``{duration, alpha, beta, omega_x, omega_y}``
plus a header carrying the frame tag and the system parameters.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

from .errors import ConfigError
from .spin import FrameTag, SystemParams

__all__ = [
    "PulseSegment",
    "PulseSequence",
    "DQRotation",
    "RotationAxis",
    "SEQUENCE_SCHEMA",
    "sequence_to_json",
    "sequence_from_json",
    "reduce_angle",
]

SEQUENCE_SCHEMA = "nverc-seq/1"


def reduce_angle(theta: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    if t <= -math.pi:  # remainder returns [-pi, pi]; fold the lower endpoint
        t += 2.0 * math.pi
    return t


@dataclass(frozen=True)
class PulseSegment:
    """Constant-amplitude, constant-phase drive segment.

    ``alpha`` is the main-drive phase, ``beta`` the orthogonal-drive phase
    (defaults to ``alpha``).  Amplitudes are per-segment so a sequence can
    switch drive strength between pulses.
    """

    duration: float
    alpha: float
    omega_x: float
    omega_y: float = 0.0
    beta: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.duration) and self.duration >= 0.0):
            raise ValueError(f"segment duration must be finite and >= 0, got {self.duration}")
        for name in ("alpha", "omega_x", "omega_y"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"segment field {name} must be finite")
        if self.beta is None:
            object.__setattr__(self, "beta", self.alpha)
        elif not math.isfinite(self.beta):
            raise ValueError("segment field beta must be finite")


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulse segments with the frame their propagator is declared in."""

    segments: tuple[PulseSegment, ...]
    frame: FrameTag = FrameTag.INTERACTION_D

    def __init__(self, segments, frame: FrameTag = FrameTag.INTERACTION_D):
        object.__setattr__(self, "segments", tuple(segments))
        object.__setattr__(self, "frame", FrameTag(frame))

    @property
    def total_duration(self) -> float:
        return float(sum(seg.duration for seg in self.segments))

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)


class RotationAxis(str, enum.Enum):
    """Which of the two available DQ rotation axes a two-pulse gate uses."""

    MINUS_PHI = "minus_phi"
    PLUS_PHI = "plus_phi"


@dataclass(frozen=True)
class DQRotation:
    """Rotation on the DQ Bloch sphere: axis label plus angle in (-pi, pi]."""

    axis: RotationAxis
    theta: float

    def __init__(self, axis, theta: float):
        object.__setattr__(self, "axis", RotationAxis(axis))
        if not math.isfinite(theta):
            raise ValueError("rotation angle must be finite")
        object.__setattr__(self, "theta", reduce_angle(float(theta)))


def sequence_to_json(seq: PulseSequence, params: SystemParams, indent: int | None = 2) -> str:
    doc = {
        "schema": SEQUENCE_SCHEMA,
        "frame": seq.frame.value,
        "params": {
            "D": params.D,
            "muB": params.muB,
            "omega_x": params.omega_x,
            "omega_y": params.omega_y,
            "Ex": params.Ex,
            "Ey": params.Ey,
            "Ez": params.Ez,
        },
        "segments": [
            {
                "duration": seg.duration,
                "alpha": seg.alpha,
                "beta": seg.beta,
                "omega_x": seg.omega_x,
                "omega_y": seg.omega_y,
            }
            for seg in seq.segments
        ],
    }
    return json.dumps(doc, indent=indent)


def sequence_from_json(text: str) -> tuple[PulseSequence, SystemParams]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid sequence JSON: {exc}") from exc
    if doc.get("schema") != SEQUENCE_SCHEMA:
        raise ConfigError(
            f"unsupported sequence schema {doc.get('schema')!r}, expected {SEQUENCE_SCHEMA!r}"
        )
    try:
        params = SystemParams(**doc["params"])
        segments = [
            PulseSegment(
                duration=s["duration"],
                alpha=s["alpha"],
                beta=s.get("beta", s["alpha"]),
                omega_x=s["omega_x"],
                omega_y=s.get("omega_y", 0.0),
            )
            for s in doc["segments"]
        ]
        frame = FrameTag(doc.get("frame", FrameTag.INTERACTION_D.value))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed sequence document: {exc}") from exc
    return PulseSequence(segments, frame), params
