"""Pulse envelopes, pulse areas and schedules.

A rotation convention trap lives here. Under ``W (|1><3| + h.c.)`` the state
|1> evolves to ``cos(A)|1> - i sin(A)|3>`` with ``A`` the pulse area, so the
familiar "theta rotation" of the three-level literature corresponds to area
``theta / 2``: a pi/2 rotation is area pi/4, a pi rotation is area pi/2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .hamiltonian import CHANNELS

GAUSS_HALF_WIDTH = 3.0  # truncation in units of sigma
_GAUSS_AREA_FACTOR = math.sqrt(2 * math.pi) * erf(GAUSS_HALF_WIDTH / math.sqrt(2)) / (
    2 * GAUSS_HALF_WIDTH
)


class Shape(str, enum.Enum):
    RECT = "rect"
    GAUSSIAN = "gaussian"
    SIN2 = "sin2"


def _shape_area_factor(shape: Shape) -> float:
    """Area of a unit-amplitude envelope divided by its duration."""
    if shape is Shape.RECT:
        return 1.0
    if shape is Shape.SIN2:
        return 0.5
    # sigma = duration / 6, truncated at +-3 sigma
    return _GAUSS_AREA_FACTOR


@dataclass(frozen=True)
class Envelope:
    """Single pulse on one transition.

    ``amplitude`` is the peak |W| in rad/s and ``phase`` is the constant
    carrier phase, so the complex Rabi amplitude is
    ``amplitude * exp(i phase) * profile(t)`` with ``profile`` peaking at 1.
    """

    shape: Shape
    amplitude: float
    t_start: float
    duration: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        if not self.duration > 0:
            raise ValueError(f"envelope duration must be positive, got {self.duration!r}")
        if not self.amplitude >= 0:
            raise ValueError(f"envelope amplitude must be >= 0, got {self.amplitude!r}")
        for name in ("amplitude", "t_start", "duration", "phase"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"envelope {name} must be finite")

    @property
    def t_end(self) -> float:
        return self.t_start + self.duration

    def profile(self, t):
        """Unit-peak time profile, zero outside [t_start, t_end]."""
        if isinstance(t, (float, int)):
            return self._profile_scalar(float(t))
        t = np.asarray(t, dtype=float)
        inside = (t >= self.t_start) & (t <= self.t_end)
        x = np.clip((t - self.t_start) / self.duration, 0.0, 1.0)
        if self.shape is Shape.RECT:
            p = np.ones_like(x)
        elif self.shape is Shape.SIN2:
            p = np.sin(np.pi * x) ** 2
        else:
            z = (x - 0.5) * 2 * GAUSS_HALF_WIDTH
            p = np.exp(-0.5 * z**2)
        return np.where(inside, p, 0.0)

    def _profile_scalar(self, t: float) -> float:
        if not self.t_start <= t <= self.t_end:
            return 0.0
        x = min((t - self.t_start) / self.duration, 1.0)
        if self.shape is Shape.RECT:
            return 1.0
        if self.shape is Shape.SIN2:
            return math.sin(math.pi * x) ** 2
        z = (x - 0.5) * 2 * GAUSS_HALF_WIDTH
        return math.exp(-0.5 * z * z)

    def __call__(self, t):
        """Complex Rabi amplitude at time ``t``."""
        return self.amplitude * np.exp(1j * self.phase) * self.profile(t)


def area(env: Envelope) -> float:
    """Integral of |W(t)| over the pulse, in closed form."""
    return env.amplitude * env.duration * _shape_area_factor(env.shape)


def rotation_angle(pulse_area: float) -> float:
    return 2.0 * pulse_area


def area_for_rotation(theta: float) -> float:
    return 0.5 * theta


def calibrate_amplitude(shape, duration: float, target_area: float) -> float:
    """Peak amplitude giving ``target_area`` for the given shape and duration."""
    shape = Shape(shape)
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration!r}")
    if target_area < 0:
        raise ValueError(f"target area must be >= 0, got {target_area!r}")
    return target_area / (duration * _shape_area_factor(shape))


@dataclass(frozen=True)
class PulseSegment:
    """Simultaneously switched pulses; channels missing from ``envelopes`` are off."""

    envelopes: dict = field(default_factory=dict)

    def __post_init__(self):
        envs = dict(self.envelopes)
        unknown = set(envs) - set(CHANNELS)
        if unknown:
            raise ValueError(f"unknown channels {sorted(unknown)}; expected {CHANNELS}")
        if not envs:
            raise ValueError("a segment needs at least one envelope")
        first = next(iter(envs.values()))
        for env in envs.values():
            if env.t_start != first.t_start or env.duration != first.duration:
                raise ValueError("envelopes within one segment must share t_start and duration")
        object.__setattr__(self, "envelopes", envs)

    @property
    def t_start(self) -> float:
        return next(iter(self.envelopes.values())).t_start

    @property
    def duration(self) -> float:
        return next(iter(self.envelopes.values())).duration

    @property
    def t_end(self) -> float:
        return self.t_start + self.duration

    def rabi(self, t) -> dict:
        """Complex amplitude per channel at time ``t`` (absent channels are 0)."""
        return {ch: (self.envelopes[ch](t) if ch in self.envelopes else 0.0) for ch in CHANNELS}

    def areas(self) -> dict:
        return {ch: area(env) for ch, env in self.envelopes.items()}


@dataclass(frozen=True)
class Schedule:
    """Time-ordered, non-overlapping pulse segments."""

    segments: tuple = ()

    def __post_init__(self):
        segs = tuple(self.segments)
        for prev, nxt in zip(segs, segs[1:]):
            if nxt.t_start < prev.t_end:
                raise ValueError(
                    f"segments overlap: one ends at {prev.t_end!r}, the next starts at {nxt.t_start!r}"
                )
        if segs and segs[0].t_start < 0:
            raise ValueError("schedules start at t >= 0")
        object.__setattr__(self, "segments", segs)

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end if self.segments else 0.0

    def segment_at(self, t: float):
        for seg in self.segments:
            if seg.t_start <= t <= seg.t_end:
                return seg
        return None
