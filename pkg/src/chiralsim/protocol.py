"""The three-pulse chirality discrimination sequence.

Step I    1-3 pulse, area pi/4 (a pi/2 rotation): |1> -> (|1> -+ i|3>)/sqrt 2.
Step II   1-2 and 2-3 pulses with ``W12 = i W0 = i W23``; each has area
          pi/(2 sqrt 2), so the bright-state area is pi/2. Left: -i|B> -> -|2>.
          Right: the state is dark and does not move.
Step III  1-3 pulse, area 3pi/4. Left stays in |2>, Right returns to |1>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evolution import (
    CollapseChannel,
    TimeDependentGenerator,
    evolve_lindblad,
    evolve_piecewise,
    evolve_rk4,
)
from .hamiltonian import RESONANT, Chirality, DetuningSet
from .pulses import Envelope, PulseSegment, Schedule, Shape, calibrate_amplitude
from .quantum import StateVec3, basis

STEP1_AREA = math.pi / 4
STEP2_AREA = math.pi / (2 * math.sqrt(2))
STEP3_AREA = 3 * math.pi / 4
STEP2_PHASE12 = math.pi / 2

ENGINES = ("piecewise", "rk4", "lindblad")
DEFAULT_STEPS_PER_SEGMENT = 1000


@dataclass(frozen=True)
class ProtocolSpec:
    """Parameters of the three-step sequence.

    Areas are pulse areas in rad (rotation angle / 2). ``area2_12`` and
    ``area2_23`` are the per-channel areas of step II. Phases are the carrier
    phases of each channel; the ideal sequence needs ``phase12 = pi/2``.
    """

    shape: Shape = Shape.RECT
    durations: tuple = (1.0, 1.0, 1.0)
    gap: float = 0.0
    area1: float = STEP1_AREA
    area2_12: float = STEP2_AREA
    area2_23: float = STEP2_AREA
    area3: float = STEP3_AREA
    phase12: float = STEP2_PHASE12
    phase23: float = 0.0
    phase13: float = 0.0
    detuning: DetuningSet = RESONANT
    decay: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        durations = tuple(float(d) for d in self.durations)
        if len(durations) != 3:
            raise ValueError("durations needs one entry per step (3)")
        if any(not d > 0 for d in durations):
            raise ValueError(f"step durations must be positive, got {durations}")
        object.__setattr__(self, "durations", durations)
        if self.gap < 0:
            raise ValueError("negative gap would make steps overlap")
        for name in ("area1", "area2_12", "area2_23", "area3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        decay = tuple(self.decay)
        if not all(isinstance(c, CollapseChannel) for c in decay):
            raise TypeError("decay must hold CollapseChannel instances")
        object.__setattr__(self, "decay", decay)

    @property
    def has_decay(self) -> bool:
        return any(c.rate > 0 for c in self.decay)

    @property
    def step2_amplitude(self) -> float:
        """Peak |W12| of step II (the natural frequency scale W0)."""
        return calibrate_amplitude(self.shape, self.durations[1], self.area2_12)


def build_protocol(spec: ProtocolSpec) -> Schedule:
    d1, d2, d3 = spec.durations
    t1 = 0.0
    t2 = t1 + d1 + spec.gap
    t3 = t2 + d2 + spec.gap

    def env(t0, dur, target, phase):
        amp = calibrate_amplitude(spec.shape, dur, target)
        return Envelope(spec.shape, amp, t0, dur, phase)

    return Schedule(
        (
            PulseSegment({"13": env(t1, d1, spec.area1, spec.phase13)}),
            PulseSegment(
                {
                    "12": env(t2, d2, spec.area2_12, spec.phase12),
                    "23": env(t2, d2, spec.area2_23, spec.phase23),
                }
            ),
            PulseSegment({"13": env(t3, d3, spec.area3, spec.phase13)}),
        )
    )


def select_engine(spec: ProtocolSpec) -> str:
    if spec.has_decay:
        return "lindblad"
    if not spec.detuning.is_resonant:
        return "rk4"
    return "piecewise"


def default_step(spec: ProtocolSpec) -> float:
    return min(spec.durations) / DEFAULT_STEPS_PER_SEGMENT


@dataclass(frozen=True)
class ChiralityRun:
    chirality: Chirality
    state: object  # StateVec3 or DensityMatrix3
    populations: np.ndarray
    engine: str
    drift: float


@dataclass(frozen=True)
class ProtocolResult:
    left: ChiralityRun
    right: ChiralityRun
    contrast: float


def generator(spec: ProtocolSpec, chirality: Chirality) -> TimeDependentGenerator:
    return TimeDependentGenerator(build_protocol(spec), spec.detuning, chirality)


def run_protocol(
    spec: ProtocolSpec, chirality: Chirality, engine: str | None = None, step: float | None = None
) -> ChiralityRun:
    """Evolve |1> through the chirality-signed sequence.

    ``engine`` defaults to :func:`select_engine`; ``step`` (RK4 and Lindblad)
    defaults to the shortest step duration / 1000.
    """
    engine = engine or select_engine(spec)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    if spec.has_decay and engine != "lindblad":
        raise ValueError(f"engine {engine!r} cannot model decay; use 'lindblad'")
    step = step if step is not None else default_step(spec)
    gen = generator(spec, chirality)
    psi0 = basis(1)

    if engine == "piecewise":
        psi = evolve_piecewise(gen, psi0)
        return ChiralityRun(chirality, psi, psi.populations(), engine, abs(psi.norm() - 1.0))
    if engine == "rk4":
        res = evolve_rk4(gen, psi0, step)
        pops = res.state.populations()
        return ChiralityRun(chirality, res.state, pops, engine, res.norm_drift)
    res = evolve_lindblad(gen, spec.decay, psi0.projector(), step)
    return ChiralityRun(chirality, res.state, res.state.populations(), engine, res.trace_drift)


def contrast(left: ChiralityRun, right: ChiralityRun) -> float:
    """Discrimination contrast in [-1, 1].

    ``C = [(P_L(2) - P_R(2)) + (P_R(1) - P_L(1))] / 2``. It is 1 when left
    molecules end in |2> and right ones in |1>, and exactly 0 whenever both
    species end with the same populations (no field, or only two couplings).
    At the ideal end point it coincides with ``P_L(2) + P_R(1) - 1``.
    """
    pl, pr = left.populations, right.populations
    return float(0.5 * ((pl[1] - pr[1]) + (pr[0] - pl[0])))


def run_both(spec: ProtocolSpec, engine: str | None = None, step: float | None = None) -> ProtocolResult:
    left = run_protocol(spec, Chirality.LEFT, engine, step)
    right = run_protocol(spec, Chirality.RIGHT, engine, step)
    return ProtocolResult(left, right, contrast(left, right))


def checkpoints(spec: ProtocolSpec, chirality: Chirality) -> list[StateVec3]:
    """Exact states after step I, II and III (resonant, decay-free protocols only)."""
    if not spec.detuning.is_resonant:
        raise ValueError("checkpoints need a resonant protocol")
    gen = generator(spec, chirality)
    states = []
    psi = basis(1)
    for seg in gen.schedule:
        psi = gen.segment_propagator(seg) @ psi
        states.append(psi)
    return states
