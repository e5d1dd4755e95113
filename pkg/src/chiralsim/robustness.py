"""Error-model sweeps over the discrimination protocol."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .evolution import CollapseChannel, default_channels
from .hamiltonian import RESONANT, DetuningSet
from .protocol import ProtocolSpec, run_both, select_engine

# Conventional ranges, in units of the step-II amplitude where dimensionful.
DEFAULT_RANGES = {
    "epsilon": (-0.2, 0.2),
    "phase_offset": (-math.pi / 4, math.pi / 4),
    "detuning": (-0.5, 0.5),
    "gamma": (0.0, 0.1),
}

PARAMETERS = (
    "epsilon",
    "epsilon1",
    "epsilon2",
    "epsilon3",
    "phase_offset",
    "delta12",
    "delta23",
    "delta13",
    "gamma",
)


@dataclass(frozen=True)
class ErrorModel:
    """Deviations from the ideal sequence.

    Every target area is multiplied by ``(1 + epsilon)`` and additionally by
    ``(1 + step_epsilon[k])`` for step ``k``; ``phase_offset`` is added to the
    1-2 carrier phase; ``detuning`` is added to the protocol's detunings; ``decay``
    replaces the protocol's collapse channels when non-empty.
    """

    epsilon: float = 0.0
    step_epsilon: tuple = (0.0, 0.0, 0.0)
    phase_offset: float = 0.0
    detuning: DetuningSet = RESONANT
    decay: tuple = field(default=())

    def __post_init__(self):
        step_eps = tuple(float(e) for e in self.step_epsilon)
        if len(step_eps) != 3:
            raise ValueError("step_epsilon needs three entries")
        object.__setattr__(self, "step_epsilon", step_eps)
        object.__setattr__(self, "decay", tuple(self.decay))
        for value in (self.epsilon, self.phase_offset, *step_eps):
            if not math.isfinite(value):
                raise ValueError("error model entries must be finite")

    @classmethod
    def from_params(cls, params: dict, decay_channels=("31", "32", "21")) -> "ErrorModel":
        """Build a model from flat sweep parameters (names in ``PARAMETERS``)."""
        unknown = set(params) - set(PARAMETERS)
        if unknown:
            raise ValueError(f"unknown sweep parameters {sorted(unknown)}")
        gamma = float(params.get("gamma", 0.0))
        decay = ()
        if gamma > 0:
            decay = tuple(CollapseChannel(int(c[0]), int(c[1]), gamma) for c in decay_channels)
        return cls(
            epsilon=float(params.get("epsilon", 0.0)),
            step_epsilon=tuple(float(params.get(f"epsilon{k}", 0.0)) for k in (1, 2, 3)),
            phase_offset=float(params.get("phase_offset", 0.0)),
            detuning=DetuningSet(
                float(params.get("delta12", 0.0)),
                float(params.get("delta23", 0.0)),
                float(params.get("delta13", 0.0)),
            ),
            decay=decay,
        )


def apply_error(spec: ProtocolSpec, model: ErrorModel) -> ProtocolSpec:
    scale = 1.0 + model.epsilon
    s1, s2, s3 = (scale * (1.0 + e) for e in model.step_epsilon)
    det = spec.detuning
    if not model.detuning.is_resonant:
        det = DetuningSet(
            det.delta12 + model.detuning.delta12,
            det.delta23 + model.detuning.delta23,
            det.delta13 + model.detuning.delta13,
        )
    return replace(
        spec,
        area1=spec.area1 * s1,
        area2_12=spec.area2_12 * s2,
        area2_23=spec.area2_23 * s2,
        area3=spec.area3 * s3,
        phase12=spec.phase12 + model.phase_offset,
        detuning=det,
        decay=model.decay or spec.decay,
    )


@dataclass(frozen=True)
class SweepRecord:
    params: dict
    p_left: tuple
    p_right: tuple
    contrast: float
    engine: str
    drift: float
    error: str | None = None


def cartesian_grid(axes: dict) -> list[dict]:
    """All combinations of the axis values, last axis varying fastest."""
    names = list(axes)
    if not names:
        return [{}]
    return [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]


def _evaluate(spec, params, model, engine, step):
    perturbed = apply_error(spec, model)
    chosen = engine or select_engine(perturbed)
    try:
        res = run_both(perturbed, chosen, step)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        nan3 = (math.nan,) * 3
        return SweepRecord(params, nan3, nan3, math.nan, chosen, math.nan, f"{type(exc).__name__}: {exc}")
    return SweepRecord(
        params,
        tuple(float(p) for p in res.left.populations),
        tuple(float(p) for p in res.right.populations),
        res.contrast,
        chosen,
        float(max(res.left.drift, res.right.drift)),
    )


def run_sweep(
    spec: ProtocolSpec,
    grid,
    *,
    engine: str | None = None,
    step: float | None = None,
    workers: int = 1,
    decay_channels=("31", "32", "21"),
) -> list[SweepRecord]:
    """Evaluate the protocol at every grid point.

    ``grid`` holds :class:`ErrorModel` instances or flat parameter dicts.
    Records come back in grid order whatever ``workers`` is. Engine failures
    are stored in ``SweepRecord.error`` instead of aborting the sweep.
    """
    points = list(grid)
    if not points:
        raise ValueError("sweep grid is empty")
    jobs = []
    for point in points:
        if isinstance(point, ErrorModel):
            jobs.append(({}, point))
        else:
            jobs.append((dict(point), ErrorModel.from_params(point, decay_channels)))

    def work(job):
        params, model = job
        return _evaluate(spec, params, model, engine, step)

    if workers <= 1:
        return [work(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, jobs))


def records_table(records) -> np.ndarray:
    """Numeric columns p_l1..p_l3, p_r1..p_r3, contrast, drift as an array."""
    return np.array([[*r.p_left, *r.p_right, r.contrast, r.drift] for r in records])
