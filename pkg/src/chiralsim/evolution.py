"""Time evolution engines.

Three engines share one generator type:

``evolve_piecewise``
    Exact. Each segment whose Hamiltonian is a scalar envelope times a fixed
    matrix commutes with itself at all times, so its propagator is a single
    matrix exponential of the integrated generator.
``evolve_rk4``
    Classical fixed-step Runge-Kutta for the Schroedinger equation. Handles
    detuned and otherwise non-commuting segments; reports norm drift instead
    of renormalizing.
``evolve_lindblad``
    The same integrator applied to the Lindblad master equation.

Step sizes are rounded down per interval so that every segment boundary is
hit exactly; envelopes with corners (rect) therefore keep fourth order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import (
    CHANNEL_INDEX,
    RESONANT,
    Chirality,
    DetuningSet,
)
from .pulses import Schedule, Shape, area
from .quantum import (
    DensityMatrix3,
    HermitianOp3,
    StateVec3,
    Unitary3,
    apply,
    expm_hermitian,
)

NORM_DRIFT_LIMIT = 1e-6
TRACE_DRIFT_LIMIT = 1e-8
POSITIVITY_LIMIT = 1e-8
MIN_STEPS_PER_SEGMENT = 10


class NonCommutingSegmentError(ValueError):
    pass


class StepTooLargeError(ValueError):
    pass


class NumericalInvariantError(RuntimeError):
    """An integrator drifted beyond the tolerance it promises."""


_LOOKUP = object()


@dataclass(frozen=True)
class TimeDependentGenerator:
    """H(t) for one chirality under a pulse schedule and fixed detunings."""

    schedule: Schedule
    detuning: DetuningSet = RESONANT
    chirality: Chirality = Chirality.LEFT

    def _coefficients(self, seg, t):
        coeffs = {}
        for ch, env in seg.envelopes.items():
            w = complex(env(t))
            if ch == "13":
                w *= self.chirality.sign13
            elif ch == "23" and self.detuning.loop_mismatch != 0.0:
                w *= np.exp(1j * self.detuning.loop_mismatch * t)
            coeffs[ch] = w
        return coeffs

    def _diagonal(self):
        return np.array([0.0, -self.detuning.delta12, -self.detuning.delta13])

    def matrix(self, t: float, segment=_LOOKUP) -> np.ndarray:
        """H(t) as an array.

        ``segment`` pins which segment's envelopes to use (``None`` means no
        pulse is on); by default it is looked up from ``t``, which is ambiguous
        where two segments touch.
        """
        seg = self.schedule.segment_at(t) if segment is _LOOKUP else segment
        if seg is not None:
            # round-off must not push a stage time outside its own window
            t = min(max(t, seg.t_start), seg.t_end)
        m = np.diag(self._diagonal()).astype(complex)
        if seg is not None:
            for ch, w in self._coefficients(seg, t).items():
                i, j = CHANNEL_INDEX[ch]
                m[i, j] += w
                m[j, i] += np.conj(w)
        return m

    def hamiltonian(self, t: float) -> HermitianOp3:
        return HermitianOp3(self.matrix(t))

    def intervals(self, t_final=None):
        """(t0, t1, segment-or-None) covering [0, max(t_final, schedule end)]."""
        out = []
        now = 0.0
        for seg in self.schedule:
            if seg.t_start > now:
                out.append((now, seg.t_start, None))
            out.append((seg.t_start, seg.t_end, seg))
            now = seg.t_end
        if t_final is not None and t_final > now:
            out.append((now, float(t_final), None))
        return out

    def segment_propagator(self, seg) -> Unitary3:
        """Exact propagator over one segment, if its generator commutes with itself."""
        envs = seg.envelopes
        shapes = {env.shape for env in envs.values()}
        if len(shapes) != 1:
            raise NonCommutingSegmentError(
                "non-commuting segment; use evolve_rk4 (mixed envelope shapes)"
            )
        shape = shapes.pop()
        detuned = not self.detuning.is_resonant
        if detuned and shape is not Shape.RECT:
            raise NonCommutingSegmentError(
                "non-commuting segment; use evolve_rk4 (detuning with a shaped envelope)"
            )
        if (
            self.detuning.loop_mismatch != 0.0
            and "23" in envs
            and envs["23"].amplitude != 0.0
        ):
            raise NonCommutingSegmentError(
                "non-commuting segment; use evolve_rk4 (open detuning loop rotates the 2-3 coupling)"
            )
        # integrated generator: per-channel area with its phase and sign
        gen = np.zeros((3, 3), dtype=complex)
        for ch, env in envs.items():
            w = area(env) * np.exp(1j * env.phase)
            if ch == "13":
                w *= self.chirality.sign13
            i, j = CHANNEL_INDEX[ch]
            gen[i, j] += w
            gen[j, i] += np.conj(w)
        if detuned:
            gen += np.diag(self._diagonal()) * seg.duration
        return expm_hermitian(HermitianOp3(gen), 1.0)

    def free_propagator(self, duration: float) -> Unitary3:
        return expm_hermitian(HermitianOp3(np.diag(self._diagonal())), duration)


@dataclass(frozen=True)
class CollapseChannel:
    """Incoherent jump |source> -> |target> at ``rate`` (rad/s)."""

    source: int
    target: int
    rate: float

    def __post_init__(self):
        if self.source not in (1, 2, 3) or self.target not in (1, 2, 3):
            raise ValueError("collapse levels must be 1, 2 or 3")
        if self.source == self.target:
            raise ValueError("collapse source and target must differ")
        if not (math.isfinite(self.rate) and self.rate >= 0):
            raise ValueError(f"collapse rate must be finite and >= 0, got {self.rate!r}")

    def operator(self) -> np.ndarray:
        op = np.zeros((3, 3), dtype=complex)
        op[self.target - 1, self.source - 1] = 1.0
        return op


def default_channels(rate: float) -> list[CollapseChannel]:
    """All downhill spontaneous-emission paths, equal rates."""
    return [CollapseChannel(3, 1, rate), CollapseChannel(3, 2, rate), CollapseChannel(2, 1, rate)]


@dataclass(frozen=True)
class StateResult:
    state: StateVec3
    norm_drift: float


@dataclass(frozen=True)
class DensityResult:
    state: DensityMatrix3
    trace_drift: float
    min_eigenvalue: float


def evolve_piecewise(gen: TimeDependentGenerator, psi0: StateVec3, t_final=None) -> StateVec3:
    psi = psi0
    for t0, t1, seg in gen.intervals(t_final):
        if seg is None:
            if not gen.detuning.is_resonant:
                psi = apply(gen.free_propagator(t1 - t0), psi)
        else:
            psi = apply(gen.segment_propagator(seg), psi)
    return psi


def propagator(gen: TimeDependentGenerator, t_final=None) -> Unitary3:
    """Exact total propagator (same engine as :func:`evolve_piecewise`)."""
    u = Unitary3.identity()
    for t0, t1, seg in gen.intervals(t_final):
        if seg is None:
            if not gen.detuning.is_resonant:
                u = gen.free_propagator(t1 - t0) @ u
        else:
            u = gen.segment_propagator(seg) @ u
    return u


def _check_step(gen, step):
    if not (math.isfinite(step) and step > 0):
        raise StepTooLargeError(f"step must be positive, got {step!r}")
    for seg in gen.schedule:
        if step > seg.duration / MIN_STEPS_PER_SEGMENT * (1 + 1e-12):
            raise StepTooLargeError(
                f"step {step!r} too large: must be <= segment duration / "
                f"{MIN_STEPS_PER_SEGMENT} = {seg.duration / MIN_STEPS_PER_SEGMENT!r}"
            )


def _substeps(t0, t1, step):
    n = max(1, math.ceil((t1 - t0) / step * (1 - 1e-12)))
    return n, (t1 - t0) / n


def _rk4(rhs, y, t0, t1, step, on_step=None):
    n, h = _substeps(t0, t1, step)
    for k in range(n):
        t = t0 + k * h
        t_next = t1 if k == n - 1 else t0 + (k + 1) * h
        t_mid = 0.5 * (t + t_next)
        k1 = rhs(t, y)
        k2 = rhs(t_mid, y + 0.5 * h * k1)
        k3 = rhs(t_mid, y + 0.5 * h * k2)
        k4 = rhs(t_next, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if on_step is not None:
            on_step(y)
    return y


def evolve_rk4(
    gen: TimeDependentGenerator,
    psi0: StateVec3,
    step: float,
    t_final=None,
    drift_limit: float = NORM_DRIFT_LIMIT,
) -> StateResult:
    """Integrate d psi/dt = -i H(t) psi with fixed-step RK4.

    The returned state is not renormalized; ``norm_drift`` is ``|‖psi‖ - 1|``
    at the end. Drift beyond ``drift_limit`` raises
    :class:`NumericalInvariantError`.
    """
    _check_step(gen, step)
    psi = np.array(psi0.amplitudes)
    for t0, t1, seg in gen.intervals(t_final):
        if seg is None and gen.detuning.is_resonant:
            continue

        def rhs(t, y, seg=seg):
            return -1j * (gen.matrix(t, seg) @ y)

        psi = _rk4(rhs, psi, t0, t1, step)
    drift = abs(float(np.linalg.norm(psi)) - 1.0)
    if drift > drift_limit:
        raise NumericalInvariantError(f"RK4 norm drift {drift:.3e} exceeds {drift_limit:g}")
    return StateResult(StateVec3(psi, atol=drift_limit), drift)


def lindblad_rhs(h: np.ndarray, rho: np.ndarray, jump_super: np.ndarray, decay: np.ndarray) -> np.ndarray:
    """-i[H, rho] + sum_k (L_k rho L_k^+ - {L_k^+ L_k, rho}/2).

    ``jump_super`` is sum_k kron(L_k, conj(L_k)) acting on the row-major
    flattening of rho, ``decay`` is sum_k L_k^+ L_k; rates are folded into L_k.
    """
    h_eff = h - 0.5j * decay
    out = -1j * (h_eff @ rho - rho @ h_eff.conj().T)
    return out + (jump_super @ rho.reshape(9)).reshape(3, 3)


def evolve_lindblad(
    gen: TimeDependentGenerator,
    channels,
    rho0: DensityMatrix3,
    step: float,
    t_final=None,
) -> DensityResult:
    """Integrate the Lindblad master equation with fixed-step RK4.

    Trace drift is sampled after every step; the largest value is reported.
    Trace drift above ``TRACE_DRIFT_LIMIT`` or an eigenvalue below
    ``-POSITIVITY_LIMIT`` raises :class:`NumericalInvariantError`.
    """
    if not isinstance(rho0, DensityMatrix3):
        raise TypeError("rho0 must be a DensityMatrix3")
    _check_step(gen, step)
    jumps = [math.sqrt(c.rate) * c.operator() for c in channels if c.rate > 0]
    decay = sum((op.conj().T @ op for op in jumps), np.zeros((3, 3), dtype=complex))
    jump_super = sum((np.kron(op, op.conj()) for op in jumps), np.zeros((9, 9), dtype=complex))
    dissipative = bool(jumps)

    max_drift = 0.0

    def track(rho):
        nonlocal max_drift
        max_drift = max(max_drift, abs(np.trace(rho).real - 1.0))

    rho = np.array(rho0.matrix)
    for t0, t1, seg in gen.intervals(t_final):
        if seg is None and gen.detuning.is_resonant and not dissipative:
            continue

        def rhs(t, y, seg=seg):
            return lindblad_rhs(gen.matrix(t, seg), y, jump_super, decay)

        rho = _rk4(rhs, rho, t0, t1, step, on_step=track)

    rho = 0.5 * (rho + rho.conj().T)
    lowest = float(np.linalg.eigvalsh(rho)[0])
    if max_drift > TRACE_DRIFT_LIMIT:
        raise NumericalInvariantError(f"trace drift {max_drift:.3e} exceeds {TRACE_DRIFT_LIMIT:g}")
    if lowest < -POSITIVITY_LIMIT:
        raise NumericalInvariantError(f"density matrix eigenvalue {lowest:.3e} below zero")
    return DensityResult(DensityMatrix3(rho, atol=TRACE_DRIFT_LIMIT), max_drift, lowest)
