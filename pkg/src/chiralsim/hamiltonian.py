"""Interaction-picture Hamiltonians of a cyclic three-level system.

Index convention (fixed throughout the package)::

    H = W12 |1><2| + W23 |2><3| + W13 |1><3| + h.c.

with complex Rabi amplitudes ``W``. Left- and right-handed molecules see the
same fields except that the 1-3 coupling of the right-handed species carries
the opposite sign.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .quantum import HermitianOp3, StateVec3, normalize

CHANNELS = ("12", "23", "13")

# (row, column) of the upper-triangular element each channel drives
CHANNEL_INDEX = {"12": (0, 1), "23": (1, 2), "13": (0, 2)}


class Chirality(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def sign13(self) -> int:
        return -1 if self is Chirality.RIGHT else 1


@dataclass(frozen=True)
class RabiSet:
    """Complex Rabi amplitudes (rad/s) of the three transitions."""

    omega12: complex = 0.0
    omega23: complex = 0.0
    omega13: complex = 0.0

    def __post_init__(self):
        for name in ("omega12", "omega23", "omega13"):
            value = complex(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    def channel(self, name: str) -> complex:
        return getattr(self, "omega" + name)


@dataclass(frozen=True)
class DetuningSet:
    """Field detunings (rad/s), ``delta_ij = field frequency - transition frequency``."""

    delta12: float = 0.0
    delta23: float = 0.0
    delta13: float = 0.0

    def __post_init__(self):
        for name in ("delta12", "delta23", "delta13"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def is_resonant(self) -> bool:
        return self.delta12 == 0.0 and self.delta23 == 0.0 and self.delta13 == 0.0

    @property
    def loop_mismatch(self) -> float:
        """delta12 + delta23 - delta13; zero when the three fields close the loop."""
        return self.delta12 + self.delta23 - self.delta13


RESONANT = DetuningSet()


def chirality_signed(rabi: RabiSet, chirality: Chirality) -> RabiSet:
    if chirality is Chirality.RIGHT:
        return replace(rabi, omega13=-rabi.omega13)
    return rabi


def coupling_matrix(channel: str) -> np.ndarray:
    """Unit coupling |i><j| for one channel (upper triangle only)."""
    m = np.zeros((3, 3), dtype=complex)
    m[CHANNEL_INDEX[channel]] = 1.0
    return m


def _resonant_matrix(rabi: RabiSet) -> np.ndarray:
    upper = np.zeros((3, 3), dtype=complex)
    for ch in CHANNELS:
        upper[CHANNEL_INDEX[ch]] = rabi.channel(ch)
    return upper + upper.conj().T


def build_resonant(rabi: RabiSet) -> HermitianOp3:
    return HermitianOp3(_resonant_matrix(rabi))


def build_detuned(rabi: RabiSet, det: DetuningSet, t: float = 0.0) -> HermitianOp3:
    """Hamiltonian in the frame co-rotating with the 1-2 and 1-3 fields.

    Levels 2 and 3 pick up ``-delta12`` and ``-delta13`` on the diagonal. If the
    three detunings do not close the loop, the 2-3 coupling keeps a residual
    rotation ``exp(i * loop_mismatch * t)``; at ``t = 0`` (or for a closed loop)
    the result is static.
    """
    mismatch = det.loop_mismatch
    if mismatch != 0.0 and t != 0.0:
        rabi = replace(rabi, omega23=rabi.omega23 * np.exp(1j * mismatch * t))
    m = _resonant_matrix(rabi)
    m[1, 1] -= det.delta12
    m[2, 2] -= det.delta13
    return HermitianOp3(m)


class BrightStateUndefined(ValueError):
    pass


def bright_state(rabi: RabiSet) -> StateVec3:
    """The |1>,|3> superposition that |2> is driven into by the 1-2 and 2-3 fields.

    Requires ``omega13 == 0``. For ``omega12 = i W``, ``omega23 = W`` this is
    (i|1> + |3>)/sqrt(2).
    """
    if rabi.omega13 != 0:
        raise ValueError("bright state is defined only with the 1-3 coupling off")
    if abs(rabi.omega12) == 0 and abs(rabi.omega23) == 0:
        raise BrightStateUndefined("bright state undefined: both couplings are zero")
    return normalize([rabi.omega12, 0.0, np.conj(rabi.omega23)])


def dark_state(rabi: RabiSet) -> StateVec3:
    """The |1>,|3> superposition decoupled from |2> (requires ``omega13 == 0``)."""
    if rabi.omega13 != 0:
        raise ValueError("dark state is defined only with the 1-3 coupling off")
    if abs(rabi.omega12) == 0 and abs(rabi.omega23) == 0:
        raise BrightStateUndefined("dark state undefined: both couplings are zero")
    # orthogonal to (W12, 0, W23*) within span{|1>, |3>}
    return normalize([-rabi.omega23, 0.0, np.conj(rabi.omega12)])


def dressed_eigensystem(rabi: RabiSet) -> list[tuple[float, StateVec3]]:
    """Eigenpairs of the two-field (1-3 off) Hamiltonian, ordered 0, +W_eff, -W_eff.

    With ``W_eff = sqrt(|omega12|^2 + |omega23|^2)``, the pairs are
    ``(0, dark)``, ``(+W_eff, (|2> + |B>)/sqrt 2)`` and ``(-W_eff, (|2> - |B>)/sqrt 2)``.
    When both couplings vanish every eigenvalue is zero and the bare basis is
    returned in order.
    """
    if rabi.omega13 != 0:
        raise ValueError("dressed eigensystem requires omega13 == 0")
    w_eff = float(np.hypot(abs(rabi.omega12), abs(rabi.omega23)))
    if w_eff == 0.0:
        eye = np.eye(3)
        return [(0.0, StateVec3(eye[k])) for k in range(3)]
    bright = bright_state(rabi).amplitudes
    two = np.array([0.0, 1.0, 0.0], dtype=complex)
    return [
        (0.0, dark_state(rabi)),
        (w_eff, normalize(two + bright)),
        (-w_eff, normalize(two - bright)),
    ]


def effective_rabi(rabi: RabiSet) -> float:
    """sqrt(|omega12|^2 + |omega23|^2), the bright-state Rabi frequency."""
    return float(np.hypot(abs(rabi.omega12), abs(rabi.omega23)))
