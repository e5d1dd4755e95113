"""State and operator arithmetic for a three-level Hilbert space.

All objects wrap read-only ``numpy`` arrays and validate their defining
invariant once, at construction. Global phases carry no meaning here; compare
states with :func:`fidelity`, never with ``==``.
"""

from __future__ import annotations

import numpy as np

DIM = 3
STATE_ATOL = 1e-12
DERIVED_ATOL = 1e-10


class DegenerateStateError(ValueError):
    """Raised when a zero vector is asked to become a state."""


def _frozen(array, shape):
    out = np.array(array, dtype=complex)
    if out.shape != shape:
        raise ValueError(f"expected shape {shape}, got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("entries must be finite")
    out.flags.writeable = False
    return out


class StateVec3:
    """Pure state, three complex amplitudes in the basis (|1>, |2>, |3>)."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, atol: float = STATE_ATOL):
        amps = _frozen(amplitudes, (DIM,))
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > atol:
            raise ValueError(f"state is not normalized (norm = {norm!r})")
        self.amplitudes = amps

    def __repr__(self):
        return f"StateVec3({np.array2string(self.amplitudes, precision=6)})"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def projector(self) -> "DensityMatrix3":
        return DensityMatrix3(np.outer(self.amplitudes, self.amplitudes.conj()))


class HermitianOp3:
    """3x3 Hermitian generator in rad/s (hbar = 1)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, atol: float = STATE_ATOL):
        m = _frozen(matrix, (DIM, DIM))
        if np.max(np.abs(m - m.conj().T)) > atol:
            raise ValueError("operator is not Hermitian")
        self.matrix = m

    def __repr__(self):
        return f"HermitianOp3(\n{np.array2string(self.matrix, precision=6)})"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __add__(self, other):
        return HermitianOp3(self.matrix + np.asarray(other.matrix))

    def __mul__(self, scalar):
        return HermitianOp3(self.matrix * float(scalar))

    __rmul__ = __mul__

    def eigh(self):
        """Eigenvalues in ascending order and eigenvectors as columns."""
        return np.linalg.eigh(self.matrix)


class Unitary3:
    """3x3 unitary propagator."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, atol: float = DERIVED_ATOL):
        m = _frozen(matrix, (DIM, DIM))
        defect = np.linalg.norm(m.conj().T @ m - np.eye(DIM))
        if defect > atol:
            raise ValueError(f"matrix is not unitary (defect = {defect:.3e})")
        self.matrix = m

    def __repr__(self):
        return f"Unitary3(\n{np.array2string(self.matrix, precision=6)})"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __matmul__(self, other):
        if isinstance(other, Unitary3):
            return Unitary3(self.matrix @ other.matrix)
        if isinstance(other, StateVec3):
            return apply(self, other)
        return NotImplemented

    @property
    def dagger(self) -> "Unitary3":
        return Unitary3(self.matrix.conj().T)

    @classmethod
    def identity(cls) -> "Unitary3":
        return cls(np.eye(DIM))


class DensityMatrix3:
    """Mixed state: Hermitian, unit trace, positive semidefinite (to ``atol``)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, atol: float = DERIVED_ATOL):
        m = _frozen(matrix, (DIM, DIM))
        if np.max(np.abs(m - m.conj().T)) > atol:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > atol:
            raise ValueError(f"density matrix trace is {tr.real:.12g}, expected 1")
        lowest = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if lowest < -atol:
            raise ValueError(f"density matrix has negative eigenvalue {lowest:.3e}")
        self.matrix = m

    def __repr__(self):
        return f"DensityMatrix3(\n{np.array2string(self.matrix, precision=6)})"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.matrix)).copy()

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def basis(level: int) -> StateVec3:
    """The bare state |level>, ``level`` in 1..3."""
    _check_level(level)
    v = np.zeros(DIM, dtype=complex)
    v[level - 1] = 1.0
    return StateVec3(v)


def _check_level(level):
    if not isinstance(level, (int, np.integer)) or not 1 <= level <= DIM:
        raise IndexError(f"level must be 1, 2 or 3, got {level!r}")


def normalize(v) -> StateVec3:
    """Scale a raw complex 3-vector to unit norm.

    >>> normalize([1, 0, -1j]).amplitudes.round(6)
    array([0.707107+0.j      , 0.      +0.j      , 0.      -0.707107j])
    """
    arr = np.asarray(v, dtype=complex)
    if arr.shape != (DIM,):
        raise ValueError(f"expected 3 amplitudes, got shape {arr.shape}")
    peak = np.max(np.abs(arr))
    if not np.isfinite(peak) or peak == 0.0:
        raise DegenerateStateError("degenerate state: cannot normalize a zero vector")
    arr = arr / peak  # guards against under/overflow in the norm
    return StateVec3(arr / np.linalg.norm(arr))


def inner(a: StateVec3, b: StateVec3) -> complex:
    """<a|b>."""
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVec3, b: StateVec3) -> float:
    """Phase-insensitive overlap |<a|b>|^2, clipped to [0, 1]."""
    f = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(max(f, 0.0), 1.0))


def population(psi: StateVec3, level: int) -> float:
    _check_level(level)
    return float(abs(psi.amplitudes[level - 1]) ** 2)


def expm_hermitian(h: HermitianOp3, duration: float) -> Unitary3:
    """exp(-i H t) from the eigendecomposition of ``H``."""
    evals, evecs = np.linalg.eigh(h.matrix)
    phases = np.exp(-1j * evals * duration)
    return Unitary3((evecs * phases) @ evecs.conj().T)


def apply(u: Unitary3, psi: StateVec3) -> StateVec3:
    return StateVec3(u.matrix @ psi.amplitudes)
