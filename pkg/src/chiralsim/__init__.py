"""Dynamic discrimination of left- and right-handed molecules modelled as
cyclic three-level systems.

The package is organised bottom-up:

- :mod:`chiralsim.quantum`     states, operators, spectral matrix exponential
- :mod:`chiralsim.hamiltonian` Rabi sets, chirality sign rule, dressed states
- :mod:`chiralsim.pulses`      envelopes, pulse areas, schedules
- :mod:`chiralsim.evolution`   exact, RK4 and Lindblad engines
- :mod:`chiralsim.protocol`    the three-step sequence and its contrast
- :mod:`chiralsim.robustness`  error-model sweeps
- :mod:`chiralsim.cli`         command-line front end
"""

__version__ = "0.1.0"

from .quantum import (
    DensityMatrix3,
    HermitianOp3,
    StateVec3,
    Unitary3,
    apply,
    basis,
    expm_hermitian,
    fidelity,
    normalize,
    population,
)
from .hamiltonian import (
    Chirality,
    DetuningSet,
    RabiSet,
    bright_state,
    build_detuned,
    build_resonant,
    chirality_signed,
    dark_state,
    dressed_eigensystem,
)
from .pulses import Envelope, PulseSegment, Schedule, Shape, area, calibrate_amplitude, rotation_angle
from .evolution import (
    CollapseChannel,
    TimeDependentGenerator,
    default_channels,
    evolve_lindblad,
    evolve_piecewise,
    evolve_rk4,
)
from .protocol import ProtocolSpec, build_protocol, checkpoints, contrast, run_both, run_protocol
from .robustness import ErrorModel, apply_error, cartesian_grid, run_sweep
