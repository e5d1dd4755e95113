"""
The dark state of step II
=========================

With W12 = i W0 and W23 = W0 the two-field Hamiltonian has a zero-energy
eigenvector (|1> + i|3>)/sqrt(2) and two bright combinations at +-sqrt(2) W0.
Step I prepares exactly that dark vector for one enantiomer only.
"""

import math

import numpy as np

from chiralsim import RabiSet, dressed_eigensystem, normalize
from chiralsim.quantum import fidelity

np.set_printoptions(precision=4, suppress=True)

for w0 in (0.1, 1.0, 10.0):
    pairs = dressed_eigensystem(RabiSet(1j * w0, w0, 0.0))
    energies = [e for e, _ in pairs]
    print(f"W0 = {w0:5}: energies {np.round(energies, 12)} (sqrt(2) W0 = {math.sqrt(2) * w0:.6f})")

dark = pairs[0][1]
print("dark vector:", dark.amplitudes)
print("overlap with (|1> + i|3>)/sqrt 2:", fidelity(dark, normalize([1, 0, 1j])))
print("overlap with (|1> - i|3>)/sqrt 2:", fidelity(dark, normalize([1, 0, -1j])))
