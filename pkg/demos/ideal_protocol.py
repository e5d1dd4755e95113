"""
Telling the two enantiomers apart, step by step
================================================

Both species start in |1>. The only difference between them is the sign of
the 1-3 coupling, and the three pulses turn that sign into a difference in
which level ends up populated.
"""

import numpy as np

from chiralsim import Chirality, ProtocolSpec, checkpoints, run_both

np.set_printoptions(precision=4, suppress=True)

spec = ProtocolSpec()  # rect pulses, unit durations, ideal areas

# Follow the states through the three steps.
for chirality in (Chirality.LEFT, Chirality.RIGHT):
    print(chirality.value)
    for k, psi in enumerate(checkpoints(spec, chirality), start=1):
        print(f"  after step {k}: amplitudes {psi.amplitudes}  populations {psi.populations()}")

# Left ends in |2>, right back in |1>.
result = run_both(spec)
print("contrast:", round(result.contrast, 12))

# The result does not depend on the envelope, only on the areas.
for shape in ("rect", "sin2", "gaussian"):
    print(f"{shape:9s} C = {run_both(ProtocolSpec(shape=shape)).contrast:.12f}")
