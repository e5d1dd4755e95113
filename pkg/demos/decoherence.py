"""
Spontaneous decay during the sequence
=====================================

Add equal decay rates on 3->1, 3->2 and 2->1 and integrate the master
equation. The contrast falls smoothly with gamma; the trace stays at 1.
"""

from chiralsim import ProtocolSpec, run_both
from chiralsim.evolution import default_channels

for gamma in (0.0, 0.01, 0.03, 0.1, 0.3):
    spec = ProtocolSpec(decay=default_channels(gamma) if gamma else ())
    res = run_both(spec, engine="lindblad")
    purity = res.left.state.purity()
    print(
        f"gamma {gamma:<5} C = {res.contrast:.6f}   "
        f"P_L(2) = {res.left.populations[1]:.6f}   purity(L) = {purity:.6f}   trace drift {res.left.drift:.1e}"
    )
