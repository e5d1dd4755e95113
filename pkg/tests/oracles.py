"""Independent reference computations for the test-suite.

Nothing here imports the package; every oracle is written from first
principles so it can check the production path rather than echo it.
"""

import math

import numpy as np

E = np.eye(3, dtype=complex)


def ket(level):
    return E[level - 1].copy()


def expm_taylor(a, terms=30):
    """exp(a) by scaling and squaring with a truncated Taylor series."""
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a, 1)
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    x = a / 2**s
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def rotation_13(pulse_area, phase=0.0, sign=1):
    """Closed-form propagator of W (e^{i phase}|1><3| + h.c.), integrated area ``pulse_area``."""
    c, s = math.cos(pulse_area), math.sin(pulse_area)
    w = sign * np.exp(1j * phase)
    u = np.zeros((3, 3), dtype=complex)
    u[1, 1] = 1.0
    u[0, 0] = u[2, 2] = c
    u[0, 2] = -1j * s * w
    u[2, 0] = -1j * s * np.conj(w)
    return u


def rotation_two_field(area12, area23, phase12, phase23=0.0):
    """Closed-form propagator of a|1><2| + b|2><3| + h.c. with integrated a, b."""
    a = area12 * np.exp(1j * phase12)
    b = area23 * np.exp(1j * phase23)
    omega = math.hypot(abs(a), abs(b))
    if omega == 0:
        return np.eye(3, dtype=complex)
    bright = np.array([a, 0.0, np.conj(b)]) / omega
    two = ket(2)
    p_b = np.outer(bright, bright.conj())
    p_2 = np.outer(two, two)
    flip = np.outer(bright, two) + np.outer(two, bright.conj())
    return (E - p_b - p_2) + math.cos(omega) * (p_b + p_2) - 1j * math.sin(omega) * flip


def protocol_states(a1, a12, a23, a3, phase12=math.pi / 2, phase23=0.0, phase13=0.0):
    """Final (left, right) state vectors of the three-step sequence from |1>."""
    out = []
    for sign in (1, -1):
        u = (
            rotation_13(a3, phase13, sign)
            @ rotation_two_field(a12, a23, phase12, phase23)
            @ rotation_13(a1, phase13, sign)
        )
        out.append(u @ ket(1))
    return out


def protocol_contrast(*args, **kwargs):
    left, right = protocol_states(*args, **kwargs)
    pl, pr = abs(left) ** 2, abs(right) ** 2
    return 0.5 * ((pl[1] - pr[1]) + (pr[0] - pl[0]))


IDEAL = (math.pi / 4, math.pi / (2 * math.sqrt(2)), math.pi / (2 * math.sqrt(2)), 3 * math.pi / 4)


def scaled(eps, steps=(1, 1, 1)):
    """Ideal areas with uniform scale (1+eps) applied to the selected steps."""
    s1, s2, s3 = ((1 + eps) if on else 1.0 for on in steps)
    a1, a12, a23, a3 = IDEAL
    return (a1 * s1, a12 * s2, a23 * s2, a3 * s3)
