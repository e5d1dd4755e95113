import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from chiralsim.hamiltonian import (
    BrightStateUndefined,
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
from chiralsim.quantum import basis, fidelity, inner, normalize

cplx = st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False)
rabis = st.builds(RabiSet, cplx, cplx, cplx)

W0 = 1.3
EQ7 = RabiSet(1j * W0, W0, 0)


class TestChirality:
    def test_left_unchanged(self):
        r = RabiSet(W0, W0, W0)
        assert chirality_signed(r, Chirality.LEFT) == r

    def test_right_negates_13(self):
        assert chirality_signed(RabiSet(W0, W0, W0), Chirality.RIGHT) == RabiSet(W0, W0, -W0)

    def test_zero(self):
        assert chirality_signed(RabiSet(), Chirality.RIGHT) == RabiSet()

    @given(rabis)
    def test_equivariance(self, r):
        left = build_resonant(r).matrix
        right = build_resonant(chirality_signed(r, Chirality.RIGHT)).matrix
        flip = np.ones((3, 3))
        flip[0, 2] = flip[2, 0] = -1
        assert np.array_equal(right, left * flip)


class TestResonant:
    def test_single_13(self):
        h = build_resonant(RabiSet(0, 0, 0.7)).matrix
        expected = np.zeros((3, 3))
        expected[0, 2] = expected[2, 0] = 0.7
        assert np.array_equal(h, expected)

    def test_two_field_form(self):
        h = build_resonant(EQ7).matrix
        b = np.array([1j, 0, 1]) / np.sqrt(2)
        two = np.array([0, 1, 0])
        expected = np.sqrt(2) * W0 * (np.outer(b, two) + np.outer(two, b.conj()))
        assert np.allclose(h, expected, atol=1e-14)

    def test_zero(self):
        assert not build_resonant(RabiSet()).matrix.any()

    @given(rabis)
    def test_hermitian(self, r):
        h = build_resonant(r).matrix
        assert np.array_equal(h, h.conj().T)

    def test_dark_state_annihilated(self):
        h = build_resonant(EQ7).matrix
        dark = np.array([1, 0, 1j]) / np.sqrt(2)
        assert np.linalg.norm(h @ dark) <= 1e-12


class TestDetuned:
    def test_resonance_limit(self):
        r = RabiSet(0.3 + 0.2j, -1.1, 0.4j)
        assert np.array_equal(build_detuned(r, DetuningSet()).matrix, build_resonant(r).matrix)

    def test_no_coupling(self):
        d = 0.37
        h = build_detuned(RabiSet(), DetuningSet(d, 0, d)).matrix
        assert np.array_equal(h, np.diag([0, -d, -d]))

    def test_eigenvalues_vs_dense_solver(self):
        det = DetuningSet(0, 0, 0.1 * W0)
        ours = np.linalg.eigvalsh(build_detuned(EQ7, det).matrix)
        handmade = np.array(
            [[0, 1j * W0, 0], [-1j * W0, 0, W0], [0, W0, -0.1 * W0]], dtype=complex
        )
        ref = np.sort(scipy.linalg.eigvals(handmade).real)
        assert np.allclose(ours, ref, atol=1e-10, rtol=0)

    def test_open_loop_rotates_23(self):
        det = DetuningSet(0.2, 0.5, 0.1)  # mismatch 0.6
        r = RabiSet(0, 1.0, 0)
        h = build_detuned(r, det, t=2.0).matrix
        assert h[1, 2] == pytest.approx(np.exp(1j * 0.6 * 2.0), abs=1e-15)
        closed = DetuningSet(0.2, 0.5, 0.7)
        assert build_detuned(r, closed, t=2.0).matrix[1, 2] == 1.0


class TestBrightDark:
    def test_bright_eq7(self):
        expected = normalize([1j, 0, 1])
        assert fidelity(bright_state(EQ7), expected) == pytest.approx(1, abs=1e-12)
        assert np.allclose(bright_state(EQ7).amplitudes, expected.amplitudes)

    def test_single_coupling(self):
        assert np.allclose(bright_state(RabiSet(W0, 0, 0)).amplitudes, [1, 0, 0])

    def test_undefined(self):
        with pytest.raises(BrightStateUndefined, match="bright state undefined"):
            bright_state(RabiSet())

    @given(cplx, cplx)
    def test_bright_orthogonal_to_zero_mode(self, a, b):
        if abs(a) + abs(b) < 1e-3:
            return
        r = RabiSet(a, b, 0)
        zero_mode = dressed_eigensystem(r)[0][1]
        assert abs(inner(bright_state(r), zero_mode)) <= 1e-12
        assert abs(inner(bright_state(r), dark_state(r))) <= 1e-12


class TestDressed:
    def test_eigenvalues(self):
        values = [e for e, _ in dressed_eigensystem(EQ7)]
        assert values == pytest.approx([0, np.sqrt(2) * W0, -np.sqrt(2) * W0], abs=1e-12)

    def test_zero_mode_is_dark(self, plus_i3):
        assert fidelity(dressed_eigensystem(EQ7)[0][1], plus_i3) == pytest.approx(1, abs=1e-12)

    def test_bright_modes(self):
        b = np.array([1j, 0, 1]) / np.sqrt(2)
        two = np.array([0, 1, 0])
        _, plus = dressed_eigensystem(EQ7)[1]
        _, minus = dressed_eigensystem(EQ7)[2]
        assert fidelity(plus, normalize(two + b)) == pytest.approx(1, abs=1e-12)
        assert fidelity(minus, normalize(two - b)) == pytest.approx(1, abs=1e-12)

    def test_degenerate(self):
        pairs = dressed_eigensystem(RabiSet())
        assert [e for e, _ in pairs] == [0, 0, 0]
        for k, (_, v) in enumerate(pairs, start=1):
            assert fidelity(v, basis(k)) == 1

    @given(cplx, cplx)
    def test_eigenpairs_satisfy_definition(self, a, b):
        r = RabiSet(a, b, 0)
        h = build_resonant(r).matrix
        for value, vec in dressed_eigensystem(r):
            residual = h @ vec.amplitudes - value * vec.amplitudes
            assert np.linalg.norm(residual) <= 1e-12 * max(1.0, abs(a) + abs(b))

    def test_requires_13_off(self):
        with pytest.raises(ValueError):
            dressed_eigensystem(RabiSet(1, 1, 1))
