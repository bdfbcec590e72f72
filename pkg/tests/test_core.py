import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptcpt.core import (
    PARITY,
    CPTFrame,
    Prescription,
    PTHamiltonian,
    build_c_spectral,
    c_operator,
    check_alpha,
    cpt_frame,
    density_matrix,
    eigensystem,
    hamiltonian_matrix,
    inner,
    phi_of,
    pt_inner,
    time_reverse,
    transition_probability,
)
from ptcpt.composite import evolution_operator
from ptcpt.exceptions import BrokenSymmetryError, NormalizationError

ALPHA_GRID = [0.0, math.pi / 12, -math.pi / 12, math.pi / 6, -math.pi / 6, math.pi / 4, -math.pi / 4,
              0.49 * math.pi * 0.99, -0.49 * math.pi * 0.99]
I2 = np.eye(2)

alphas = st.floats(min_value=-1.4, max_value=1.4, allow_nan=False)
scales = st.floats(min_value=0.1, max_value=5.0) | st.floats(min_value=-5.0, max_value=-0.1)


def random_state(rng, n=2):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


class TestHamiltonian:
    def test_hermitian_limit(self):
        np.testing.assert_array_equal(hamiltonian_matrix(PTHamiltonian(1, 0)), PARITY)

    def test_scaled(self):
        h = PTHamiltonian(2, math.pi / 6).matrix
        np.testing.assert_allclose(h, [[1j, 2], [2, -1j]], atol=1e-15)

    def test_energies_and_tau(self):
        h = PTHamiltonian(2, math.pi / 3)
        assert h.e_plus == pytest.approx(1.0, abs=1e-15)
        assert h.e_minus == pytest.approx(-1.0, abs=1e-15)
        assert h.tau == pytest.approx(math.pi / 2, abs=1e-15)

    def test_exceptional_point_rejected(self):
        with pytest.raises(BrokenSymmetryError, match="unbroken PT band"):
            PTHamiltonian(1, math.pi / 2)

    def test_broken_region_rejected(self):
        with pytest.raises(BrokenSymmetryError):
            check_alpha(1.6)

    def test_zero_scale_rejected(self):
        with pytest.raises(ValueError):
            PTHamiltonian(0, 0.1)

    def test_pt_symmetry(self):
        # P H* P = H is the defining symmetry
        for a in ALPHA_GRID:
            h = hamiltonian_matrix(PTHamiltonian(1.3, a))
            np.testing.assert_allclose(PARITY @ np.conj(h) @ PARITY, h, atol=1e-15)


class TestEigensystem:
    def test_hermitian_limit(self):
        spec = eigensystem(PTHamiltonian(1, 0))
        np.testing.assert_allclose(spec.psi_plus, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
        np.testing.assert_allclose(spec.psi_minus, [1j / math.sqrt(2), -1j / math.sqrt(2)], atol=1e-15)

    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_eigen_equations(self, alpha):
        h = PTHamiltonian(0.8, alpha)
        m = hamiltonian_matrix(h)
        for e, v in eigensystem(h).pairs():
            np.testing.assert_allclose(m @ v, e * v, atol=1e-12)

    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_pt_reality(self, alpha):
        # both eigenvectors are PT-invariant; the PT norm of psi- is still -1
        spec = eigensystem(PTHamiltonian(1, alpha))
        for v in (spec.psi_plus, spec.psi_minus):
            np.testing.assert_allclose(PARITY @ np.conj(v), v, atol=1e-14)

    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_cpt_orthonormality(self, alpha):
        h = PTHamiltonian(1, alpha)
        frame = cpt_frame(h)
        vecs = [v for _, v in eigensystem(h).pairs()]
        gram = np.array([[np.vdot(phi_of(vj, frame), vk) for vk in vecs] for vj in vecs])
        np.testing.assert_allclose(gram, I2, atol=1e-12)

    def test_hilbert_overlap_is_tan(self):
        a = math.pi / 6
        spec = eigensystem(PTHamiltonian(1, a))
        assert abs(np.vdot(spec.psi_plus, spec.psi_minus) - math.tan(a)) < 1e-12


class TestCOperator:
    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_spectral_equals_closed_form(self, alpha):
        spectral = build_c_spectral(eigensystem(PTHamiltonian(1, alpha)))
        np.testing.assert_allclose(spectral, c_operator(alpha), atol=1e-12)

    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_involution_and_commutation(self, alpha):
        c = c_operator(alpha)
        h = hamiltonian_matrix(PTHamiltonian(1, alpha))
        np.testing.assert_allclose(c @ c, I2, atol=1e-12)
        np.testing.assert_allclose(c @ h - h @ c, np.zeros((2, 2)), atol=1e-12)

    def test_hermitian_limit_is_parity(self):
        np.testing.assert_array_equal(c_operator(0), PARITY)

    def test_pi_over_six(self):
        r = 1 / math.sqrt(3)
        expected = np.array([[1j * r, 2 * r], [2 * r, -1j * r]])
        np.testing.assert_allclose(c_operator(math.pi / 6), expected, atol=1e-15)

    def test_evolution_at_tau_is_minus_i_c(self):
        for a in ALPHA_GRID:
            h = PTHamiltonian(1.7, a)
            np.testing.assert_allclose(evolution_operator(h), -1j * c_operator(a), atol=1e-12)

    def test_dagger(self):
        frame = cpt_frame(PTHamiltonian(1, math.pi / 6))
        r = 1 / math.sqrt(3)
        np.testing.assert_allclose(frame.c_dagger_op, [[-1j * r, 2 * r], [2 * r, 1j * r]], atol=1e-15)
        np.testing.assert_allclose(frame.c_dagger_op @ PARITY @ frame.c_op, PARITY, atol=1e-12)

    def test_metric_positive(self):
        for a in ALPHA_GRID:
            metric = cpt_frame(PTHamiltonian(1, a)).metric
            np.testing.assert_allclose(metric, metric.conj().T, atol=1e-14)
            assert np.all(np.linalg.eigvalsh(metric) > 0)


class TestFrame:
    def test_read_only(self):
        frame = cpt_frame(PTHamiltonian(1, 0.3))
        with pytest.raises(ValueError):
            frame.c_op[0, 0] = 0

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            CPTFrame(np.eye(3), np.eye(3), np.eye(3))

    def test_phi_of_plus_state(self):
        a = math.pi / 6
        h = PTHamiltonian(1, a)
        frame = cpt_frame(h)
        psi = eigensystem(h).psi_plus
        # C^dag P psi+ = conj(psi+) scaled, from C^dag P = conj(C P)
        expected = np.conj(c_operator(a)) @ PARITY @ psi
        np.testing.assert_allclose(phi_of(psi, frame), expected, atol=1e-15)
        assert abs(np.vdot(phi_of(psi, frame), psi) - 1) < 1e-12

    def test_phi_dimension_mismatch(self):
        frame = cpt_frame(PTHamiltonian(1, 0.3))
        with pytest.raises(ValueError):
            phi_of(np.ones(4), frame)


class TestInnerProduct:
    def test_hermitian_limit(self):
        rng = np.random.default_rng(10)
        frame = cpt_frame(PTHamiltonian(1, 0))
        for _ in range(20):
            a, b = random_state(rng), random_state(rng)
            assert abs(inner(a, b, frame) - np.vdot(a, b)) < 1e-14

    def test_hilbert_branch(self):
        frame = cpt_frame(PTHamiltonian(1, 0.5))
        a, b = np.array([1, 1j]), np.array([2, 1])
        assert inner(a, b, frame, Prescription.HILBERT) == np.vdot(a, b)

    def test_conjugate_symmetry_and_positivity(self):
        rng = np.random.default_rng(11)
        frame = cpt_frame(PTHamiltonian(1, 0.9))
        for _ in range(50):
            a, b = random_state(rng), random_state(rng)
            assert abs(inner(a, b, frame) - np.conj(inner(b, a, frame))) < 1e-12
            norm = inner(a, a, frame)
            assert abs(norm.imag) < 1e-12 and norm.real > 0

    def test_pt_inner_is_indefinite(self):
        spec = eigensystem(PTHamiltonian(1, 0.4))
        assert pt_inner(spec.psi_plus, spec.psi_plus) == pytest.approx(1, abs=1e-12)
        assert pt_inner(spec.psi_minus, spec.psi_minus) == pytest.approx(-1, abs=1e-12)

    def test_time_reverse(self):
        np.testing.assert_array_equal(time_reverse([1j, 2]), [-1j, 2])

    def test_cpt_unitarity_of_evolution(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            a_val = rng.uniform(-1.4, 1.4)
            h = PTHamiltonian(rng.uniform(0.5, 2), a_val)
            frame = cpt_frame(h)
            u = evolution_operator(h, rng.uniform(0, 5))
            a, b = random_state(rng), random_state(rng)
            assert abs(inner(u @ a, u @ b, frame) - inner(a, b, frame)) <= 1e-10

    @settings(max_examples=60, deadline=None)
    @given(alpha=alphas, s=scales, t=st.floats(min_value=-10, max_value=10))
    def test_cpt_unitarity_property(self, alpha, s, t):
        h = PTHamiltonian(s, alpha)
        frame = cpt_frame(h)
        u = evolution_operator(h, t)
        a, b = np.array([1, 0.3j]), np.array([0.2, 1 - 1j])
        scale = abs(inner(a, a, frame)) + abs(inner(b, b, frame))
        assert abs(inner(u @ a, u @ b, frame) - inner(a, b, frame)) <= 1e-10 * scale


class TestTransitionProbability:
    def setup_method(self):
        self.h = PTHamiltonian(1, math.pi / 6)
        self.frame = cpt_frame(self.h)
        self.spec = eigensystem(self.h)

    def test_self(self):
        assert transition_probability(self.spec.psi_plus, self.spec.psi_plus, self.frame) == pytest.approx(1, abs=1e-12)

    def test_orthogonal(self):
        assert transition_probability(self.spec.psi_plus, self.spec.psi_minus, self.frame) == pytest.approx(0, abs=1e-12)

    def test_basis_state(self):
        p = transition_probability(self.spec.psi_plus, np.array([1, 0]), self.frame)
        assert p == pytest.approx(0.5, abs=1e-12)

    def test_zero_vector(self):
        with pytest.raises(NormalizationError):
            transition_probability(np.zeros(2), self.spec.psi_plus, self.frame)

    @settings(max_examples=60, deadline=None)
    @given(alpha=alphas, x=st.floats(-3, 3), y=st.floats(-3, 3))
    def test_bounded(self, alpha, x, y):
        frame = cpt_frame(PTHamiltonian(1, alpha))
        a = np.array([1, x + 1j * y])
        b = np.array([y - 0.5j, 1])
        p = transition_probability(a, b, frame)
        assert -1e-12 <= p <= 1 + 1e-10


class TestDensityMatrix:
    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_cpt_mixture_is_maximally_mixed(self, alpha):
        h = PTHamiltonian(1, alpha)
        frame = cpt_frame(h)
        states = [v for _, v in eigensystem(h).pairs()]
        rho = density_matrix(states, [0.5, 0.5], frame)
        np.testing.assert_allclose(rho, I2 / 2, atol=1e-12)

    @pytest.mark.parametrize("alpha", ALPHA_GRID)
    def test_cpt_pure_state_idempotent(self, alpha):
        h = PTHamiltonian(1, alpha)
        frame = cpt_frame(h)
        for _, v in eigensystem(h).pairs():
            rho = density_matrix([v], [1.0], frame)
            np.testing.assert_allclose(rho @ rho, rho, atol=1e-12)
            assert abs(np.trace(rho) - 1) < 1e-12

    def test_hilbert_pure_state_not_idempotent(self):
        h = PTHamiltonian(1, math.pi / 4)
        frame = cpt_frame(h)
        rho = density_matrix([eigensystem(h).psi_plus], [1.0], frame, Prescription.HILBERT)
        assert np.max(np.abs(rho @ rho - rho)) >= 1e-3

    def test_weights_must_sum_to_one(self):
        frame = cpt_frame(PTHamiltonian(1, 0.2))
        with pytest.raises(ValueError):
            density_matrix([np.array([1, 0]), np.array([0, 1])], [0.5, 0.6], frame)

    def test_negative_weight(self):
        frame = cpt_frame(PTHamiltonian(1, 0.2))
        with pytest.raises(ValueError):
            density_matrix([np.array([1, 0]), np.array([0, 1])], [1.5, -0.5], frame)

    def test_length_mismatch(self):
        frame = cpt_frame(PTHamiltonian(1, 0.2))
        with pytest.raises(ValueError):
            density_matrix([np.array([1, 0])], [0.5, 0.5], frame)
