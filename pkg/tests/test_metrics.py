import numpy as np
import pytest

from hetverify.circuits import measure_in_basis
from hetverify.metrics import (
    fidelity,
    matrix_sqrt_psd,
    total_variation_distance,
    trace_distance,
)
from hetverify.states import DensityMatrix, ProbabilityDistribution, StateVector

from conftest import random_density

SQRT_HALF = 1 / np.sqrt(2)


def ket(bits):
    return StateVector.computational(bits).density()


def plus():
    return StateVector(1, np.array([1, 1]) / np.sqrt(2)).density()


class TestMatrixSqrt:
    def test_identity(self):
        np.testing.assert_allclose(matrix_sqrt_psd(np.eye(4)), np.eye(4))

    def test_diagonal(self):
        np.testing.assert_allclose(matrix_sqrt_psd(np.diag([4.0, 9.0])),
                                   np.diag([2.0, 3.0]))

    def test_projector_is_own_root(self):
        proj = plus().matrix
        np.testing.assert_allclose(matrix_sqrt_psd(proj), proj, atol=1e-12)

    def test_reconstructs_random_psd(self, rng):
        for num_qubits in (1, 2, 3, 4, 5):
            rho = random_density(rng, num_qubits)
            root = matrix_sqrt_psd(rho.matrix)
            np.testing.assert_allclose(root @ root, rho.matrix, atol=1e-8)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            matrix_sqrt_psd(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError, match="PSD"):
            matrix_sqrt_psd(np.diag([1.0, -0.1]))


class TestFidelity:
    def test_self_fidelity_is_one(self, rng):
        rho = random_density(rng, 2)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_states(self):
        assert fidelity(ket("0"), ket("1")) == pytest.approx(0.0, abs=1e-12)

    def test_zero_vs_plus(self):
        assert fidelity(ket("0"), plus()) == pytest.approx(SQRT_HALF, abs=1e-10)

    def test_mixed_vs_pure(self):
        assert fidelity(DensityMatrix.maximally_mixed(1), ket("0")) == \
            pytest.approx(SQRT_HALF, abs=1e-10)

    def test_symmetric_for_physical_states(self, rng):
        a, b = random_density(rng, 2), random_density(rng, 2)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-9)

    def test_unphysical_input_can_exceed_one(self):
        raw = DensityMatrix(1, np.diag([1.2, -0.2]))
        assert fidelity(raw, ket("0")) == pytest.approx(np.sqrt(1.2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            fidelity(ket("0"), ket("00"))


class TestTraceDistance:
    def test_identical(self, rng):
        rho = random_density(rng, 2)
        assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal(self):
        assert trace_distance(ket("0"), ket("1")) == pytest.approx(1.0)

    def test_pure_state_formula(self):
        assert trace_distance(ket("0"), plus()) == pytest.approx(SQRT_HALF)


class TestTotalVariationDistance:
    def test_identical(self):
        p = ProbabilityDistribution(("0", "1"), [0.3, 0.7])
        assert total_variation_distance(p, p) == 0.0

    def test_disjoint(self):
        p = ProbabilityDistribution(("0", "1"), [1.0, 0.0])
        q = ProbabilityDistribution(("0", "1"), [0.0, 1.0])
        assert total_variation_distance(p, q) == 1.0

    def test_direct_sum(self):
        p = ProbabilityDistribution(("0", "1"), [0.75, 0.25])
        q = ProbabilityDistribution(("0", "1"), [0.5, 0.5])
        assert total_variation_distance(p, q) == pytest.approx(0.25)

    def test_mismatched_outcomes(self):
        p = ProbabilityDistribution(("0", "1"), [0.5, 0.5])
        q = ProbabilityDistribution(("00", "01"), [0.5, 0.5])
        with pytest.raises(ValueError, match="outcome"):
            total_variation_distance(p, q)


class TestMetricAxiomsFuzz:
    """Random-state sweeps of the axioms and inequality chains."""

    CASES = 1000

    def test_axioms_and_inequalities(self, rng):
        for i in range(self.CASES):
            n = 1 + i % 3
            a, b = random_density(rng, n), random_density(rng, n)
            f = fidelity(a, b)
            d = trace_distance(a, b)
            assert -1e-10 <= f <= 1 + 1e-10
            assert -1e-12 <= d <= 1 + 1e-12
            # Fuchs-van de Graaf chain
            assert 1 - f <= d + 1e-8
            assert d <= np.sqrt(max(0.0, 1 - f * f)) + 1e-8
            # measurement is a contraction
            tvd = total_variation_distance(
                measure_in_basis(a, "Z" * n), measure_in_basis(b, "Z" * n))
            assert tvd <= d + 1e-10

    def test_triangle_inequality(self, rng):
        for _ in range(300):
            a, b, c = (random_density(rng, 2) for _ in range(3))
            assert trace_distance(a, c) <= \
                trace_distance(a, b) + trace_distance(b, c) + 1e-10
