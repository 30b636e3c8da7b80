import math

import numpy as np
import pytest

from rqichan.channel import squeeze_fock
from rqichan.fock import (
    DensityMatrix,
    ModeLabel,
    PureState,
    hermitian_eigendecomposition,
    partial_trace,
    tensor_product,
)


def random_density(rng, modes):
    dim = int(np.prod([m.cutoff for m in modes]))
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return DensityMatrix(tuple(modes), rho / np.trace(rho).real)


class TestModeLabel:
    def test_rejects_unknown_name(self):
        with pytest.raises(ValueError):
            ModeLabel("B", 4)

    def test_rejects_bad_cutoff(self):
        with pytest.raises(ValueError):
            ModeLabel("R", 0)


class TestTensorProduct:
    def test_trace_multiplicative(self):
        rng = np.random.default_rng(1)
        a = random_density(rng, [ModeLabel("A", 2)])
        b = random_density(rng, [ModeLabel("R", 3)])
        ab = tensor_product(a, b)
        assert ab.trace() == pytest.approx(a.trace() * b.trace(), abs=1e-12)
        assert ab.dim == a.dim * b.dim

    def test_diagonal_products(self):
        p, q = 0.3, 0.8
        a = DensityMatrix((ModeLabel("A", 2),), np.diag([p, 1 - p]))
        b = DensityMatrix((ModeLabel("R", 2),), np.diag([q, 1 - q]))
        expected = [p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)]
        assert np.allclose(np.diag(tensor_product(a, b).entries).real, expected)

    def test_label_collision(self):
        a = DensityMatrix((ModeLabel("A", 2),), np.eye(2) / 2)
        with pytest.raises(ValueError):
            tensor_product(a, a)


class TestPartialTrace:
    def test_bell_state(self):
        vec = np.zeros(4)
        vec[0] = vec[3] = 1 / math.sqrt(2)
        rho = DensityMatrix((ModeLabel("A", 2), ModeLabel("R", 2)), np.outer(vec, vec))
        reduced = partial_trace(rho, ["R"])
        assert np.allclose(reduced.entries, np.eye(2) / 2)

    def test_product_state_recovers_factor(self):
        rng = np.random.default_rng(2)
        a = random_density(rng, [ModeLabel("A", 2)])
        b = random_density(rng, [ModeLabel("R", 3)])
        back = partial_trace(tensor_product(a, b), ["R"])
        assert np.abs(back.entries - a.entries).max() < 1e-12

    def test_two_mode_squeezed_vacuum_weights(self):
        r, k = 0.9, 40
        reduced = squeeze_fock(0, r, k).reduced_density(["R"])
        n = np.arange(k)
        expected = math.tanh(r) ** (2 * n) / math.cosh(r) ** 2
        assert np.abs(np.diag(reduced.entries).real - expected).max() < 1e-12
        assert np.abs(reduced.entries - np.diag(np.diag(reduced.entries))).max() < 1e-14

    def test_sequential_equals_joint_discard(self):
        rng = np.random.default_rng(3)
        modes = [ModeLabel("A", 2), ModeLabel("R", 3), ModeLabel("Rbar", 2)]
        rho = random_density(rng, modes)
        seq = partial_trace(partial_trace(rho, ["A"]), ["Rbar"])
        joint = partial_trace(rho, ["A", "Rbar"])
        assert np.abs(seq.entries - joint.entries).max() < 1e-12

    def test_trace_all_modes_gives_scalar(self):
        rng = np.random.default_rng(4)
        rho = random_density(rng, [ModeLabel("A", 2), ModeLabel("R", 2)])
        scalar = partial_trace(rho, ["A", "R"])
        assert scalar.modes == ()
        assert scalar.entries[0, 0].real == pytest.approx(rho.trace(), abs=1e-12)

    def test_unknown_label(self):
        rng = np.random.default_rng(5)
        rho = random_density(rng, [ModeLabel("A", 2)])
        with pytest.raises(ValueError):
            partial_trace(rho, ["R"])


class TestEigendecomposition:
    def test_diagonal_input_sorted(self):
        rho = DensityMatrix((ModeLabel("A", 2), ModeLabel("R", 2)), np.diag([0.1, 0.4, 0.3, 0.2]))
        eigs, _ = hermitian_eigendecomposition(rho)
        assert np.allclose(eigs, [0.4, 0.3, 0.2, 0.1])

    def test_pure_projector(self):
        vec = np.array([0.6, 0.8])
        rho = DensityMatrix((ModeLabel("A", 2),), np.outer(vec, vec))
        eigs, _ = hermitian_eigendecomposition(rho)
        assert eigs == pytest.approx([1.0, 0.0], abs=1e-12)

    def test_trace_identities_random(self):
        rng = np.random.default_rng(6)
        rho = random_density(rng, [ModeLabel("A", 6)])
        eigs, vecs = hermitian_eigendecomposition(rho)
        assert eigs.sum() == pytest.approx(rho.trace(), abs=1e-10)
        assert (eigs**2).sum() == pytest.approx(np.trace(rho.entries @ rho.entries).real, abs=1e-10)
        rebuilt = (vecs * eigs) @ vecs.conj().T
        assert np.abs(rebuilt - rho.entries).max() < 1e-10

    def test_rejects_non_hermitian(self):
        mat = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            hermitian_eigendecomposition(mat)


class TestDensityMatrixValidation:
    def test_rejects_non_hermitian_entries(self):
        with pytest.raises(ValueError):
            DensityMatrix((ModeLabel("A", 2),), np.array([[1.0, 0.5], [0.0, 0.0]]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            DensityMatrix((ModeLabel("A", 2),), np.eye(3))

    def test_renormalized(self):
        rho = DensityMatrix((ModeLabel("A", 2),), np.diag([0.4, 0.4]))
        assert rho.renormalized().trace() == pytest.approx(1.0, abs=1e-14)

    def test_validate_flags_large_negative(self):
        rho = DensityMatrix((ModeLabel("A", 2),), np.diag([1.0, -1e-6]))
        with pytest.raises(ValueError):
            rho.validate()


class TestPureState:
    def test_reduced_density_matches_partial_trace(self):
        rng = np.random.default_rng(7)
        modes = (ModeLabel("A", 2), ModeLabel("R", 3), ModeLabel("Rbar", 4))
        vec = rng.normal(size=24) + 1j * rng.normal(size=24)
        state = PureState(modes, vec / np.linalg.norm(vec))
        direct = state.reduced_density(["A", "R"])
        via_dm = partial_trace(state.density_matrix(), ["Rbar"])
        assert np.abs(direct.entries - via_dm.entries).max() < 1e-12

    def test_reduced_density_reorders_modes(self):
        rng = np.random.default_rng(8)
        modes = (ModeLabel("A", 2), ModeLabel("R", 3))
        vec = rng.normal(size=6)
        state = PureState(modes, vec / np.linalg.norm(vec))
        swapped = state.reduced_density(["R", "A"])
        assert [m.name for m in swapped.modes] == ["R", "A"]
        plain = state.reduced_density(["A", "R"])
        perm = np.transpose(plain.entries.reshape(2, 3, 2, 3), (1, 0, 3, 2)).reshape(6, 6)
        assert np.abs(swapped.entries - perm).max() < 1e-12
