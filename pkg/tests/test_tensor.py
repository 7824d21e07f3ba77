import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entmeter import (
    ArgumentError,
    CapacityError,
    DensityMatrix,
    NumericError,
    PureState,
    SystemShape,
    ValidationError,
    hermitian_eig,
    kron,
    matrix_sqrt_psd,
    partial_trace,
    purity,
    random_pure,
    variance,
    expectation,
)
from entmeter.tensor import MAX_TOTAL_DIM
from strategies import pure_states, seeds


def brute_partial_trace(amps, dims, keep):
    """Index-by-index sum over the traced-out digits."""
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    kd = [dims[i] for i in keep]
    n = int(np.prod(kd))
    out = np.zeros((n, n), dtype=complex)
    psi = amps.reshape(dims)
    for a in itertools.product(*[range(d) for d in kd]):
        for b in itertools.product(*[range(d) for d in kd]):
            s = 0j
            for t in itertools.product(*[range(dims[i]) for i in traced]):
                ia, ib = [0] * len(dims), [0] * len(dims)
                for pos, i in enumerate(keep):
                    ia[i], ib[i] = a[pos], b[pos]
                for pos, i in enumerate(traced):
                    ia[i] = ib[i] = t[pos]
                s += psi[tuple(ia)] * np.conj(psi[tuple(ib)])
            out[np.ravel_multi_index(a, kd), np.ravel_multi_index(b, kd)] = s
    return out


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


class TestShapes:
    def test_total_dim_and_qubits(self):
        s = SystemShape((2, 3, 4))
        assert s.total_dim == 24 and s.n_parties == 3 and not s.all_qubits
        assert SystemShape.qubits(3).dims == (2, 2, 2)

    @pytest.mark.parametrize("dims", [(), (1, 2), (2, 0)])
    def test_rejects_bad_dims(self, dims):
        with pytest.raises(ArgumentError):
            SystemShape(dims)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            SystemShape((2,) * 13)

    def test_lexicographic_order(self):
        # subsystem 0 is the most significant digit
        psi = PureState(SystemShape((2, 3)), np.eye(6)[4])
        assert np.argmax(np.abs(psi.tensor())) == 4
        assert np.unravel_index(4, (2, 3)) == (1, 1)


class TestPureState:
    def test_norm_enforced(self):
        with pytest.raises(ValidationError):
            PureState(SystemShape((2,)), np.array([1.0, 1.0]))

    def test_from_amplitudes_normalizes(self):
        psi = PureState.from_amplitudes([1, 1j], (2,))
        assert np.isclose(np.linalg.norm(psi.amplitudes), 1.0, atol=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            PureState(SystemShape((2, 2)), np.array([1.0, 0, 0]))


class TestDensity:
    # constructor failures carry the violated invariant
    def test_rejects_non_psd(self):
        with pytest.raises(ValidationError):
            DensityMatrix(SystemShape((2,)), np.diag([1.5, -0.5]))

    def test_rejects_trace(self):
        with pytest.raises(ValidationError):
            DensityMatrix(SystemShape((2,)), np.diag([0.5, 0.4]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            DensityMatrix(SystemShape((2,)), np.array([[0.5, 0.1], [0.0, 0.5]]))


class TestPartialTrace:
    @pytest.mark.parametrize("dims,keep", [((2, 3), [0]), ((2, 3), [1]), ((2, 3, 2), [2, 0]), ((3, 2, 2), [1, 2])])
    def test_against_index_sum(self, dims, keep):
        psi = random_pure(dims, 7)
        got = partial_trace(psi, keep).entries
        np.testing.assert_allclose(got, brute_partial_trace(psi.amplitudes, dims, keep), atol=1e-14)

    def test_keep_is_a_set(self):
        psi = random_pure((2, 3), 2)
        np.testing.assert_allclose(partial_trace(psi, [1, 0, 1]).entries, psi.density().entries, atol=1e-15)

    def test_mixed_input_matches_pure(self):
        psi = random_pure((2, 2, 3), 3)
        np.testing.assert_allclose(partial_trace(psi.density(), [0, 2]).entries, partial_trace(psi, [0, 2]).entries, atol=1e-14)

    @given(pure_states(shapes=[(2, 2, 2), (2, 3, 2), (3, 2, 2)]))
    def test_composition(self, psi):
        step = partial_trace(partial_trace(psi, [0, 1]), [0]).entries
        np.testing.assert_allclose(step, partial_trace(psi, [0]).entries, atol=1e-12)

    @given(pure_states(shapes=[(2, 2), (2, 3), (3, 3), (2, 2, 2)]))
    def test_complementary_purities_equal(self, psi):
        n = psi.shape.n_parties
        a = purity(partial_trace(psi, [0]))
        b = purity(partial_trace(psi, list(range(1, n))))
        assert abs(a - b) <= 1e-12

    def test_bad_keep(self):
        psi = random_pure((2, 2), 0)
        with pytest.raises(ArgumentError):
            partial_trace(psi, [])
        with pytest.raises(ArgumentError):
            partial_trace(psi, [2])


class TestEigen:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
    def test_against_numpy(self, n):
        m = random_hermitian(np.random.default_rng(n), n)
        res = hermitian_eig(m)
        np.testing.assert_allclose(res.eigenvalues, np.sort(np.linalg.eigvalsh(m))[::-1], atol=1e-12)
        v = res.eigenvectors
        np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
        np.testing.assert_allclose(v @ np.diag(res.eigenvalues) @ v.conj().T, m, atol=1e-12)

    @given(seeds, st.integers(1, 9))
    def test_trace_and_projectors(self, seed, n):
        m = random_hermitian(np.random.default_rng(seed), n)
        res = hermitian_eig(m)
        assert abs(res.eigenvalues.sum() - np.trace(m).real) <= 1e-11 * max(1, np.abs(m).max() * n)
        proj = sum(np.outer(v, v.conj()) for v in res.eigenvectors.T)
        np.testing.assert_allclose(proj, np.eye(n), atol=1e-12)

    def test_degenerate(self):
        res = hermitian_eig(np.eye(4))
        np.testing.assert_allclose(res.eigenvalues, np.ones(4))

    def test_non_hermitian(self):
        with pytest.raises(ArgumentError):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_non_convergence(self):
        with pytest.raises(NumericError):
            hermitian_eig(random_hermitian(np.random.default_rng(0), 6), max_sweeps=1)

    def test_sqrt_psd(self):
        a = np.random.default_rng(1).standard_normal((4, 4))
        p = a @ a.T
        r = matrix_sqrt_psd(p)
        np.testing.assert_allclose(r @ r, p, atol=1e-12)
        with pytest.raises(ArgumentError):
            matrix_sqrt_psd(-np.eye(2))


class TestKron:
    @given(seeds)
    def test_mixed_product(self, seed):
        rng = np.random.default_rng(seed)
        a, b, c, d = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4))
        np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)

    def test_matches_numpy(self):
        a, b = np.arange(4).reshape(2, 2), np.arange(9).reshape(3, 3)
        np.testing.assert_array_equal(kron(a, b), np.kron(a, b))

    def test_cap(self):
        with pytest.raises(CapacityError):
            kron(np.eye(64), np.eye(128), max_dim=MAX_TOTAL_DIM)


def test_expectation_and_variance_of_sigma_z():
    psi = PureState.from_amplitudes([np.sqrt(0.8), np.sqrt(0.2)], (2,))
    z = np.diag([1.0, -1.0])
    assert np.isclose(expectation(psi, z), 0.6, atol=1e-15)
    assert np.isclose(variance(psi, z), 1 - 0.36, atol=1e-14)


def test_expectation_rejects_non_hermitian():
    psi = PureState.from_amplitudes([1, 1j], (2,))
    with pytest.raises(NumericError):
        expectation(psi, np.array([[0, 1], [0, 0]]))
