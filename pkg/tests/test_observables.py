import numpy as np
import pytest
from hypothesis import given

from entmeter import (
    ArgumentError,
    BasisConvention,
    OperatorBasis,
    casimir_constant,
    embed_local,
    expectation,
    gell_mann_basis,
    mean_operator,
    mean_operator_expectation,
    random_pure,
    random_unitary,
)
from entmeter.observables import default_convention, local_expectations
from strategies import pure_states

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_generators_traceless_hermitian_orthonormal(d):
    gens = gell_mann_basis(d)
    assert len(gens) == d * d - 1
    for g in gens:
        np.testing.assert_allclose(g, g.conj().T, atol=0)
        assert abs(np.trace(g)) < 1e-14
    gram = np.array([[np.trace(a @ b).real for b in gens] for a in gens])
    np.testing.assert_allclose(gram, np.eye(d * d - 1), atol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_generators_complete(d):
    # together with the identity they span all d x d matrices
    mats = np.array([g.ravel() for g in gell_mann_basis(d)] + [np.eye(d).ravel()])
    assert np.linalg.matrix_rank(mats) == d * d


def test_pauli_convention_is_pauli_matrices():
    for got, want in zip(gell_mann_basis(2, "pauli"), (SX, SY, SZ)):
        np.testing.assert_allclose(got, want, atol=1e-15)
    for got, want in zip(gell_mann_basis(2, BasisConvention.SPIN), (SX, SY, SZ)):
        np.testing.assert_allclose(got, want / 2, atol=1e-15)


def test_qutrit_order_matches_standard_gell_mann():
    # symmetric, antisymmetric, diagonal, each rescaled by 1/sqrt(2)
    g = np.sqrt(2) * np.array(gell_mann_basis(3))
    l1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    l2 = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
    l8 = np.diag([1, 1, -2]) / np.sqrt(3)
    np.testing.assert_allclose(g[0], l1, atol=1e-15)
    np.testing.assert_allclose(g[3], l2, atol=1e-15)
    np.testing.assert_allclose(g[7], l8, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_casimir_identity(d):
    total = sum(g @ g for g in gell_mann_basis(d))
    np.testing.assert_allclose(total, casimir_constant(d) * np.eye(d), atol=1e-13)
    assert np.isclose(casimir_constant(d), d - 1 / d)


def test_casimir_qubit_conventions():
    assert np.isclose(casimir_constant(2, "pauli"), 3.0)
    assert np.isclose(casimir_constant(2, "spin"), 0.75)


def test_qubit_only_conventions():
    with pytest.raises(ArgumentError):
        gell_mann_basis(3, "pauli")
    with pytest.raises(ArgumentError):
        OperatorBasis.build((2, 3), "spin")
    assert not BasisConvention.PAULI.valid_for((2, 3))


def test_parse_and_default():
    assert BasisConvention.parse("TRACE_ORTHONORMAL") is BasisConvention.TRACE_ORTHONORMAL
    with pytest.raises(ArgumentError):
        BasisConvention.parse("gellmann")
    assert default_convention((2, 2)) is BasisConvention.PAULI
    assert default_convention((2, 3)) is BasisConvention.TRACE_ORTHONORMAL


def test_embed_local():
    out = embed_local(SZ, 1, (2, 2, 2))
    np.testing.assert_array_equal(out, np.kron(np.kron(np.eye(2), SZ), np.eye(2)))
    with pytest.raises(ArgumentError):
        embed_local(SZ, 0, (3, 2))


def test_basis_labels_site_major():
    b = OperatorBasis.build((2, 3))
    assert b.labels[:3] == [(0, 0), (0, 1), (0, 2)]
    assert len(b.embedded) == 3 + 8


@given(pure_states(shapes=[(2, 2), (2, 3), (3, 3), (2, 2, 2)]))
def test_mean_operator_pairs_like_expectation(psi):
    # the mean operator represents <psi|.|psi> on the local algebra
    basis = OperatorBasis.build(psi.shape, "trace-orthonormal")
    xm = mean_operator(psi, basis).matrix
    means = local_expectations(psi, basis)
    for (site, _), x, m in zip(basis.labels, basis.embedded, means):
        local_trace = np.trace(xm @ x).real * psi.shape.dims[site] / psi.shape.total_dim
        assert abs(local_trace - m) <= 1e-10


@given(pure_states(shapes=[(2, 2), (2, 3), (3, 3)]))
def test_mean_operator_basis_independent(psi):
    rng = np.random.default_rng(abs(hash(psi.amplitudes.tobytes())) % 2**32)
    basis = OperatorBasis.build(psi.shape, "trace-orthonormal")
    us = [random_unitary(d, rng) for d in psi.shape.dims]
    rotated = OperatorBasis(psi.shape, basis.convention,
                            tuple(tuple(u @ g @ u.conj().T for g in ops) for u, ops in zip(us, basis.local)))
    np.testing.assert_allclose(mean_operator(psi, basis).matrix, mean_operator(psi, rotated).matrix, atol=1e-10)


@given(pure_states(shapes=[(2,), (2, 2), (2, 2, 2)]))
def test_mean_operator_expectation_is_sum_of_squares(psi):
    basis = OperatorBasis.build(psi.shape, "spin")
    val = mean_operator_expectation(psi, basis)
    assert abs(val - np.sum(local_expectations(psi, basis) ** 2)) <= 1e-12
    # spin-1/2 means have length at most 1/2 per party
    assert -1e-12 <= val <= psi.shape.n_parties / 4 + 1e-12


def test_mean_operator_shape_mismatch():
    with pytest.raises(ArgumentError):
        mean_operator(random_pure((2, 2), 0), OperatorBasis.build((2, 3)))


def test_sigma_expectations_single_qubit():
    psi = random_pure((2,), 4)
    b = OperatorBasis.build((2,), "pauli")
    want = [expectation(psi, s) for s in (SX, SY, SZ)]
    np.testing.assert_allclose(local_expectations(psi, b), want, atol=1e-15)
