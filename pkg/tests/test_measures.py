import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entmeter import (
    ArgumentError,
    BasisConvention,
    OperatorBasis,
    bell,
    bell_pair_product,
    biseparable3,
    concurrence_bipartite,
    entanglement_residual,
    ghz3,
    ghz4,
    mu,
    partial_trace,
    product,
    random_pure,
    random_unitary,
    three_tangle,
    total_covariance,
    total_variance_closed,
    total_variance_direct,
    uncertainty_check,
    variance_extremes,
    w3,
    w3_paper_variant,
    wootters_concurrence,
)
from entmeter.measures import is_completely_entangled, single_party_purities
from entmeter.states import apply_local
from strategies import pure_states, seeds

I2 = np.eye(2)
PAULIS = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.diag([1.0, -1.0]).astype(complex),
}


def pauli_string(axis, site, n):
    ops = [PAULIS[axis] if k == site else I2 for k in range(n)]
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return out


def explicit_four_qubit_equations(psi):
    """The twelve single-site Pauli expectations written as coefficient sums, site-major."""
    c = psi.amplitudes.reshape(2, 2, 2, 2)
    out = []
    for site in range(4):
        for axis in "xyz":
            total = 0.0
            for rest in itertools.product((0, 1), repeat=3):
                i0, i1 = list(rest), list(rest)
                i0.insert(site, 0)
                i1.insert(site, 1)
                a, b = c[tuple(i0)], c[tuple(i1)]
                if axis == "x":
                    total += 2 * (np.conj(a) * b).real
                elif axis == "y":
                    total += (1j * np.conj(b) * a + np.conj(1j * np.conj(b) * a)).real
                else:
                    total += abs(a) ** 2 - abs(b) ** 2
            out.append(total)
    return np.array(out)


def ckw_tangle(psi):
    """tau = C^2_{A|BC} - C^2_{AB} - C^2_{AC} with Wootters on the pair reductions."""
    ra = partial_trace(psi, [0]).entries
    c_a_bc_sq = 4 * np.linalg.det(ra).real
    return c_a_bc_sq - wootters_concurrence(partial_trace(psi, [0, 1])) ** 2 - wootters_concurrence(partial_trace(psi, [0, 2])) ** 2


class TestWState:
    def test_total_variance_and_mu(self):
        r = mu(w3())
        assert abs(r.total_variance - (8 + 2 / 3)) <= 1e-10
        assert abs(r.mu - 2 * np.sqrt(2) / 3) <= 1e-10
        assert r.extremes.v_coh == pytest.approx(6) and r.extremes.v_ent == pytest.approx(9)

    def test_covariance(self):
        assert abs(total_covariance(w3()) - 8 / 3) <= 1e-10
        assert abs(total_covariance(w3()) - (mu(w3()).total_variance - 6)) <= 1e-10

    def test_tangle_zero(self):
        assert three_tangle(w3()) <= 1e-12

    def test_paper_variant(self):
        r = mu(w3_paper_variant())
        assert abs(r.mu - np.sqrt(8 / 27)) <= 1e-10
        assert abs(r.total_variance - 62 / 9) <= 1e-10


class TestGHZ:
    @given(st.floats(0, 1))
    def test_mu_squared_is_tangle(self, x):
        psi = ghz3(x)
        target = 4 * x * x * (1 - x * x)
        assert abs(mu(psi).mu ** 2 - target) <= 1e-10
        assert abs(three_tangle(psi) - target) <= 1e-10

    def test_covariance_ghz(self):
        assert abs(total_covariance(ghz3()) - 3) <= 1e-10

    @given(st.floats(0, 1))
    def test_ghz4_mu(self, x):
        assert abs(mu(ghz4(x)).mu - np.sqrt(max(0.0, 1 - (2 * x * x - 1) ** 2))) <= 1e-10

    def test_ghz4_twelve_equations(self):
        vals, max_abs, _ = entanglement_residual(ghz4())
        assert vals.size == 12 and max_abs <= 1e-12
        np.testing.assert_allclose(explicit_four_qubit_equations(ghz4()), 0, atol=1e-12)


@given(pure_states(shapes=[(2, 2, 2, 2)]))
def test_residual_matches_explicit_equations(psi):
    np.testing.assert_allclose(entanglement_residual(psi)[0], explicit_four_qubit_equations(psi), atol=1e-12)


@given(pure_states(shapes=[(2, 2, 2)]))
def test_tangle_against_monogamy_oracle(psi):
    assert abs(three_tangle(psi) - ckw_tangle(psi)) <= 1e-7


@pytest.mark.parametrize("variant", ["AB", "AC", "BC"])
def test_biseparable(variant):
    psi = biseparable3(variant)
    assert three_tangle(psi) <= 1e-12
    assert abs(mu(psi).mu - np.sqrt(2 / 3)) <= 1e-12


def test_bell_pair_product_completely_entangled():
    r = mu(bell_pair_product())
    assert abs(r.mu - 1) <= 1e-12 and r.residual_max <= 1e-12


@given(pure_states())
def test_route_equivalence(psi):
    for conv in BasisConvention:
        if conv.valid_for(psi.shape):
            direct = total_variance_direct(psi, OperatorBasis.build(psi.shape, conv))
            assert abs(direct - total_variance_closed(psi, psi.shape, conv)) <= 1e-9


@given(pure_states(shapes=[(2, 2), (2, 3), (2, 2, 2)]))
def test_direct_route_against_pauli_strings(psi):
    if psi.shape.all_qubits:
        n = psi.shape.n_parties
        v = psi.amplitudes
        total = 0.0
        for axis in "xyz":
            for site in range(n):
                p = pauli_string(axis, site, n)
                m = np.vdot(v, p @ v).real
                total += 1 - m * m
        assert abs(total - total_variance_direct(psi, OperatorBasis.build(psi.shape, "pauli"))) <= 1e-12


@given(pure_states())
def test_mu_in_unit_interval_and_variance_bounds(psi):
    r = mu(psi)
    assert 0 <= r.mu <= 1
    assert r.extremes.v_coh - 1e-10 <= r.total_variance <= r.extremes.v_ent + 1e-10


@given(pure_states(shapes=[(2, 2), (3, 3), (2, 2, 2), (2, 3)]))
def test_local_unitary_invariance(psi):
    rng = np.random.default_rng(abs(hash(psi.amplitudes.tobytes())) % 2**32)
    dressed = apply_local(psi, [random_unitary(d, rng) for d in psi.shape.dims])
    assert abs(mu(dressed).mu - mu(psi).mu) <= 1e-9


@given(pure_states(shapes=[(2, 2), (2, 2, 2)]))
def test_mu_convention_invariant(psi):
    vals = [mu(psi, convention=c).mu for c in BasisConvention]
    assert max(vals) - min(vals) <= 1e-12


@given(pure_states(shapes=[(2, 2), (3, 3), (4, 4)]))
def test_concurrence_coincides(psi):
    assert abs(concurrence_bipartite(psi) - mu(psi).mu) <= 1e-10


def test_concurrence_requires_square_bipartite():
    with pytest.raises(ArgumentError):
        concurrence_bipartite(random_pure((2, 3), 0))
    with pytest.raises(ArgumentError):
        three_tangle(random_pure((2, 2), 0))


@given(pure_states(shapes=[(2, 2), (2, 2, 2), (3, 3), (2, 3, 4)]))
def test_characterization(psi):
    purities = single_party_purities(psi)
    flat = all(abs(p - 1 / d) <= 1e-9 for p, d in zip(purities, psi.shape.dims))
    assert (entanglement_residual(psi)[1] <= 1e-9) == flat


def test_product_states_are_coherent():
    psi = product([random_pure((d,), k) for k, d in enumerate((2, 3, 2))])
    r = mu(psi)
    assert r.mu <= 1e-6
    assert abs(r.total_variance - r.extremes.v_coh) <= 1e-12


def test_completely_entangled_flags():
    assert is_completely_entangled(ghz3())
    assert not is_completely_entangled(w3())


def test_extremes_mixed_dims():
    e = variance_extremes((2, 3), "trace-orthonormal")
    assert np.isclose(e.v_coh, 1 + 2) and np.isclose(e.v_ent, 1.5 + 8 / 3)


def test_report_optional_fields():
    assert mu(w3()).three_tangle is not None and mu(w3()).concurrence is None
    assert mu(bell()).concurrence == pytest.approx(1)
    assert mu(random_pure((2, 3), 0)).concurrence is None


class TestUncertainty:
    @given(seeds)
    def test_pure_qubit_equality(self, seed):
        psi = random_pure((2,), seed)
        for j, k in (("x", "y"), ("y", "z"), ("x", "z")):
            r = uncertainty_check(psi, j, k)
            assert r.holds and abs(r.lhs - r.rhs) <= 1e-12
            assert 0 <= r.mean_length <= 0.25 + 1e-12

    def test_mixed_qubit_strict(self):
        rho = partial_trace(bell(), [0])
        r = uncertainty_check(rho, 0, 2)
        assert r.lhs > r.rhs and r.mean_length == pytest.approx(0)

    def test_bad_axes(self):
        psi = random_pure((2,), 0)
        with pytest.raises(ArgumentError):
            uncertainty_check(psi, "x", "x")
        with pytest.raises(ArgumentError):
            uncertainty_check(random_pure((2, 2), 0))
