"""Entanglement functionals built on total variance of local observables."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ArgumentError
from .observables import (
    BasisConvention,
    OperatorBasis,
    default_convention,
    embed_local,
    gell_mann_basis,
)
from .tensor import (
    PureState,
    ShapeLike,
    State,
    SystemShape,
    as_shape,
    expectation,
    partial_trace,
    purity,
    reduced_matrix,
    variance,
)

RESIDUAL_TOL = 1e-9

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class VarianceExtremes:
    v_coh: float
    v_ent: float
    convention: BasisConvention


@dataclass(frozen=True)
class EntanglementReport:
    mu: float
    total_variance: float
    extremes: VarianceExtremes
    purities: tuple[float, ...]
    residual_max: float
    convention: BasisConvention
    three_tangle: float | None = None
    concurrence: float | None = None


@dataclass(frozen=True)
class UncertaintyCheckResult:
    lhs: float
    rhs: float
    holds: bool
    mean_length: float
    axes: tuple[str, str] = field(default=("x", "y"))


def _resolve(state: State, shape: ShapeLike | None, convention) -> tuple[SystemShape, BasisConvention]:
    shape = state.shape if shape is None else as_shape(shape)
    if shape != state.shape:
        raise ArgumentError(f"state dims {state.shape.dims} do not match requested dims {shape.dims}")
    convention = default_convention(shape) if convention is None else BasisConvention.parse(convention)
    for d in shape.dims:
        convention.check(d)
    return shape, convention


def single_party_purities(state: State) -> tuple[float, ...]:
    """Tr(rho_A^2) for every subsystem A."""
    if isinstance(state, PureState):
        out = []
        for site in range(state.shape.n_parties):
            r = reduced_matrix(state, [site])
            out.append(float(np.sum(np.abs(r) ** 2)))
        return tuple(out)
    return tuple(purity(partial_trace(state, [site])) for site in range(state.shape.n_parties))


def total_variance_direct(state: State, basis: OperatorBasis) -> float:
    """Sum of variances of every embedded local generator."""
    if state.shape != basis.shape:
        raise ArgumentError(f"state dims {state.shape.dims} do not match basis dims {basis.shape.dims}")
    return float(sum(variance(state, x) for x in basis.embedded))


def total_variance_closed(psi: PureState, shape: ShapeLike | None = None, convention=None) -> float:
    """Total variance from single-party purities: sum_A s^2 (d_A - Tr rho_A^2)."""
    shape, convention = _resolve(psi, shape, convention)
    pur = single_party_purities(psi)
    return float(sum(convention.scale(d) ** 2 * (d - p) for d, p in zip(shape.dims, pur)))


def variance_extremes(shape: ShapeLike, convention=None) -> VarianceExtremes:
    """Total variance of product states (minimum) and completely entangled states (maximum)."""
    shape = as_shape(shape)
    convention = default_convention(shape) if convention is None else BasisConvention.parse(convention)
    v_coh = sum(convention.scale(d) ** 2 * (d - 1.0) for d in shape.dims)
    v_ent = sum(convention.scale(d) ** 2 * (d - 1.0 / d) for d in shape.dims)
    return VarianceExtremes(float(v_coh), float(v_ent), convention)


def mu_squared_from_purities(dims, purities) -> float:
    num = sum(1.0 - p for p in purities)
    den = sum(1.0 - 1.0 / d for d in dims)
    return float(np.clip(num / den, 0.0, 1.0))


def entanglement_residual(psi: PureState, shape: ShapeLike | None = None, convention=None):
    """Left-hand sides <psi|X_a|psi> of the entanglement equation.

    Returns ``(values, max_abs, l2)`` with values ordered site-major and,
    within a site, in Gell-Mann order (x, y, z for qubits).  The state is
    completely entangled exactly when every value vanishes.
    """
    shape, convention = _resolve(psi, shape, convention)
    values = []
    for site, d in enumerate(shape.dims):
        r = reduced_matrix(psi, [site])
        for g in gell_mann_basis(d, convention):
            values.append(float(np.real(np.trace(r @ g))))
    values = np.array(values)
    return values, float(np.max(np.abs(values))), float(np.linalg.norm(values))


def is_completely_entangled(psi: PureState, tol: float = RESIDUAL_TOL) -> bool:
    return entanglement_residual(psi)[1] <= tol


def mu(psi: PureState, shape: ShapeLike | None = None, convention=None) -> EntanglementReport:
    """Entanglement measure of a pure state with the supporting numbers.

    The value itself does not depend on ``convention``; only the reported
    variances and residuals are scaled by it.
    """
    shape, convention = _resolve(psi, shape, convention)
    pur = single_party_purities(psi)
    m2 = mu_squared_from_purities(shape.dims, pur)
    tv = sum(convention.scale(d) ** 2 * (d - p) for d, p in zip(shape.dims, pur))
    _, rmax, _ = entanglement_residual(psi, shape, convention)
    tangle = three_tangle(psi) if shape.dims == (2, 2, 2) else None
    conc = None
    if shape.n_parties == 2 and shape.dims[0] == shape.dims[1]:
        conc = concurrence_bipartite(psi)
    return EntanglementReport(
        mu=float(np.sqrt(m2)),
        total_variance=float(tv),
        extremes=variance_extremes(shape, convention),
        purities=pur,
        residual_max=rmax,
        convention=convention,
        three_tangle=tangle,
        concurrence=conc,
    )


def mu_value(psi: PureState) -> float:
    return mu(psi).mu


def concurrence_bipartite(psi: PureState, shape: ShapeLike | None = None) -> float:
    """sqrt(d/(d-1) (1 - Tr rho_A^2)) for a d x d pure state."""
    shape = psi.shape if shape is None else as_shape(shape)
    if shape != psi.shape:
        raise ArgumentError("state and shape disagree")
    if shape.n_parties != 2 or shape.dims[0] != shape.dims[1]:
        raise ArgumentError(f"concurrence needs a square bipartite system, got dims {shape.dims}")
    d = shape.dims[0]
    p = float(np.sum(np.abs(reduced_matrix(psi, [0])) ** 2))
    return float(np.sqrt(np.clip(d / (d - 1.0) * (1.0 - p), 0.0, 1.0)))


def three_tangle(psi: PureState) -> float:
    """Three-qubit tangle, four times the modulus of Cayley's hyperdeterminant."""
    if psi.shape.dims != (2, 2, 2):
        raise ArgumentError(f"three_tangle needs three qubits, got dims {psi.shape.dims}")
    a = psi.tensor()
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1] + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


def total_covariance(psi: PureState, shape: ShapeLike | None = None) -> float:
    """Sum over Pauli axes and unordered party pairs of Cov(sigma_i^J, sigma_i^J').

    Each unordered pair {J, J'} is counted once; with that convention the
    result equals V(psi) - V_coh for the W state.
    """
    shape = psi.shape if shape is None else as_shape(shape)
    if shape != psi.shape:
        raise ArgumentError("state and shape disagree")
    if not shape.all_qubits:
        raise ArgumentError(f"total covariance is defined for qubits only, got dims {shape.dims}")
    n = shape.n_parties
    total = 0.0
    for s in PAULI.values():
        ops = [embed_local(s, site, shape) for site in range(n)]
        means = [expectation(psi, op) for op in ops]
        for j, k in combinations(range(n), 2):
            total += expectation(psi, ops[j] @ ops[k]) - means[j] * means[k]
    return float(total)


_AXES = ("x", "y", "z")


def _axis(a) -> str:
    if isinstance(a, (int, np.integer)):
        if not 0 <= a < 3:
            raise ArgumentError(f"axis index must be 0, 1 or 2, got {a}")
        return _AXES[a]
    key = str(a).lower()
    if key not in _AXES:
        raise ArgumentError(f"axis must be one of x, y, z; got {a!r}")
    return key


def uncertainty_check(state: State, j="x", k="y") -> UncertaintyCheckResult:
    """Schroedinger-Robertson relation for spin-1/2 operators S = sigma/2.

    Works on a single qubit only; reduce a multipartite state to one
    party first.
    """
    j, k = _axis(j), _axis(k)
    if j == k:
        raise ArgumentError("the two axes must differ")
    if state.shape.dims != (2,):
        raise ArgumentError(f"uncertainty_check needs a single qubit, got dims {state.shape.dims}")
    spin = {ax: PAULI[ax] / 2.0 for ax in _AXES}
    sj, sk = spin[j], spin[k]
    mj, mk = expectation(state, sj), expectation(state, sk)
    cov = 0.5 * expectation(state, sj @ sk + sk @ sj) - mj * mk
    lhs = variance(state, sj) * variance(state, sk) - cov * cov
    comm = sj @ sk - sk @ sj
    if isinstance(state, PureState):
        c = np.vdot(state.amplitudes, comm @ state.amplitudes)
    else:
        c = np.trace(state.entries @ comm)
    rhs = 0.25 * abs(c) ** 2
    mean_length = sum(expectation(state, s) ** 2 for s in spin.values())
    return UncertaintyCheckResult(float(lhs), float(rhs), bool(lhs >= rhs - 1e-10), float(mean_length), (j, k))
