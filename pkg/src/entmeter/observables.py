"""Local operator bases, Casimir constants and the mean operator.

Generators of su(d) follow the generalized Gell-Mann construction in a
fixed order: symmetric off-diagonal pairs (j < k), antisymmetric pairs,
then the d - 1 diagonal matrices.  Three normalizations are supported:

* ``TRACE_ORTHONORMAL``: Tr(X_a X_b) = delta_ab for any d.
* ``PAULI``: qubits only, the generators are exactly sigma_x, sigma_y, sigma_z.
* ``SPIN``: qubits only, the generators are sigma / 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ArgumentError
from .tensor import PureState, ShapeLike, SystemShape, as_shape, expectation


class BasisConvention(enum.Enum):
    TRACE_ORTHONORMAL = "trace-orthonormal"
    PAULI = "pauli"
    SPIN = "spin"

    def scale(self, d: int = 2) -> float:
        """Factor applied to the trace-orthonormal generators of su(d)."""
        self.check(d)
        if self is BasisConvention.PAULI:
            return np.sqrt(2.0)
        if self is BasisConvention.SPIN:
            return 1.0 / np.sqrt(2.0)
        return 1.0

    def check(self, d: int) -> None:
        if self is not BasisConvention.TRACE_ORTHONORMAL and d != 2:
            raise ArgumentError(f"{self.value} convention is defined for qubits only, got d={d}")

    def valid_for(self, shape: ShapeLike) -> bool:
        return self is BasisConvention.TRACE_ORTHONORMAL or as_shape(shape).all_qubits

    @classmethod
    def parse(cls, value: "str | BasisConvention") -> "BasisConvention":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise ArgumentError(f"unknown basis convention {value!r}")


def default_convention(shape: ShapeLike) -> BasisConvention:
    """Pauli for all-qubit systems, trace-orthonormal otherwise."""
    if as_shape(shape).all_qubits:
        return BasisConvention.PAULI
    return BasisConvention.TRACE_ORTHONORMAL


@lru_cache(maxsize=None)
def _orthonormal_generators(d: int) -> tuple[np.ndarray, ...]:
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1.0
            sym.append(s)
            a = np.zeros((d, d), dtype=np.complex128)
            a[k, j] = 1j
            a[j, k] = -1j
            anti.append(a)
    for l in range(1, d):
        entries = np.zeros(d)
        entries[:l] = 1.0
        entries[l] = -l
        diag.append(np.diag(entries * np.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    out = []
    for g in sym + anti + diag:
        g = g / np.sqrt(2.0)
        g.setflags(write=False)
        out.append(g)
    return tuple(out)


def gell_mann_basis(d: int, convention: BasisConvention | str = BasisConvention.TRACE_ORTHONORMAL) -> list[np.ndarray]:
    """The d^2 - 1 generators of su(d) scaled per ``convention``."""
    if int(d) < 2:
        raise ArgumentError(f"d must be >= 2, got {d}")
    convention = BasisConvention.parse(convention)
    scale = convention.scale(int(d))
    return [scale * g for g in _orthonormal_generators(int(d))]


def casimir_constant(d: int, convention: BasisConvention | str = BasisConvention.TRACE_ORTHONORMAL) -> float:
    """Scalar value of sum_a X_a^2 on the fundamental representation."""
    if int(d) < 2:
        raise ArgumentError(f"d must be >= 2, got {d}")
    convention = BasisConvention.parse(convention)
    return convention.scale(d) ** 2 * (d - 1.0 / d)


def embed_local(op, site: int, shape: ShapeLike) -> np.ndarray:
    """I x ... x op x ... x I with ``op`` acting on subsystem ``site``."""
    shape = as_shape(shape)
    op = np.asarray(op, dtype=np.complex128)
    if not 0 <= site < shape.n_parties:
        raise ArgumentError(f"site {site} out of range for {shape.n_parties} parties")
    d = shape.dims[site]
    if op.shape != (d, d):
        raise ArgumentError(f"operator shape {op.shape} does not match subsystem dimension {d}")
    left = int(np.prod(shape.dims[:site], dtype=np.int64))
    right = int(np.prod(shape.dims[site + 1:], dtype=np.int64))
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """Local generators for every subsystem of ``shape``.

    ``local[A]`` holds the d_A x d_A generators of party A; ``embedded``
    lists the same operators lifted to the joint space, site-major.
    """

    shape: SystemShape
    convention: BasisConvention
    local: tuple[tuple[np.ndarray, ...], ...]

    @classmethod
    def build(cls, shape: ShapeLike, convention: BasisConvention | str | None = None) -> "OperatorBasis":
        shape = as_shape(shape)
        convention = default_convention(shape) if convention is None else BasisConvention.parse(convention)
        for d in shape.dims:
            convention.check(d)
        local = tuple(tuple(gell_mann_basis(d, convention)) for d in shape.dims)
        return cls(shape, convention, local)

    @property
    def labels(self) -> list[tuple[int, int]]:
        """(site, generator index) for each embedded operator, in order."""
        return [(site, k) for site, ops in enumerate(self.local) for k in range(len(ops))]

    @property
    def embedded(self) -> list[np.ndarray]:
        return [embed_local(op, site, self.shape) for site, ops in enumerate(self.local) for op in ops]

    def casimir_total(self) -> float:
        return sum(casimir_constant(d, self.convention) for d in self.shape.dims)


def _check_shapes(psi: PureState, basis: OperatorBasis) -> None:
    if psi.shape != basis.shape:
        raise ArgumentError(f"state dims {psi.shape.dims} do not match basis dims {basis.shape.dims}")


def local_expectations(psi: PureState, basis: OperatorBasis) -> np.ndarray:
    """<psi|X_a|psi> for every embedded generator, site-major."""
    _check_shapes(psi, basis)
    return np.array([expectation(psi, x) for x in basis.embedded])


@dataclass(frozen=True, eq=False)
class MeanOperator:
    shape: SystemShape
    matrix: np.ndarray
    convention: BasisConvention


def mean_operator(psi: PureState, basis: OperatorBasis) -> MeanOperator:
    """X_psi = sum_a <X_a> X_a over all embedded local generators."""
    _check_shapes(psi, basis)
    n = basis.shape.total_dim
    m = np.zeros((n, n), dtype=np.complex128)
    for x in basis.embedded:
        m += expectation(psi, x) * x
    m.setflags(write=False)
    return MeanOperator(basis.shape, m, basis.convention)


def mean_operator_expectation(psi: PureState, basis: OperatorBasis) -> float:
    """<psi|X_psi|psi>, equal to the sum of squared generator means."""
    return expectation(psi, mean_operator(psi, basis).matrix)
