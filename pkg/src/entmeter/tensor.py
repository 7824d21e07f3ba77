"""Dense complex linear algebra for small multipartite systems.

Basis order is lexicographic with subsystem 0 as the most significant
tensor factor, so for three qubits index ``4*a + 2*b + c`` labels
``|abc>``.  Everything here works on plain ``numpy`` arrays wrapped in
small immutable value objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ArgumentError, CapacityError, NumericError, ValidationError

MAX_TOTAL_DIM = 4096

NORM_TOL = 1e-12
DENSITY_TOL = 1e-10
PSD_CLAMP = 1e-10

JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemShape:
    """Ordered subsystem dimensions of a tensor-product Hilbert space."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise ArgumentError("a system needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ArgumentError(f"subsystem dimensions must be >= 2, got {dims}")
        if prod(dims) > MAX_TOTAL_DIM:
            raise CapacityError(f"total dimension {prod(dims)} exceeds {MAX_TOTAL_DIM}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def qubits(cls, n: int) -> "SystemShape":
        return cls((2,) * n)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def all_qubits(self) -> bool:
        return all(d == 2 for d in self.dims)

    def restrict(self, keep: Sequence[int]) -> "SystemShape":
        return SystemShape(self.dims[i] for i in keep)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)


ShapeLike = Union[SystemShape, Sequence[int]]


def as_shape(shape: ShapeLike) -> SystemShape:
    return shape if isinstance(shape, SystemShape) else SystemShape(shape)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a :class:`SystemShape`."""

    shape: SystemShape
    amplitudes: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != shape.total_dim:
            raise ValidationError(
                "amplitude count equals total dimension",
                f"{amps.size} amplitudes for dims {shape.dims}",
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("finite amplitudes")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError("normalized state", f"squared norm {norm2!r}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes, dims: ShapeLike, normalize: bool = True) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0 or not np.isfinite(norm):
                raise ArgumentError("cannot normalize a zero or non-finite vector")
            amps = amps / norm
        return cls(as_shape(dims), amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def tensor(self) -> np.ndarray:
        """Amplitudes viewed as an array with one axis per subsystem."""
        return self.amplitudes.reshape(self.shape.dims)

    def density(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix._trusted(self.shape, np.outer(psi, psi.conj()))

    def __repr__(self) -> str:
        return f"PureState(dims={self.shape.dims})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator."""

    shape: SystemShape
    entries: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        m = np.asarray(self.entries, dtype=np.complex128)
        n = shape.total_dim
        if m.shape != (n, n):
            raise ValidationError("square matrix of order total_dim", f"got {m.shape}, dims {shape.dims}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("finite entries")
        if np.max(np.abs(m - m.conj().T)) > DENSITY_TOL:
            raise ValidationError("Hermitian density matrix")
        tr = np.trace(m)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise ValidationError("unit trace", f"trace {tr!r}")
        lo = hermitian_eig(m).eigenvalues[-1]
        if lo < -DENSITY_TOL:
            raise ValidationError("positive semidefinite", f"smallest eigenvalue {lo!r}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", _frozen(m))

    @classmethod
    def _trusted(cls, shape: SystemShape, entries: np.ndarray) -> "DensityMatrix":
        # Skips validation; only for matrices built from valid inputs by
        # structure-preserving maps (outer products, partial traces).
        obj = object.__new__(cls)
        object.__setattr__(obj, "shape", shape)
        object.__setattr__(obj, "entries", _frozen(entries))
        return obj

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.shape.dims})"


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True, eq=False)
class HermitianEigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a, b, max_dim: int = MAX_TOTAL_DIM) -> np.ndarray:
    """Kronecker product with a cap on the resulting order."""
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    b = np.atleast_1d(np.asarray(b, dtype=np.complex128))
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ArgumentError("kron operands must be finite")
    if a.shape[0] * b.shape[0] > max_dim:
        raise CapacityError(f"kron order {a.shape[0] * b.shape[0]} exceeds {max_dim}")
    return np.kron(a, b)


def _check_keep(shape: SystemShape, keep) -> tuple[int, ...]:
    keep = tuple(sorted({int(k) for k in keep}))
    if not keep:
        raise ArgumentError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= shape.n_parties:
        raise ArgumentError(f"subsystem index out of range for {shape.n_parties} parties: {keep}")
    return keep


def reduced_matrix(psi: PureState, keep) -> np.ndarray:
    """Reduced density matrix of a pure state as a bare array."""
    keep = _check_keep(psi.shape, keep)
    rest = [i for i in range(psi.shape.n_parties) if i not in keep]
    t = np.transpose(psi.tensor(), list(keep) + rest)
    dk = prod(psi.shape.dims[i] for i in keep)
    m = t.reshape(dk, -1)
    return m @ m.conj().T


def partial_trace(rho: State, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems stay in their original relative order regardless
    of the order in which ``keep`` lists them.
    """
    keep = _check_keep(rho.shape, keep)
    sub = rho.shape.restrict(keep)
    if isinstance(rho, PureState):
        return DensityMatrix._trusted(sub, reduced_matrix(rho, keep))
    dims = rho.shape.dims
    n = len(dims)
    t = rho.entries.reshape(dims + dims)
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    rows = letters[:n]
    cols = [letters[n + i] if i in keep else rows[i] for i in range(n)]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    spec = "".join(rows) + "".join(cols) + "->" + "".join(out)
    d = sub.total_dim
    return DensityMatrix._trusted(sub, np.einsum(spec, t).reshape(d, d))


def purity(rho: State) -> float:
    """Tr(rho^2)."""
    if isinstance(rho, PureState):
        return 1.0
    m = rho.entries
    return float(np.sum(np.abs(m) ** 2))


def _jacobi_pair(a: np.ndarray, p: int, q: int) -> np.ndarray | None:
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return None
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # diag(1, conj(phase)) makes the pivot real, then a real rotation kills it
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)


def hermitian_eig(m, max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Eigenvalues come back in descending order with matching eigenvector
    columns.
    """
    a = np.array(m, dtype=np.complex128, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ArgumentError("matrix has non-finite entries")
    fro = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > 1e-8 * max(fro, 1e-300):
        raise ArgumentError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_REL_TOL * fro
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = _jacobi_pair(a, p, q)
                if g is None:
                    continue
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        raise NumericError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    w = np.diag(a).real
    order = np.argsort(-w, kind="stable")
    return HermitianEigenResult(w[order], v[:, order])


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    res = hermitian_eig(m)
    w = res.eigenvalues
    if w.size and w[-1] < -1e-8:
        raise ArgumentError(f"matrix is not positive semidefinite (eigenvalue {w[-1]!r})")
    w = np.sqrt(np.clip(w, 0.0, None))
    vecs = res.eigenvectors
    root = (vecs * w) @ vecs.conj().T
    return 0.5 * (root + root.conj().T)


def _raw_expectation(state: State, op: np.ndarray) -> complex:
    if isinstance(state, PureState):
        psi = state.amplitudes
        return complex(np.vdot(psi, op @ psi))
    return complex(np.trace(state.entries @ op))


def expectation(state: State, op) -> float:
    """<op> in a pure or mixed state; the operator must be Hermitian."""
    op = np.asarray(op, dtype=np.complex128)
    n = state.shape.total_dim
    if op.shape != (n, n):
        raise ArgumentError(f"operator shape {op.shape} does not match total dimension {n}")
    val = _raw_expectation(state, op)
    if abs(val.imag) > 1e-8:
        raise NumericError(f"expectation has imaginary part {val.imag!r}; operator not Hermitian?")
    return val.real


def variance(state: State, op) -> float:
    """<op^2> - <op>^2, clamped at zero."""
    op = np.asarray(op, dtype=np.complex128)
    mean = expectation(state, op)
    return max(expectation(state, op @ op) - mean * mean, 0.0)
