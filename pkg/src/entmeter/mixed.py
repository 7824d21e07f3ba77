"""Mixed-state estimates: variance upper bound, Wootters concurrence, convex roof.

The convex roof is searched over ensembles

    |psi~_i> = sum_j U_ij sqrt(lambda_j) |e_j>,   U^dagger U = I,

built from the eigendecomposition of rho.  Any such ensemble reproduces
rho exactly, so the search only has to move U.  U is changed by Givens
rotations that mix two ensemble rows at a time; every rotation is
chosen by a two-parameter Nelder-Mead search over (angle, phase), and
the sweep over all row pairs repeats until the weighted average
sum_i p_i mu(psi_i) stops decreasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError
from .measures import mu, total_variance_direct, variance_extremes
from .observables import OperatorBasis
from .optimize import nelder_mead_batch
from .states import bell, random_unitary
from .tensor import DensityMatrix, PureState, ShapeLike, SystemShape, as_shape, hermitian_eig, matrix_sqrt_psd

RANK_CUTOFF = 1e-12
_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _check_shape(rho: DensityMatrix, shape: ShapeLike | None) -> SystemShape:
    shape = rho.shape if shape is None else as_shape(shape)
    if shape != rho.shape:
        raise ArgumentError(f"density dims {rho.shape.dims} do not match requested dims {shape.dims}")
    return shape


def mu_upper_bound(rho: DensityMatrix, shape: ShapeLike | None = None) -> float:
    """The pure-state measure evaluated on the total variance of ``rho``.

    Classical mixing also raises the variance, so this overestimates
    entanglement (it equals 1 for the maximally mixed state).
    """
    shape = _check_shape(rho, shape)
    basis = OperatorBasis.build(shape)
    ext = variance_extremes(shape, basis.convention)
    v = total_variance_direct(rho, basis)
    m2 = (v - ext.v_coh) / (ext.v_ent - ext.v_coh)
    return float(np.sqrt(np.clip(m2, 0.0, 1.0)))


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Closed-form two-qubit concurrence of a mixed state."""
    if rho.shape.dims != (2, 2):
        raise ArgumentError(f"Wootters concurrence needs two qubits, got dims {rho.shape.dims}")
    r = rho.entries
    flipped = _SIGMA_YY @ r.conj() @ _SIGMA_YY
    root = matrix_sqrt_psd(r)
    m = root @ flipped @ root
    ev = hermitian_eig(0.5 * (m + m.conj().T)).eigenvalues
    lam = np.sqrt(np.clip(ev, 0.0, None))
    return float(np.clip(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0))


def werner(p: float) -> DensityMatrix:
    """p |Phi+><Phi+| + (1 - p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p must lie in [0, 1], got {p}")
    phi = bell().amplitudes
    m = p * np.outer(phi, phi.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(SystemShape((2, 2)), m)


def random_density(shape: ShapeLike, rank: int, seed) -> DensityMatrix:
    """rho = G^dagger G / Tr(G^dagger G) with G a rank x D complex Gaussian."""
    from .states import rng_from

    shape = as_shape(shape)
    if not 1 <= rank <= shape.total_dim:
        raise ArgumentError(f"rank must be in [1, {shape.total_dim}], got {rank}")
    rng = rng_from(seed)
    d = shape.total_dim
    g = rng.standard_normal((rank, d)) + 1j * rng.standard_normal((rank, d))
    m = g.conj().T @ g
    m = m / np.trace(m).real
    return DensityMatrix(shape, 0.5 * (m + m.conj().T))


@dataclass(frozen=True, eq=False)
class Ensemble:
    shape: SystemShape
    members: tuple[tuple[float, PureState], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members])

    def density(self) -> np.ndarray:
        n = self.shape.total_dim
        out = np.zeros((n, n), dtype=np.complex128)
        for w, s in self.members:
            out += w * np.outer(s.amplitudes, s.amplitudes.conj())
        return out

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class RoofOptions:
    """Search settings; ``ensemble_size`` of ``None`` means rank squared.

    ``max_iterations`` caps the Nelder-Mead iterations one restart may
    spend across all of its pair searches; ``tolerance`` is the
    sweep-to-sweep decrease below which a restart counts as converged.
    ``pair_iterations`` bounds each individual pair search.
    """

    ensemble_size: int | None = None
    restarts: int = 32
    max_iterations: int = 2000
    tolerance: float = 1e-8
    seed: int = 0
    pair_iterations: int = 8
    # NM simplex-collapse threshold inside each pair rotation search
    simplex_tol: float = 1e-8


@dataclass(frozen=True, eq=False)
class RoofResult:
    value: float
    best_ensemble: Ensemble
    restarts_used: int
    converged: bool
    seed: int
    best_restart: int = 0
    restart_values: tuple[float, ...] = field(default=())


class _RowObjective:
    """p * mu(psi) for unnormalized rows psi~ with p = <psi~|psi~>.

    Uses p^2 mu^2 = sum_A (p^2 - Tr rho~_A^2) / sum_A (1 - 1/d_A), which
    stays finite for zero rows.  For two parties both reductions share a
    spectrum, so only the smaller one is formed.
    """

    def __init__(self, shape: SystemShape):
        dims = shape.dims
        self.dims = dims
        self.den = sum(1.0 - 1.0 / d for d in dims)
        n = len(dims)
        sites = range(n)
        self.multiplicity = 1.0
        if n == 2:
            sites = [int(np.argmin(dims))]
            self.multiplicity = 2.0
        self.sites = [(a, dims[a], (0, a + 1) + tuple(i + 1 for i in range(n) if i != a)) for a in sites]

    def __call__(self, rows: np.ndarray) -> np.ndarray:
        lead = rows.shape[:-1]
        flat = rows.reshape(-1, rows.shape[-1])
        n = flat.shape[0]
        p = np.einsum("ij,ij->i", flat.real, flat.real) + np.einsum("ij,ij->i", flat.imag, flat.imag)
        pur = np.zeros(n)
        for a, d, perm in self.sites:
            m = np.transpose(flat.reshape((n,) + self.dims), perm).reshape(n, d, -1)
            for i in range(d):
                for j in range(i, d):
                    g = np.einsum("nr,nr->n", m[:, i], m[:, j].conj())
                    w = g.real * g.real + g.imag * g.imag
                    pur += w if i == j else 2.0 * w
        acc = len(self.dims) * p * p - self.multiplicity * pur
        return np.sqrt(np.clip(acc / self.den, 0.0, None)).reshape(lead)


def _round_robin(m: int) -> list[list[tuple[int, int]]]:
    """Schedule of disjoint row pairs covering every pair once per sweep."""
    players = list(range(m)) + ([None] if m % 2 else [])
    n = len(players)
    rounds = []
    for _ in range(n - 1):
        pairs = []
        for i in range(n // 2):
            a, b = players[i], players[n - 1 - i]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _mix(ri: np.ndarray, rj: np.ndarray, params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    theta, phi = params[..., 0:1], params[..., 1:2]
    c, s = np.cos(theta), np.sin(theta)
    ph = np.exp(1j * phi)
    return c * ri + s * ph * rj, -s * np.conj(ph) * ri + c * rj


def _restart_seed(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def _ensemble_from_rows(shape: SystemShape, rows: np.ndarray) -> Ensemble:
    members = []
    for row in rows:
        w = float(np.vdot(row, row).real)
        if w <= 1e-15:
            continue
        members.append((w, PureState.from_amplitudes(row, shape)))
    return Ensemble(shape, tuple(members))


def _descend(rows: np.ndarray, objective: _RowObjective, opts: RoofOptions):
    """Pairwise-rotation descent on every restart; ``rows`` is updated in place.

    A restart stops when a full sweep lowers its objective by no more
    than ``opts.tolerance`` (converged) or once it has spent
    ``opts.max_iterations`` Nelder-Mead iterations (not converged).
    """
    n_restarts, m = rows.shape[:2]
    values = objective(rows).sum(axis=1)
    converged = np.zeros(n_restarts, dtype=bool)
    if m < 2:
        return values, np.ones(n_restarts, dtype=bool)
    rounds = _round_robin(m)
    spent = np.zeros(n_restarts, dtype=int)
    active = np.ones(n_restarts, dtype=bool)
    while active.any():
        idx = np.flatnonzero(active)
        sub = rows[idx]
        budget = spent[idx] < opts.max_iterations
        for pairs in rounds:
            pi = np.array([p[0] for p in pairs])
            pj = np.array([p[1] for p in pairs])
            ri, rj = sub[:, pi], sub[:, pj]
            weight = np.sum(np.abs(ri) ** 2, axis=-1) + np.sum(np.abs(rj) ** 2, axis=-1)
            live = (weight > 0) & budget[:, None]
            if not live.any():
                continue
            ri_l, rj_l = ri[live], rj[live]

            def pair_cost(x, pid, ri_l=ri_l, rj_l=rj_l):
                f = objective(np.stack(_mix(ri_l[pid], rj_l[pid], x)))
                return f[0] + f[1]

            res = nelder_mead_batch(
                pair_cost,
                np.zeros((ri_l.shape[0], 2)),
                step=(0.4, 1.0),
                max_iter=opts.pair_iterations,
                xatol=opts.simplex_tol,
            )
            na, nb = _mix(ri_l, rj_l, res.x)
            ri[live], rj[live] = na, nb
            sub[:, pi], sub[:, pj] = ri, rj
            used = np.zeros(live.shape, dtype=int)
            used[live] = res.iterations
            spent[idx] += used.max(axis=1)
            budget = spent[idx] < opts.max_iterations
        rows[idx] = sub
        new_values = objective(sub).sum(axis=1)
        gain = values[idx] - new_values
        values[idx] = new_values
        done = gain <= opts.tolerance
        converged[idx[done]] = True
        active[idx[done | ~budget]] = False
    return values, converged


def convex_roof_mu(rho: DensityMatrix, shape: ShapeLike | None = None, opts: RoofOptions | None = None) -> RoofResult:
    """Estimate inf sum_i p_i mu(psi_i) over decompositions of ``rho``.

    Restart 0 starts from the eigen-ensemble itself; restart ``i > 0``
    starts from the eigen-ensemble mixed by a Haar-random unitary drawn
    from a sub-seed of ``opts.seed``.  The result is the minimum over
    restarts, ties going to the lowest index, so adding restarts can
    only lower the value.
    """
    shape = _check_shape(rho, shape)
    opts = opts or RoofOptions()
    eig = hermitian_eig(rho.entries)
    keep = eig.eigenvalues > RANK_CUTOFF
    rank = int(np.count_nonzero(keep))
    m = opts.ensemble_size if opts.ensemble_size is not None else rank * rank
    if m < rank:
        raise ArgumentError(f"ensemble size {m} is smaller than rank {rank}")
    if opts.restarts < 1:
        raise ArgumentError("at least one restart is required")

    lam = eig.eigenvalues[keep]
    base = np.zeros((m, shape.total_dim), dtype=np.complex128)
    base[:rank] = (eig.eigenvectors[:, keep] * np.sqrt(lam)).T

    starts = [base]
    for i in range(1, opts.restarts):
        u = random_unitary(m, _restart_seed(opts.seed, i))
        starts.append(u @ base)
    rows = np.stack(starts)

    values, converged = _descend(rows, _RowObjective(shape), opts)

    best = int(np.argmin(values))
    ensemble = _ensemble_from_rows(shape, rows[best])
    value = sum(w * mu(s).mu for w, s in ensemble.members)
    return RoofResult(
        value=float(np.clip(value, 0.0, 1.0)),
        best_ensemble=ensemble,
        restarts_used=opts.restarts,
        converged=bool(converged[best]),
        seed=opts.seed,
        best_restart=best,
        restart_values=tuple(float(v) for v in values),
    )
