"""Named pure states and seeded random sampling.

Random draws use numpy's PCG64 bit generator seeded with the caller's
integer, so a given ``(shape, seed)`` always produces the same bits.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .errors import ArgumentError
from .tensor import PureState, ShapeLike, as_shape

SQRT1_2 = 1.0 / np.sqrt(2.0)


def rng_from(seed) -> np.random.Generator:
    """PCG64 generator from an integer seed or SeedSequence; Generators pass through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def basis_state(bits: Sequence[int], dims: ShapeLike | None = None) -> PureState:
    """Computational basis state |b0 b1 ...>."""
    shape = as_shape(dims if dims is not None else [2] * len(bits))
    if len(bits) != shape.n_parties:
        raise ArgumentError("one digit per subsystem is required")
    amps = np.zeros(shape.dims, dtype=np.complex128)
    amps[tuple(bits)] = 1.0
    return PureState(shape, amps.reshape(-1))


def _superpose(terms: dict[str, complex], dims=None) -> PureState:
    n = len(next(iter(terms)))
    shape = as_shape(dims if dims is not None else [2] * n)
    amps = np.zeros(shape.dims, dtype=np.complex128)
    for label, c in terms.items():
        amps[tuple(int(ch) for ch in label)] += c
    return PureState.from_amplitudes(amps.reshape(-1), shape)


def _check_x(x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ArgumentError(f"x must lie in [0, 1], got {x}")
    return x


def ghz3(x: float = SQRT1_2) -> PureState:
    """x|000> + sqrt(1 - x^2)|111>."""
    x = _check_x(x)
    return _superpose({"000": x, "111": np.sqrt(max(1.0 - x * x, 0.0))})


def ghz4(x: float = SQRT1_2, sign: int | str = +1) -> PureState:
    """x|0000> +/- sqrt(1 - x^2)|1111>."""
    x = _check_x(x)
    s = -1.0 if sign in (-1, "-", "minus") else 1.0
    return _superpose({"0000": x, "1111": s * np.sqrt(max(1.0 - x * x, 0.0))})


def w3() -> PureState:
    """Symmetric W state (|001> + |010> + |100>)/sqrt(3)."""
    return _superpose({"001": 1.0, "010": 1.0, "100": 1.0})


def w3_paper_variant() -> PureState:
    """(|011> + |010> + |110>)/sqrt(3).

    This is not local-unitarily equivalent to :func:`w3`; its single-party
    purities are (7/9, 1, 7/9) rather than 5/9 each.
    """
    return _superpose({"011": 1.0, "010": 1.0, "110": 1.0})


_BISEPARABLE = {
    "BC": ("001", "010"),
    "AC": ("001", "100"),
    "AB": ("010", "100"),
}


def biseparable3(variant: str = "BC") -> PureState:
    """Equal superposition of two basis states sharing one fixed qubit.

    ``variant`` names the entangled pair; the remaining qubit is |0>.
    """
    try:
        a, b = _BISEPARABLE[variant.upper()]
    except KeyError:
        raise ArgumentError(f"variant must be one of {sorted(_BISEPARABLE)}, got {variant!r}") from None
    return _superpose({a: 1.0, b: 1.0})


def bell() -> PureState:
    return _superpose({"00": 1.0, "11": 1.0})


def bell_pair_product() -> PureState:
    """(|00> + |11>)/sqrt(2) tensored with (|01> + |10>)/sqrt(2)."""
    return product([bell(), _superpose({"01": 1.0, "10": 1.0})])


def product(states: Sequence[PureState]) -> PureState:
    if not states:
        raise ArgumentError("product of an empty list")
    dims = [d for s in states for d in s.shape.dims]
    amps = reduce(np.kron, [s.amplitudes for s in states])
    return PureState.from_amplitudes(amps, dims)


def random_pure(shape: ShapeLike, seed) -> PureState:
    """Haar-random pure state: normalized standard complex Gaussian vector."""
    shape = as_shape(shape)
    rng = rng_from(seed)
    z = rng.standard_normal(shape.total_dim) + 1j * rng.standard_normal(shape.total_dim)
    return PureState.from_amplitudes(z, shape)


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-random d x d unitary via QR of a complex Ginibre matrix."""
    rng = rng_from(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def apply_local(psi: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply one operator per site, U_0 x U_1 x ... acting on ``psi``."""
    if len(unitaries) != psi.shape.n_parties:
        raise ArgumentError("need one local operator per subsystem")
    t = psi.tensor()
    for site, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [site])), 0, site)
    return PureState.from_amplitudes(t.reshape(-1), psi.shape)


NAMED_STATES = {
    "ghz3": ghz3,
    "ghz4": ghz4,
    "w3": w3,
    "w3-paper": w3_paper_variant,
    "bell": bell,
    "bell-pair": bell_pair_product,
    "biseparable-ab": lambda: biseparable3("AB"),
    "biseparable-ac": lambda: biseparable3("AC"),
    "biseparable-bc": lambda: biseparable3("BC"),
    "ghz4-minus": lambda x=SQRT1_2: ghz4(x, -1),
}

_X_FAMILIES = {"ghz3", "ghz4", "ghz4-minus"}


def named_state(name: str, x: float | None = None) -> PureState:
    """Look up a state by its CLI name; ``x`` applies to the GHZ families."""
    key = name.strip().lower().replace("_", "-")
    if key not in NAMED_STATES:
        raise ArgumentError(f"unknown state {name!r}; choose from {', '.join(NAMED_STATES)}")
    if key in _X_FAMILIES:
        return NAMED_STATES[key]() if x is None else NAMED_STATES[key](x)
    if x is not None:
        raise ArgumentError(f"state {name!r} takes no x parameter")
    return NAMED_STATES[key]()
