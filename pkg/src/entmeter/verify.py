"""Seeded self-check of the library's invariants.

Each check draws its own random inputs from ``(seed, check index,
trial)`` and returns ``None`` on success or a JSON-serializable
counterexample.  Checks look functions up through their modules at call
time so a patched implementation is what gets tested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

import numpy as np

from . import measures as M
from . import mixed as X
from . import observables as O
from . import serialize as S
from . import states as ST
from . import tensor as T

Counterexample = Optional[dict]

SHAPES = [(2, 2), (2, 2, 2), (3, 3), (2, 3, 4)]


@dataclass(frozen=True)
class Check:
    module: str
    name: str
    run: Callable[[Callable[[int], np.random.Generator], int], Counterexample]


def _amps(psi) -> list:
    return [[float(z.real), float(z.imag)] for z in psi.amplitudes]


def _states(rng_for, trials, shapes=SHAPES):
    for t in range(trials):
        rng = rng_for(t)
        dims = shapes[t % len(shapes)]
        yield T.SystemShape(dims), ST.random_pure(dims, rng), rng


def _conventions(shape):
    return [c for c in O.BasisConvention if c.valid_for(shape)]


def check_partial_trace_composition(rng_for, trials):
    for t in range(trials):
        rng = rng_for(t)
        dims = [(2, 2, 2), (2, 3, 2), (2, 2, 2, 2)][t % 3]
        rho = ST.random_pure(dims, rng).density()
        n = len(dims)
        traced = sorted(rng.choice(n, size=n - 1, replace=False).tolist())
        keep = [i for i in range(n) if i not in traced]
        joint = T.partial_trace(rho, keep).entries
        step = rho
        remaining = list(range(n))
        for site in rng.permutation(traced).tolist():
            pos = remaining.index(site)
            remaining.remove(site)
            step = T.partial_trace(step, [i for i in range(len(remaining) + 1) if i != pos])
        err = float(np.max(np.abs(step.entries - joint)))
        if err > 1e-12:
            return {"dims": list(dims), "keep": keep, "error": err}
    return None


def check_isospectral_reductions(rng_for, trials):
    for t in range(trials):
        dims = [(2, 2), (2, 3), (3, 4), (2, 5)][t % 4]
        psi = ST.random_pure(dims, rng_for(t))
        pa = T.purity(T.partial_trace(psi, [0]))
        pb = T.purity(T.partial_trace(psi, [1]))
        if abs(pa - pb) > 1e-12:
            return {"dims": list(dims), "amplitudes": _amps(psi), "purities": [pa, pb]}
    return None


def check_eig_trace_and_projectors(rng_for, trials):
    for t in range(trials):
        rng = rng_for(t)
        n = 2 + t % 7
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = g + g.conj().T
        res = T.hermitian_eig(h)
        if abs(res.eigenvalues.sum() - np.trace(h).real) > 1e-10 * max(1.0, np.linalg.norm(h)):
            return {"order": n, "trace_mismatch": float(res.eigenvalues.sum() - np.trace(h).real)}
        k = 1 + t % n
        q, _ = np.linalg.qr(g)
        proj = q[:, :k] @ q[:, :k].conj().T
        ev = T.hermitian_eig(proj).eigenvalues
        dev = float(np.max(np.minimum(np.abs(ev), np.abs(ev - 1.0))))
        if dev > 1e-10:
            return {"order": n, "rank": k, "deviation": dev}
    return None


def check_kron_mixed_product(rng_for, trials):
    for t in range(trials):
        rng = rng_for(t)
        n = 2 + t % 2
        a, b, c, d = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(4))
        err = float(np.max(np.abs(T.kron(a, b) @ T.kron(c, d) - T.kron(a @ c, b @ d))))
        if err > 1e-12:
            return {"order": n, "error": err}
    return None


def check_killing_pairing(rng_for, trials):
    for shape, psi, rng in _states(rng_for, trials):
        basis = O.OperatorBasis.build(shape, O.BasisConvention.TRACE_ORTHONORMAL)
        xm = O.mean_operator(psi, basis).matrix
        coeffs = rng.standard_normal(len(basis.labels))
        emb, labels = basis.embedded, basis.labels
        x = sum(c * e for c, e in zip(coeffs, emb))
        # full-space trace counts the spectator identity, so divide it out per site
        lhs = sum(
            float(np.trace(xm @ (c * e)).real) * shape.dims[site] / shape.total_dim
            for c, e, (site, _) in zip(coeffs, emb, labels)
        )
        rhs = T.expectation(psi, x)
        if abs(lhs - rhs) > 1e-10 * max(1.0, abs(rhs)):
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "pairing": lhs, "expectation": rhs}
    return None


def check_basis_independence(rng_for, trials):
    for shape, psi, rng in _states(rng_for, trials):
        basis = O.OperatorBasis.build(shape, O.BasisConvention.TRACE_ORTHONORMAL)
        us = [ST.random_unitary(d, rng) for d in shape.dims]
        rotated = O.OperatorBasis(
            shape, basis.convention,
            tuple(tuple(u @ g @ u.conj().T for g in ops) for u, ops in zip(us, basis.local)),
        )
        err = float(np.max(np.abs(O.mean_operator(psi, basis).matrix - O.mean_operator(psi, rotated).matrix)))
        if err > 1e-9:
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "error": err}
    return None


def check_casimir_identity(rng_for, trials):
    for dims in [(2,), (3,), (4,), (2, 3), (2, 2, 2), (2, 3, 4)]:
        shape = T.SystemShape(dims)
        for conv in _conventions(shape):
            basis = O.OperatorBasis.build(shape, conv)
            for site, ops in enumerate(basis.local):
                total = sum(O.embed_local(g, site, shape) @ O.embed_local(g, site, shape) for g in ops)
                target = O.casimir_constant(dims[site], conv) * np.eye(shape.total_dim)
                err = float(np.max(np.abs(total - target)))
                if err > 1e-10:
                    return {"dims": list(dims), "site": site, "convention": conv.value, "error": err}
    return None


def check_mean_length(rng_for, trials):
    for t in range(trials):
        psi = ST.random_pure((2,), rng_for(t))
        basis = O.OperatorBasis.build(psi.shape, O.BasisConvention.SPIN)
        v = O.mean_operator_expectation(psi, basis)
        if not -1e-10 <= v <= 0.25 + 1e-10:
            return {"amplitudes": _amps(psi), "mean_length": v}
    for shape, psi, _ in _states(rng_for, trials):
        v = O.mean_operator_expectation(psi, O.OperatorBasis.build(shape))
        if v < 0:
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "mean_length": v}
    return None


def check_route_equivalence(rng_for, trials):
    for shape, psi, _ in _states(rng_for, trials):
        for conv in _conventions(shape):
            direct = M.total_variance_direct(psi, O.OperatorBasis.build(shape, conv))
            closed = M.total_variance_closed(psi, shape, conv)
            if abs(direct - closed) > 1e-9:
                return {"dims": list(shape.dims), "convention": conv.value, "amplitudes": _amps(psi),
                        "direct": direct, "closed": closed}
    return None


def check_casimir_decomposition(rng_for, trials):
    for shape, psi, _ in _states(rng_for, trials):
        for conv in _conventions(shape):
            basis = O.OperatorBasis.build(shape, conv)
            direct = M.total_variance_direct(psi, basis)
            means = O.local_expectations(psi, basis)
            recast = basis.casimir_total() - O.mean_operator_expectation(psi, basis)
            decomposed = basis.casimir_total() - float(np.sum(means**2))
            if abs(direct - decomposed) > 1e-9 or abs(direct - recast) > 1e-9:
                return {"dims": list(shape.dims), "convention": conv.value, "amplitudes": _amps(psi),
                        "direct": direct, "decomposed": decomposed, "recast": recast}
    return None


def check_variance_bound(rng_for, trials):
    cases = [(s.shape, s) for s in (ST.ghz3(), ST.ghz4(), ST.bell_pair_product(), ST.bell())]
    cases += [(shape, psi) for shape, psi, _ in _states(rng_for, trials)]
    for shape, psi in cases:
        basis = O.OperatorBasis.build(shape)
        v = M.total_variance_direct(psi, basis)
        cas = basis.casimir_total()
        _, rmax, _ = M.entanglement_residual(psi)
        equal = abs(v - cas) <= 1e-9
        if v > cas + 1e-10 or equal != (rmax <= 1e-9):
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "variance": v, "casimir": cas,
                    "residual_max": rmax}
    return None


def check_mu_range(rng_for, trials):
    for shape, psi, rng in _states(rng_for, trials):
        m = M.mu(psi).mu
        if not 0.0 <= m <= 1.0:
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "mu": m}
        prod = ST.product([ST.random_pure((d,), rng) for d in shape.dims])
        # mu is a square root, so 1e-16 roundoff in purities shows up near 1e-8
        if M.mu(prod).mu > 1e-6:
            return {"dims": list(shape.dims), "amplitudes": _amps(prod), "mu": M.mu(prod).mu}
    for psi in (ST.ghz3(), ST.ghz4(), ST.bell_pair_product()):
        if abs(M.mu(psi).mu - 1.0) > 1e-9:
            return {"dims": list(psi.shape.dims), "amplitudes": _amps(psi), "mu": M.mu(psi).mu}
    return None


def _lu_dress(psi, rng):
    return ST.apply_local(psi, [ST.random_unitary(d, rng) for d in psi.shape.dims])


def check_local_unitary_invariance(rng_for, trials):
    named = [ST.w3(), ST.ghz3(0.6), ST.biseparable3("AC"), ST.bell(), ST.ghz4(0.4)]
    for t in range(trials):
        rng = rng_for(t)
        psi = named[t % len(named)] if t < len(named) else ST.random_pure(SHAPES[t % 4], rng)
        phi = _lu_dress(psi, rng)
        pairs = [("mu", M.mu(psi).mu, M.mu(phi).mu)]
        if psi.shape.dims == (2, 2, 2):
            pairs.append(("three_tangle", M.three_tangle(psi), M.three_tangle(phi)))
        if len(psi.shape.dims) == 2 and psi.shape.dims[0] == psi.shape.dims[1]:
            pairs.append(("concurrence", M.concurrence_bipartite(psi), M.concurrence_bipartite(phi)))
        for name, a, b in pairs:
            if abs(a - b) > 1e-9:
                return {"dims": list(psi.shape.dims), "amplitudes": _amps(psi), "measure": name, "before": a, "after": b}
    return None


def check_convention_invariance(rng_for, trials):
    for shape, psi, _ in _states(rng_for, trials, shapes=[(2,), (2, 2), (2, 2, 2), (2, 2, 2, 2)]):
        vals = [M.mu(psi, shape, c).mu for c in O.BasisConvention]
        if max(vals) - min(vals) > 1e-10:
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "mu": vals}
    return None


def check_complete_entanglement(rng_for, trials):
    cases = [ST.ghz3(), ST.ghz4(), ST.bell_pair_product(), ST.bell()]
    cases += [psi for _, psi, _ in _states(rng_for, trials)]
    for psi in cases:
        _, rmax, _ = M.entanglement_residual(psi)
        pur = M.single_party_purities(psi)
        maximal = all(abs(p - 1.0 / d) <= 1e-9 for p, d in zip(pur, psi.shape.dims))
        if (rmax <= 1e-9) != maximal:
            return {"dims": list(psi.shape.dims), "amplitudes": _amps(psi), "residual_max": rmax, "purities": list(pur)}
    return None


def check_constructors_normalized(rng_for, trials):
    makers = [ST.w3, ST.w3_paper_variant, ST.bell, ST.bell_pair_product,
              lambda: ST.biseparable3("AB"), lambda: ST.biseparable3("AC"), lambda: ST.biseparable3("BC")]
    for t in range(trials):
        x = float(rng_for(t).uniform())
        makers += [lambda x=x: ST.ghz3(x), lambda x=x: ST.ghz4(x, -1)]
    for make in makers:
        psi = make()
        n = float(np.vdot(psi.amplitudes, psi.amplitudes).real)
        if abs(n - 1.0) > 1e-12:
            return {"dims": list(psi.shape.dims), "amplitudes": _amps(psi), "norm2": n}
    return None


def check_ghz3_purity(rng_for, trials):
    for t in range(trials):
        x = float(rng_for(t).uniform())
        pur = M.single_party_purities(ST.ghz3(x))
        want = x**4 + (1 - x * x) ** 2
        if max(abs(p - want) for p in pur) > 1e-12:
            return {"x": x, "purities": list(pur), "expected": want}
    return None


def check_sampler_unitary_invariance(rng_for, trials):
    rng = rng_for(0)
    u = ST.random_unitary(4, rng)
    n = 2000
    plain, rotated = [], []
    for _ in range(n):
        psi = ST.random_pure((2, 2), rng)
        plain.append(M.single_party_purities(psi)[0])
        phi = T.PureState.from_amplitudes(u @ psi.amplitudes, (2, 2))
        rotated.append(M.single_party_purities(phi)[0])
    # standard error of the mean purity is about 0.003 at n = 2000
    a, b = float(np.mean(plain)), float(np.mean(rotated))
    if abs(a - b) > 0.02 or abs(a - 0.8) > 0.02:
        return {"mean_purity": a, "mean_purity_rotated": b, "expected": 0.8}
    return None


_ROOF_OPTS = X.RoofOptions(restarts=4, seed=7)


def check_roof_chain(rng_for, trials):
    for t in range(min(trials, 3)):
        rng = rng_for(t)
        dims = [(2, 2), (2, 2, 2)][t % 2]
        rho = X.random_density(dims, 2, rng)
        res = X.convex_roof_mu(rho, opts=_ROOF_OPTS)
        upper = X.mu_upper_bound(rho)
        recon = float(np.max(np.abs(res.best_ensemble.density() - rho.entries)))
        wsum = float(res.best_ensemble.weights.sum())
        avg = sum(w * M.mu(s).mu for w, s in res.best_ensemble.members)
        if res.value > upper + 1e-8 or recon > 1e-8 or abs(wsum - 1) > 1e-10 or abs(avg - res.value) > 1e-10:
            return {"dims": list(dims), "value": res.value, "upper_bound": upper,
                    "reconstruction_error": recon, "weight_sum": wsum}
    return None


def check_roof_restart_monotonicity(rng_for, trials):
    rho = X.random_density((2, 2), 3, rng_for(0))
    prev = None
    for r in (1, 2, 4):
        v = X.convex_roof_mu(rho, opts=X.RoofOptions(restarts=r, seed=11)).value
        if prev is not None and v > prev + 1e-15:
            return {"restarts": r, "value": v, "previous": prev}
        prev = v
    return None


def check_wootters_pure(rng_for, trials):
    for t in range(trials):
        psi = ST.random_pure((2, 2), rng_for(t))
        a, b = X.wootters_concurrence(psi.density()), M.concurrence_bipartite(psi)
        # rank-one input: square roots of near-zero eigenvalues cost about half the digits
        if abs(a - b) > 1e-7:
            return {"amplitudes": _amps(psi), "wootters": a, "concurrence": b}
    return None


def check_state_file_round_trip(rng_for, trials):
    named = [ST.w3(), ST.ghz4(0.3), ST.bell_pair_product()]
    for psi in named + [p for _, p, _ in _states(rng_for, trials)]:
        back = S.state_from_json(S.state_to_json(psi))
        err = float(np.max(np.abs(back.amplitudes - psi.amplitudes)))
        if back.shape != psi.shape or err > 1e-15:
            return {"dims": list(psi.shape.dims), "error": err}
    return None


def check_report_convention(rng_for, trials):
    for shape, psi, _ in _states(rng_for, trials, shapes=[(2, 2), (2, 2, 2)]):
        a = S.report_to_dict(M.mu(psi, shape, O.BasisConvention.PAULI))["mu"]
        b = S.report_to_dict(M.mu(psi, shape, O.BasisConvention.TRACE_ORTHONORMAL))["mu"]
        if abs(a - b) > 1e-10:
            return {"dims": list(shape.dims), "amplitudes": _amps(psi), "mu": [a, b]}
    return None


CHECKS = [
    Check("tensor-core", "partial-trace-composition", check_partial_trace_composition),
    Check("tensor-core", "isospectral-reductions", check_isospectral_reductions),
    Check("tensor-core", "eig-trace-and-projectors", check_eig_trace_and_projectors),
    Check("tensor-core", "kron-mixed-product", check_kron_mixed_product),
    Check("observables", "killing-pairing", check_killing_pairing),
    Check("observables", "basis-independence", check_basis_independence),
    Check("observables", "casimir-identity", check_casimir_identity),
    Check("observables", "mean-length-bounds", check_mean_length),
    Check("measures", "route-equivalence", check_route_equivalence),
    Check("measures", "casimir-decomposition", check_casimir_decomposition),
    Check("measures", "variance-bound", check_variance_bound),
    Check("measures", "mu-range", check_mu_range),
    Check("measures", "local-unitary-invariance", check_local_unitary_invariance),
    Check("measures", "convention-invariance", check_convention_invariance),
    Check("measures", "complete-entanglement", check_complete_entanglement),
    Check("states", "constructors-normalized", check_constructors_normalized),
    Check("states", "ghz3-purity", check_ghz3_purity),
    Check("states", "sampler-unitary-invariance", check_sampler_unitary_invariance),
    Check("mixed-roof", "upper-bound-chain", check_roof_chain),
    Check("mixed-roof", "restart-monotonicity", check_roof_restart_monotonicity),
    Check("mixed-roof", "wootters-pure", check_wootters_pure),
    Check("cli", "state-file-round-trip", check_state_file_round_trip),
    Check("cli", "report-convention", check_report_convention),
]


def run_checks(seed: int, trials: int, out: TextIO, only: list[str] | None = None) -> bool:
    """Run every check, print one line each, return True when all pass."""
    ok = True
    for k, check in enumerate(CHECKS):
        if only and check.name not in only:
            continue

        def rng_for(t, k=k):
            ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(k, t))
            return np.random.Generator(np.random.PCG64(ss))

        try:
            bad = check.run(rng_for, trials)
        except Exception as exc:  # a crashing check is a failing check
            bad = {"exception": f"{type(exc).__name__}: {exc}"}
        label = f"{check.module}/{check.name}"
        if bad is None:
            out.write(f"PASS {label}\n")
        else:
            ok = False
            out.write(f"FAIL {label} counterexample={json.dumps(bad, separators=(',', ':'))}\n")
    return ok
