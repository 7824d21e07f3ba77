"""JSON state/density files and report rendering.

State file::

    {"dims": [2, 2], "amplitudes": [{"re": 0.7071, "im": 0.0}, ...]}

Density file::

    {"dims": [2, 2], "matrix": [{"re": ..., "im": ...}, ...]}   # row-major

Numbers in emitted documents carry 12 significant digits so repeated
runs produce identical bytes.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ArgumentError, ParseError, ValidationError
from .measures import EntanglementReport
from .mixed import Ensemble, RoofResult
from .tensor import DensityMatrix, PureState, SystemShape

log = logging.getLogger(__name__)

SIG_DIGITS = 12


def fmt(x: float) -> float:
    """Round to 12 significant digits, mapping -0.0 to 0.0."""
    v = float(f"{float(x):.{SIG_DIGITS}g}")
    return 0.0 if v == 0 else v


def fmt_str(x: float) -> str:
    return f"{fmt(x):.{SIG_DIGITS}g}"


def _complex_list(values) -> list[dict[str, float]]:
    return [{"re": fmt(z.real), "im": fmt(z.imag)} for z in np.asarray(values, dtype=np.complex128).ravel()]


def _exact_complex_list(values) -> list[dict[str, float]]:
    return [{"re": float(z.real), "im": float(z.imag)} for z in np.asarray(values, dtype=np.complex128).ravel()]


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _read_dims(doc: Any) -> SystemShape:
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    dims = doc.get("dims")
    if not isinstance(dims, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims):
        raise ParseError("'dims' must be a list of integers")
    try:
        return SystemShape(dims)
    except ArgumentError as exc:
        raise ValidationError("subsystem dimensions >= 2", str(exc)) from None


def _read_complex(entries: Any, field: str) -> np.ndarray:
    if not isinstance(entries, list):
        raise ParseError(f"'{field}' must be a list of {{re, im}} objects")
    out = np.empty(len(entries), dtype=np.complex128)
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or set(e) - {"re", "im"} or "re" not in e:
            raise ParseError(f"'{field}[{i}]' must be an object with keys re and im")
        re, im = e["re"], e.get("im", 0.0)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            raise ParseError(f"'{field}[{i}]' has non-numeric components")
        out[i] = complex(re, im)
    if not np.all(np.isfinite(out)):
        raise ValidationError("finite amplitudes", f"non-finite value in '{field}'")
    return out


def state_from_json(text: str) -> PureState:
    doc = _load_json(text)
    shape = _read_dims(doc)
    amps = _read_complex(doc.get("amplitudes"), "amplitudes")
    if amps.size != shape.total_dim:
        raise ValidationError("amplitude count equals product of dims", f"{amps.size} != {shape.total_dim}")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > 1e-6:
        raise ValidationError("normalized state", f"norm {norm!r} differs from 1 by more than 1e-6")
    if abs(norm * norm - 1.0) > 1e-10:
        log.warning("state norm %.3e off unity; renormalizing", norm - 1.0)
        amps = amps / norm
    return PureState(shape, amps)


def state_to_json(psi: PureState) -> str:
    doc = {"dims": list(psi.shape.dims), "amplitudes": _exact_complex_list(psi.amplitudes)}
    return json.dumps(doc, indent=2) + "\n"


def density_from_json(text: str) -> DensityMatrix:
    doc = _load_json(text)
    shape = _read_dims(doc)
    flat = _read_complex(doc.get("matrix"), "matrix")
    n = shape.total_dim
    if flat.size != n * n:
        raise ValidationError("matrix length equals (product of dims)^2", f"{flat.size} != {n * n}")
    m = flat.reshape(n, n)
    if np.max(np.abs(m - m.conj().T)) > 1e-8:
        raise ValidationError("Hermitian density matrix")
    tr = np.trace(m)
    if abs(tr - 1.0) > 1e-8:
        raise ValidationError("unit trace", f"trace {tr!r}")
    m = 0.5 * (m + m.conj().T)
    m = m / np.trace(m).real
    return DensityMatrix(shape, m)


def density_to_json(rho: DensityMatrix) -> str:
    doc = {"dims": list(rho.shape.dims), "matrix": _exact_complex_list(rho.entries)}
    return json.dumps(doc, indent=2) + "\n"


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def report_to_dict(report: EntanglementReport) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "mu": fmt(report.mu),
        "total_variance": fmt(report.total_variance),
        "v_coh": fmt(report.extremes.v_coh),
        "v_ent": fmt(report.extremes.v_ent),
        "purities": [fmt(p) for p in report.purities],
        "residual_max": fmt(report.residual_max),
        "convention": report.convention.value,
    }
    if report.three_tangle is not None:
        doc["three_tangle"] = fmt(report.three_tangle)
    if report.concurrence is not None:
        doc["concurrence"] = fmt(report.concurrence)
    return doc


def ensemble_to_list(ensemble: Ensemble) -> list[dict[str, Any]]:
    return [
        {"weight": fmt(w), "amplitudes": _complex_list(s.amplitudes)}
        for w, s in ensemble.members
    ]


def roof_to_dict(result: RoofResult, emit_ensemble: bool = False) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "value": fmt(result.value),
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "seed": result.seed,
    }
    if emit_ensemble:
        doc["ensemble"] = ensemble_to_list(result.best_ensemble)
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
