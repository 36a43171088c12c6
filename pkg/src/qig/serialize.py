"""JSON file formats for distributions, matrices, measurements and families."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .classical import ProbDist
from .errors import ValidationError
from .numerics import check_hermitian
from .states import (
    DensityMatrix,
    Povm,
    StateFamily,
    linear_family,
    thermal_family,
    unitary_family,
)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def load_probdist(path) -> ProbDist:
    """JSON array of non-negative reals; renormalised exactly after a 1e-9 check."""
    data = _load_json(path)
    if not isinstance(data, list):
        raise ValidationError("probability file must hold a JSON array")
    return ProbDist.normalised(np.asarray(data, dtype=float))


def save_probdist(path, p: ProbDist) -> None:
    Path(path).write_text(dumps(list(p.weights)))


def matrix_to_record(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": m.shape[0], "re": m.real.tolist(), "im": m.imag.tolist()}


def record_to_matrix(rec: dict) -> np.ndarray:
    if not isinstance(rec, dict) or not {"dim", "re", "im"} <= set(rec):
        raise ValidationError('matrix record needs keys "dim", "re", "im"')
    d = int(rec["dim"])
    re = np.asarray(rec["re"], dtype=float)
    im = np.asarray(rec["im"], dtype=float)
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValidationError(f"matrix entries do not match dim {d}")
    return re + 1j * im


def load_hermitian(path) -> np.ndarray:
    return check_hermitian(record_to_matrix(_load_json(path)))


def load_density(path) -> DensityMatrix:
    return DensityMatrix(record_to_matrix(_load_json(path)))


def save_matrix(path, m: np.ndarray) -> None:
    Path(path).write_text(dumps(matrix_to_record(m)))


def load_povm(path) -> Povm:
    data = _load_json(path)
    if not isinstance(data, list):
        raise ValidationError("POVM file must hold a JSON array of matrix records")
    return Povm(tuple(record_to_matrix(rec) for rec in data))


def save_povm(path, povm: Povm) -> None:
    Path(path).write_text(dumps([matrix_to_record(e) for e in povm.elements]))


def load_family(path) -> tuple[StateFamily, dict]:
    """Family record {"kind": ..., matrix records, "theta0", optional "tau"}."""
    rec = _load_json(path)
    if not isinstance(rec, dict) or "kind" not in rec:
        raise ValidationError('family file needs a "kind" key')
    kind = rec["kind"]
    meta = {"theta0": float(rec.get("theta0", 0.0)), "tau": float(rec.get("tau", 1.0))}
    if kind == "unitary":
        rho0 = DensityMatrix(record_to_matrix(rec["rho0"]))
        h = check_hermitian(record_to_matrix(rec["hamiltonian"]))
        return unitary_family(rho0, h), meta
    if kind == "linear":
        rho0 = DensityMatrix(record_to_matrix(rec["rho0"]))
        direction = check_hermitian(record_to_matrix(rec["direction"]))
        return linear_family(rho0, direction), meta
    if kind == "thermal":
        h = check_hermitian(record_to_matrix(rec["hamiltonian"]))
        return thermal_family(h), meta
    raise ValidationError(f"unknown family kind {kind!r}")


def save_family(path, kind: str, *, rho0=None, hamiltonian=None, direction=None,
                theta0: float = 0.0, tau: float | None = None) -> None:
    rec: dict = {"kind": kind, "theta0": theta0}
    if rho0 is not None:
        rec["rho0"] = matrix_to_record(rho0.matrix if isinstance(rho0, DensityMatrix) else rho0)
    if hamiltonian is not None:
        rec["hamiltonian"] = matrix_to_record(hamiltonian)
    if direction is not None:
        rec["direction"] = matrix_to_record(direction)
    if tau is not None:
        rec["tau"] = tau
    Path(path).write_text(dumps(rec))


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------


def _normalise(obj):
    """Convert payloads to plain JSON types; infinities become "inf" strings."""
    if isinstance(obj, dict):
        return {str(k): _normalise(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalise(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_normalise(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            raise ValidationError("refusing to serialise NaN")
        return x
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return _normalise(obj.to_dict())
    raise ValidationError(f"cannot serialise {type(obj).__name__}")


def _write(obj, parts: list):
    if isinstance(obj, dict):
        parts.append("{")
        for k, (key, val) in enumerate(obj.items()):
            if k:
                parts.append(", ")
            parts.append(json.dumps(key))
            parts.append(": ")
            _write(val, parts)
        parts.append("}")
    elif isinstance(obj, list):
        parts.append("[")
        for k, val in enumerate(obj):
            if k:
                parts.append(", ")
            _write(val, parts)
        parts.append("]")
    elif isinstance(obj, bool) or obj is None:
        parts.append(json.dumps(obj))
    elif isinstance(obj, float):
        parts.append(format(obj, ".17g"))
    else:
        parts.append(json.dumps(obj))


def dumps(payload) -> str:
    """JSON text with floats at 17 significant digits and "inf" for infinities."""
    parts: list = []
    _write(_normalise(payload), parts)
    return "".join(parts)


def contains_infinity(payload) -> bool:
    norm = _normalise(payload)

    def walk(obj):
        if isinstance(obj, dict):
            return any(walk(v) for v in obj.values())
        if isinstance(obj, list):
            return any(walk(v) for v in obj)
        return obj in ("inf", "-inf")

    return walk(norm)


def to_csv(payload) -> str:
    """Flatten a payload into two-column CSV rows (dotted paths, values)."""
    rows: list[tuple[str, str]] = []

    def walk(obj, prefix):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(v, f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(v, f"{prefix}[{i}]")
        else:
            val = format(obj, ".17g") if isinstance(obj, float) else str(obj)
            rows.append((prefix, val))

    walk(_normalise(payload), "")
    return "\n".join(f"{k},{v}" for k, v in rows) + "\n"
