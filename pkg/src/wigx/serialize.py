"""JSON operator documents, certificate/report serialization, CSV export.

The operator document is the only persistent format: matrices are stored
as nested [re, im] pairs row-major at full double precision (Python float
repr round-trips exactly), so write -> read -> write is byte-stable.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .extremes import ExtremalityReport, TrajectoryRecord
from .fock import FockOperator, is_psd, new_operator
from .positivity import PositivityCertificate

SCHEMA_VERSION = "1"


def operator_to_document(a: FockOperator, metadata: dict | None = None) -> dict:
    matrix = [
        [[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a.matrix)
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": a.dim,
        "matrix": matrix,
        "metadata": metadata or {},
    }


def document_to_operator(doc: dict) -> FockOperator:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    dim = int(doc["dim"])
    rows = doc["matrix"]
    if len(rows) != dim + 1 or any(len(r) != dim + 1 for r in rows):
        raise ValueError(f"matrix side does not match dim+1 = {dim + 1}")
    m = np.array([[complex(re, im) for re, im in row] for row in rows])
    return new_operator(dim, m)


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


def save_operator(path: str, a: FockOperator, metadata: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_document(operator_to_document(a, metadata)))
        fh.write("\n")


def load_operator(path: str) -> FockOperator:
    with open(path) as fh:
        return document_to_operator(json.load(fh))


def certificate_to_dict(cert: PositivityCertificate) -> dict:
    out: dict[str, Any] = {
        "verdict": cert.verdict.value,
        "method": cert.method,
        "min_found": cert.min_found,
        "tolerances": dict(cert.tolerances),
    }
    if cert.witness is not None:
        out["witness"] = [cert.witness.real, cert.witness.imag]
        out["witness_value"] = cert.witness_value
    if cert.zero_radii:
        out["zero_radii"] = [[r, m] for r, m in cert.zero_radii]
    if cert.zero_points:
        out["zero_points"] = [[z.real, z.imag] for z in cert.zero_points]
    return out


def report_to_dict(report: ExtremalityReport) -> dict:
    out: dict[str, Any] = {
        "verdict": report.verdict,
        "nullspace_dim": report.nullspace_dim,
        "constraints_used": report.constraints_used,
    }
    if report.perturbation is not None:
        out["perturbation"] = operator_to_document(report.perturbation)
        out["epsilon"] = report.epsilon
        out["endpoint_verdicts"] = list(report.endpoint_verdicts)
    return out


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def trajectory_to_csv(
    record: TrajectoryRecord,
    coords: list[list[float]] | None = None,
    coord_labels: list[str] | None = None,
    tol: float = 1e-10,
) -> str:
    """CSV rows: t, coordinates, min_eig, wigner_min, is_state, is_wps.

    Default coordinates are the diagonal (Fock populations) of each
    normalized operator; figure reproductions pass their own slices.
    """
    if len(record.t_values) == 0:
        raise ValueError("empty trajectory record")
    if coords is None:
        n = max(op.dim for op in record.operators)
        coords = [
            list(np.real(np.diag(op.padded(n).matrix))) for op in record.operators
        ]
        coord_labels = [f"p{k}" for k in range(n + 1)]
    if coord_labels is None or len(coord_labels) != len(coords[0]):
        raise ValueError("coordinate labels do not match coordinate width")
    lines = ["t," + ",".join(coord_labels) + ",min_eig,wigner_min,is_state,is_wps"]
    for i, t in enumerate(record.t_values):
        scale = max(1.0, float(np.abs(record.operators[i].matrix).max()))
        is_state = bool(record.min_eigenvalues[i] >= -tol * scale)
        is_wps = bool(record.wigner_min[i] >= -tol * scale)
        row = [_fmt(float(t))]
        row += [_fmt(float(c)) for c in coords[i]]
        row += [
            _fmt(float(record.min_eigenvalues[i])),
            _fmt(float(record.wigner_min[i])),
            str(int(is_state)),
            str(int(is_wps)),
        ]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
