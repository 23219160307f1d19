"""Dataset builders for the two reference figures (CSV, no plotting).

Slice 1 ("bloch"): qubit states rho = r |psi(theta)><psi(theta)|
+ (1-r) I/2 with psi(theta) = cos(theta/2)|0> + sin(theta/2)|1>;
trajectories are reported in (r, theta) slice coordinates.

Slice 2 ("mixtures"): diagonal operators
(1-p1-p2)|0><0| + p1|1><1| + p2|2><2| reported in (p1, p2), together
with the boundary of the Wigner-positive region in that slice.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .extremes import TrajectoryRecord, vertigo_trajectory
from .fock import FockOperator, new_operator
from .serialize import trajectory_to_csv
from .states import bs_state_fock


def bloch_slice_state(r: float, theta: float) -> FockOperator:
    psi = np.array([math.cos(theta / 2.0), math.sin(theta / 2.0)], dtype=complex)
    m = r * np.outer(psi, psi.conj()) + (1.0 - r) * np.eye(2) / 2.0
    return new_operator(1, m)


def bloch_slice_coords(op: FockOperator) -> tuple[float, float]:
    """(r, theta) of a qubit state in the real x-z Bloch slice."""
    x = 2.0 * float(op.matrix[0, 1].real)
    z = float((op.matrix[0, 0] - op.matrix[1, 1]).real)
    return math.hypot(x, z), math.atan2(x, z)


def fig5_datasets(t_grid=None) -> dict[str, str]:
    """Bloch-slice trajectories; every state with <1|rho|1> > 0 flows to
    the slice center sigma(1,0)."""
    if t_grid is None:
        t_grid = np.geomspace(1.0, 1e4, 40)
    starts = []
    for theta_deg in (30, 90, 150, 180, 240, 300):
        for r in (0.35, 0.75, 0.95):
            starts.append((r, math.radians(theta_deg)))
    out: dict[str, str] = {}
    for i, (r, theta) in enumerate(starts):
        op = bloch_slice_state(r, theta)
        rec = vertigo_trajectory(op, t_grid)
        coords = [list(bloch_slice_coords(o)) for o in rec.operators]
        out[f"fig5_traj{i:02d}.csv"] = trajectory_to_csv(
            rec, coords=coords, coord_labels=["r", "theta"]
        )
    return out


def mixture_coords(op: FockOperator) -> tuple[float, float]:
    m = op.padded(2).matrix
    return float(m[1, 1].real), float(m[2, 2].real)


def fig7_boundary_csv(n_curve: int = 120, n_edge: int = 40) -> str:
    """Boundary of the Wigner-positive region in the (p1, p2) slice.

    Curved branch: the rescaling trajectory of sigma(1,1), i.e.
    p1 = t(t-1)/D, p2 = t^2/(2D) with D = 2t^2 - 2t + 1 (double-root
    family); straight branch: p1 = 1/2, 0 <= p2 <= 1/4 (zero at the
    origin of phase space).
    """
    lines = ["branch,p1,p2"]
    for t in np.geomspace(1e-3, 1e3, n_curve):
        D = 2.0 * t * t - 2.0 * t + 1.0
        lines.append(f"curve,{t * (t - 1.0) / D:.12g},{t * t / (2.0 * D):.12g}")
    for p2 in np.linspace(0.0, 0.25, n_edge):
        lines.append(f"edge,0.5,{p2:.12g}")
    return "\n".join(lines) + "\n"


def fig7_datasets(t_grid=None) -> dict[str, str]:
    if t_grid is None:
        t_grid = np.geomspace(1e-2, 1e2, 49)
    out: dict[str, str] = {}

    def csv_for(op: FockOperator) -> str:
        rec = vertigo_trajectory(op.padded(2), t_grid)
        coords = [list(mixture_coords(o)) for o in rec.operators]
        return trajectory_to_csv(rec, coords=coords, coord_labels=["p1", "p2"])

    out["fig7_traj_sigma11.csv"] = csv_for(bs_state_fock(1, 1))
    for n in (0, 1, 2):
        out[f"fig7_fixed_sigma{n}0.csv"] = csv_for(bs_state_fock(n, 0))
    # a few interior/exterior mixtures for context
    samples = {
        "fig7_traj_mix_a.csv": np.diag([0.55, 0.3, 0.15]).astype(complex),
        "fig7_traj_mix_b.csv": np.diag([0.2, 0.35, 0.45]).astype(complex),
        "fig7_traj_quasi.csv": np.diag([1.15, -0.35, 0.2]).astype(complex),
    }
    for name, m in samples.items():
        out[name] = csv_for(new_operator(2, m))
    out["fig7_boundary.csv"] = fig7_boundary_csv()
    return out


def write_datasets(datasets: dict[str, str], outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    for name in sorted(datasets):
        path = os.path.join(outdir, name)
        with open(path, "w") as fh:
            fh.write(datasets[name])
        written.append(path)
    return written
