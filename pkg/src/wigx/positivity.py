"""Wigner-positivity certification and operator classification.

Phase-invariant operators get an exact verdict through their radial
polynomial. General operators are certified on the polynomial part of the
Wigner function (the Gaussian envelope never changes sign): a polar grid
plus per-ray half-line checks plus Newton refinement of local minima.
POSITIVE_NUMERIC is an explicit semi-decision ("no negative point found
at this resolution"); NEGATIVE always carries a concrete witness point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fock import FockOperator, is_phase_invariant, is_psd, support_degree
from .phase_space import (
    MonomialMatrix,
    monomial_matrix,
    polynomial_dalpha,
    polynomial_eval,
    radial_polynomial,
    wigner,
)
from .polynomials import RealPolynomial, is_nonneg_on_halfline, real_roots_nonneg


class Verdict(enum.Enum):
    POSITIVE_EXACT = "POSITIVE_EXACT"
    POSITIVE_NUMERIC = "POSITIVE_NUMERIC"
    NEGATIVE = "NEGATIVE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class GridConfig:
    n_radii: int = 400
    n_angles: int = 256
    tol: float = 1e-9
    grad_tol: float = 1e-12
    r_max: Optional[float] = None  # None: automatic Cauchy-type bound


@dataclass(frozen=True)
class PositivityCertificate:
    verdict: Verdict
    method: str  # "radial" | "grid_refine"
    min_found: float  # smallest Wigner value encountered
    witness: Optional[complex] = None  # phase-space point for NEGATIVE
    witness_value: Optional[float] = None  # W at the witness
    tolerances: dict = field(default_factory=dict)
    zero_radii: tuple = ()  # (radius, multiplicity) circles, radial route
    zero_points: tuple = ()  # refined near-zero minima, grid route

    @property
    def is_positive(self) -> bool:
        return self.verdict in (Verdict.POSITIVE_EXACT, Verdict.POSITIVE_NUMERIC)


def _auto_radius(P: np.ndarray, tol: float) -> float:
    """Radius beyond which the top-degree angular part dominates.

    Cauchy-type bound on q(r) = min_phi(top part) * r^D - sum of lower
    coefficient magnitudes * r^d. When the top part can vanish along some
    angle, the per-ray half-line checks cover the far field instead and
    the bound only needs to be generous.
    """
    n = P.shape[0] - 1
    mags = np.abs(P)
    scale = mags.max()
    if scale == 0:
        return 1.0
    deg = np.add.outer(np.arange(n + 1), np.arange(n + 1))
    dmax = int(deg[mags > 1e-14 * scale].max(initial=0))
    if dmax == 0:
        return 1.0
    # minimum over angles of the leading angular polynomial
    phi = np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False)
    lead = np.zeros_like(phi)
    for k in range(n + 1):
        for l in range(n + 1):
            if k + l == dmax and mags[k, l] > 1e-14 * scale:
                lead += np.real(P[k, l] * np.exp(1j * (l - k) * phi))
    gmin = float(lead.min())
    sigma = np.array([mags[deg == d].sum() for d in range(dmax)])
    floor = max(gmin, 1e-3 * scale)
    bound = 1.0 + max(
        (sigma[d] / floor) ** (1.0 / (dmax - d)) for d in range(dmax)
    )
    return float(min(max(bound, 4.0), 60.0))


def _newton_refine(P: np.ndarray, z: complex, grad_tol: float, scale: float):
    """Minimize the real polynomial from z; returns (point, value, converged)."""
    Pa = polynomial_dalpha(P)
    Paa = polynomial_dalpha(Pa)
    Pab = polynomial_dalpha(Pa.T).T  # row shift: d/d(alpha*) of Pa
    for _ in range(60):
        g = complex(polynomial_eval(Pa, z))
        fx, fy = 2.0 * g.real, -2.0 * g.imag
        gnorm = math.hypot(fx, fy)
        if gnorm <= grad_tol * scale:
            return z, float(np.real(polynomial_eval(P, z))), True
        haa = complex(polynomial_eval(Paa, z))
        hab = float(np.real(polynomial_eval(Pab, z)))
        fxx = 2.0 * haa.real + 2.0 * hab
        fyy = -2.0 * haa.real + 2.0 * hab
        fxy = -2.0 * haa.imag
        det = fxx * fyy - fxy * fxy
        if det > 1e-14 * scale**2 and fxx > 0:
            dx = -(fyy * fx - fxy * fy) / det
            dy = -(fxx * fy - fxy * fx) / det
        else:  # fall back to gradient descent with a conservative step
            step = 0.1 * max(1.0, abs(z)) / max(gnorm, 1e-300)
            dx, dy = -fx * step, -fy * step
        if math.hypot(dx, dy) > 1.0:
            norm = math.hypot(dx, dy)
            dx, dy = dx / norm, dy / norm
        z = z + complex(dx, dy)
    return z, float(np.real(polynomial_eval(P, z))), False


def _radial_wigner_min(p: RealPolynomial) -> float:
    """min over t >= 0 of p(t) exp(-2t): critical points solve p' = 2p."""
    d = p.derivative()
    coeffs = np.zeros(max(len(d.coeffs), len(p.coeffs)))
    coeffs[: len(d.coeffs)] += d.coeffs
    coeffs[: len(p.coeffs)] -= 2.0 * p.coeffs
    cand = [0.0]
    if len(np.trim_zeros(coeffs, "b")) > 1:
        roots = np.polynomial.polynomial.polyroots(np.trim_zeros(coeffs, "b"))
        cand += [z.real for z in roots if abs(z.imag) < 1e-8 and z.real > 0]
    return float(min(p(t) * math.exp(-2.0 * t) for t in cand))


def _certify_radial(a: FockOperator, cfg: GridConfig) -> PositivityCertificate:
    p = radial_polynomial(a)
    check = is_nonneg_on_halfline(p, cfg.tol)
    tolerances = {"tol": cfg.tol}
    if check.ok:
        zero_radii = []
        if p.degree >= 1:
            for t, m in real_roots_nonneg(p):
                zero_radii.append((math.sqrt(max(t, 0.0)), m))
        return PositivityCertificate(
            verdict=Verdict.POSITIVE_EXACT,
            method="radial",
            min_found=_radial_wigner_min(p),
            tolerances=tolerances,
            zero_radii=tuple(zero_radii),
        )
    # witness where the damped function is most negative, not where the
    # bare polynomial is (exponential damping can underflow far out)
    d = p.derivative()
    coeffs = np.zeros(max(len(d.coeffs), len(p.coeffs)))
    coeffs[: len(d.coeffs)] += d.coeffs
    coeffs[: len(p.coeffs)] -= 2.0 * p.coeffs
    cand = [0.0, float(check.witness)]
    trimmed = np.trim_zeros(coeffs, "b")
    if len(trimmed) > 1:
        cand += [
            z.real
            for z in np.polynomial.polynomial.polyroots(trimmed)
            if abs(z.imag) < 1e-8 and z.real > 0
        ]
    t_w = min(cand, key=lambda t: p(t) * math.exp(-2.0 * t))
    alpha_w = complex(math.sqrt(max(t_w, 0.0)))
    w_val = float(p(t_w) * math.exp(-2.0 * t_w))
    return PositivityCertificate(
        verdict=Verdict.NEGATIVE,
        method="radial",
        min_found=w_val,
        witness=alpha_w,
        witness_value=w_val,
        tolerances=tolerances,
    )


def _certify_grid(a: FockOperator, cfg: GridConfig) -> PositivityCertificate:
    P = monomial_matrix(a).P
    scale = max(1.0, float(np.abs(P).max()))
    r_max = cfg.r_max if cfg.r_max is not None else _auto_radius(P, cfg.tol)
    tolerances = {"tol": cfg.tol, "grad_tol": cfg.grad_tol, "r_max": r_max}

    phi = np.linspace(0.0, 2.0 * math.pi, cfg.n_angles, endpoint=False)
    n = P.shape[0] - 1

    # exact per-ray screen: the restriction to each sampled angle is a
    # real univariate polynomial in r, so far-field negativity along
    # sampled rays cannot hide beyond the grid radius
    harmonics: dict[int, dict[int, complex]] = {}
    for k in range(n + 1):
        for l in range(n + 1):
            if P[k, l] != 0:
                comp = harmonics.setdefault(k + l, {})
                comp[l - k] = comp.get(l - k, 0.0) + P[k, l]
    worst_ray = None
    for j, ph in enumerate(phi):
        coeffs = np.zeros(2 * n + 1)
        for d, comp in harmonics.items():
            coeffs[d] += sum(np.real(c * np.exp(1j * s * ph)) for s, c in comp.items())
        ray = RealPolynomial(coeffs)
        chk = is_nonneg_on_halfline(ray, cfg.tol)
        if not chk.ok:
            # witness where the damped restriction is most negative
            rs = np.linspace(0.0, max(float(chk.witness) * 1.2, 1.0), 800)
            damped = ray(rs) * np.exp(-2.0 * rs**2)
            i = int(np.argmin(damped))
            if worst_ray is None or chk.min_value < worst_ray[0]:
                worst_ray = (chk.min_value, rs[i] * np.exp(1j * ph), float(damped[i]))

    # polar grid evaluation + refinement of the lowest minima
    radii = np.linspace(0.0, r_max, cfg.n_radii)
    grid = radii[:, None] * np.exp(1j * phi)[None, :]
    vals = np.real(polynomial_eval(P, grid.ravel())).reshape(grid.shape)
    order = np.argsort(vals, axis=None)
    seeds = [grid.ravel()[i] for i in order[:24]]
    min_found = float(vals.min())
    min_point = grid.ravel()[order[0]]
    zero_points = []
    any_diverged = False
    for z0 in seeds:
        z, v, ok = _newton_refine(P, z0, cfg.grad_tol, scale)
        if not ok:
            any_diverged = True
        if v < min_found:
            min_found, min_point = v, z
        if ok and abs(v) <= 10.0 * cfg.tol * scale:
            zero_points.append(complex(z))
    poly_min = min_found if worst_ray is None else min(min_found, worst_ray[0])

    # damped (actual Wigner-scale) value and witness
    damped = min_found * math.exp(-2.0 * abs(min_point) ** 2)
    witness_point = complex(min_point)
    if worst_ray is not None and worst_ray[2] < damped:
        damped, witness_point = worst_ray[2], complex(worst_ray[1])

    if poly_min < -cfg.tol * scale:
        return PositivityCertificate(
            verdict=Verdict.NEGATIVE,
            method="grid_refine",
            min_found=damped,
            witness=witness_point,
            witness_value=damped,
            tolerances=tolerances,
        )
    if any_diverged and poly_min < 0.0:
        return PositivityCertificate(
            verdict=Verdict.INCONCLUSIVE,
            method="grid_refine",
            min_found=damped,
            tolerances=tolerances,
        )
    return PositivityCertificate(
        verdict=Verdict.POSITIVE_NUMERIC,
        method="grid_refine",
        min_found=damped,
        tolerances=tolerances,
        zero_points=tuple(_cluster_points(zero_points)),
    )


def _cluster_points(points: list[complex], radius: float = 1e-6) -> list[complex]:
    reps: list[complex] = []
    for z in points:
        if all(abs(z - r) > radius * max(1.0, abs(z)) for r in reps):
            reps.append(z)
    return reps


def certify_wigner(a: FockOperator, cfg: GridConfig | None = None) -> PositivityCertificate:
    """Certificate of Wigner positivity (exact radial route when possible)."""
    cfg = cfg or GridConfig()
    a = a.trimmed()
    if is_phase_invariant(a, 1e-10):
        return _certify_radial(a, cfg)
    return _certify_grid(a, cfg)


def verify_witness(a: FockOperator, cert: PositivityCertificate) -> float:
    """Independent re-evaluation of a NEGATIVE witness via transition sums."""
    if cert.witness is None:
        raise ValueError("certificate carries no witness")
    return float(wigner(a, cert.witness))


def wigner_min_value(a: FockOperator, cfg: GridConfig | None = None) -> float:
    """Smallest Wigner value found (exact critical points when radial)."""
    a = a.trimmed()
    if is_phase_invariant(a, 1e-10):
        return _radial_wigner_min(radial_polynomial(a))
    return _certify_grid(a, cfg or GridConfig()).min_found


def is_in_A_sigma(a: FockOperator, tol: float = 1e-10) -> bool:
    """PSD monomial matrix: the polynomial is a mixture of |p(alpha)|^2."""
    P = monomial_matrix(a).P
    vals = np.linalg.eigvalsh(P)
    return bool(vals[0] >= -tol * max(1.0, float(np.abs(vals).max())))


@dataclass(frozen=True)
class Classification:
    is_state: bool
    wigner: PositivityCertificate
    phase_invariant: bool
    support: int
    in_A_sigma: bool

    @property
    def is_wigner_positive(self) -> bool:
        return self.wigner.is_positive


def classify(a: FockOperator, tol: float = 1e-10, cfg: GridConfig | None = None) -> Classification:
    """Composite record: state / Wigner verdict / phase invariance / support."""
    return Classification(
        is_state=is_psd(a, tol) and abs(a.trace - 1.0) <= 1e-9,
        wigner=certify_wigner(a, cfg),
        phase_invariant=is_phase_invariant(a, tol),
        support=support_degree(a, tol),
        in_A_sigma=is_in_A_sigma(a),
    )
