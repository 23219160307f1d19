"""Constructors for the named operators used throughout the package.

Fock states and superpositions, beam-splitter states through two
independent routes (the closed-form Fock-diagonal sum and the exact
two-mode simulation), binomial states, extreme phase-invariant
quasi-states built from elementary symmetric polynomials, the Motzkin
quasi-state, and seeded random (quasi-)states.
"""

from __future__ import annotations

import math
from math import comb, factorial

import numpy as np

from .channels import beam_splitter_trace
from .fock import FockOperator, _wrap, new_operator
from .phase_space import MonomialMatrix, operator_from_monomial
from .polynomials import ExtremeRadialSpec, elementary_symmetric_all


class InvalidSpec(ValueError):
    """Extreme-form spec outside the representable family."""


def pure_state(amplitudes) -> np.ndarray:
    """Normalized state vector on H^{len-1}."""
    c = np.asarray(amplitudes, dtype=complex).ravel()
    norm = np.linalg.norm(c)
    if norm <= 1e-12:
        raise ValueError("cannot normalize a (near-)zero state vector")
    return c / norm


def fock_state(n: int, dim: int | None = None) -> np.ndarray:
    d = n if dim is None else dim
    c = np.zeros(d + 1, dtype=complex)
    c[n] = 1.0
    return c


def bs_state_fock(m: int, n: int) -> FockOperator:
    """Balanced beam-splitter state of |m> and |n|, closed Fock-diagonal form.

    sigma(m,n) = 2^{-m-n}/(m! n!) sum_z z!(m+n-z)!
                 [ sum_j (-1)^j C(m,j) C(n,z-j) ]^2 |z><z|.
    """
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    N = m + n
    diag = np.zeros(N + 1)
    pref = 2.0 ** (-N) / (factorial(m) * factorial(n))
    for z in range(N + 1):
        s = sum(
            (-1) ** j * comb(m, j) * comb(n, z - j)
            for j in range(max(0, z - n), min(z, m) + 1)
        )
        diag[z] = pref * factorial(z) * factorial(N - z) * s * s
    return _wrap(np.diag(diag).astype(complex))


def binomial_state(n: int) -> FockOperator:
    """sigma(n,0) = 2^{-n} sum_k C(n,k) |k><k| (unit trace)."""
    return bs_state_fock(n, 0)


def bs_state_pure(psi, phi) -> FockOperator:
    """Balanced beam-splitter state of two pure inputs (two-mode route)."""
    return beam_splitter_trace(pure_state(psi), pure_state(phi), 0.5)


def extreme_radial_quasistate(spec: ExtremeRadialSpec) -> FockOperator:
    """Phase-invariant unit-trace quasi-state whose radial polynomial (in
    the variable u = 2|alpha|^2) is proportional to u^k prod (u - lam_i)^2.

    Built as (-1)^m sum_j (-1)^j j! e_{m-j}(mu) sigma(j,0) with
    mu = (0^k, lam_1, lam_1, ..., lam_l, lam_l), then trace-normalized.
    """
    if not isinstance(spec, ExtremeRadialSpec):
        raise InvalidSpec(f"expected ExtremeRadialSpec, got {type(spec).__name__}")
    mu = spec.mu()
    m = len(mu)
    e = elementary_symmetric_all(mu)
    out = np.zeros((m + 1, m + 1), dtype=complex)
    for j in range(m + 1):
        coeff = (-1.0) ** (m + j) * factorial(j) * e[m - j]
        if coeff != 0.0:
            out[: j + 1, : j + 1] += coeff * bs_state_fock(j, 0).matrix
    op = _wrap(out)
    tr = op.trace
    if tr <= 0:
        raise InvalidSpec(f"spec {spec} yields non-positive trace {tr}")
    return op / tr


# Monomial matrix of the Motzkin polynomial x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1
# under x = alpha + alpha*, y = -i(alpha - alpha*); empty entries are zero.
MOTZKIN_MONOMIAL = np.zeros((6, 6), dtype=complex)
MOTZKIN_MONOMIAL[0, 0] = 1.0
MOTZKIN_MONOMIAL[0, 4] = 3.0
MOTZKIN_MONOMIAL[4, 0] = 3.0
MOTZKIN_MONOMIAL[1, 5] = -4.0
MOTZKIN_MONOMIAL[5, 1] = -4.0
MOTZKIN_MONOMIAL[2, 2] = -6.0
MOTZKIN_MONOMIAL[3, 3] = 8.0


def motzkin_polynomial(x, y):
    """x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1."""
    return x**4 * y**2 + x**2 * y**4 - 3.0 * x**2 * y**2 + 1.0


def motzkin_quasistate() -> FockOperator:
    """Unit-trace quasi-state of the Motzkin monomial matrix.

    Wigner-positive (the Motzkin polynomial is non-negative) but not PSD,
    and its polynomial is not a sum of absolute squares.
    """
    P = MonomialMatrix(dim=5, P=MOTZKIN_MONOMIAL)
    op = operator_from_monomial(P)
    return op / op.trace


def random_state(dim: int, seed: int) -> FockOperator:
    """Seeded PSD unit-trace operator G G^dag / Tr from a complex Gaussian G."""
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(dim + 1, dim + 1)) + 1j * rng.normal(size=(dim + 1, dim + 1))
    m = G @ G.conj().T
    return _wrap(m / np.trace(m).real)


def random_quasistate(dim: int, seed: int, negativity_scale: float = 1.0) -> FockOperator:
    """Seeded Hermitian unit-trace operator with eigenvalues allowed negative.

    negativity_scale controls the spread of the traceless Gaussian part
    added to the maximally mixed state.
    """
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(dim + 1, dim + 1)) + 1j * rng.normal(size=(dim + 1, dim + 1))
    H = (G + G.conj().T) / 2.0
    H -= np.trace(H).real / (dim + 1) * np.eye(dim + 1)
    m = np.eye(dim + 1, dtype=complex) / (dim + 1) + negativity_scale * H / (dim + 1)
    return _wrap(m)


def random_phase_invariant_state(dim: int, seed: int) -> FockOperator:
    """Seeded random diagonal state (squared Gaussians, normalized)."""
    rng = np.random.default_rng(seed)
    d = rng.normal(size=dim + 1) ** 2
    return _wrap(np.diag(d / d.sum()).astype(complex))
