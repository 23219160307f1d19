"""Wigner and Husimi evaluation, and the monomial-matrix calculus.

A Fock-bounded Hermitian operator A on H^n has Wigner function

    W_A(alpha) = P(alpha, alpha*) exp(-2|alpha|^2),

where P is a polyanalytic polynomial encoded by the Hermitian coefficient
matrix P_{kl} (coefficient of conj(alpha)^k alpha^l). The conversion in
both directions goes through the generalized loss map at parameters 2 and
1/2, which is a finite exact series on Fock-bounded input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _series
from .fock import FockOperator, _wrap, is_phase_invariant, support_degree
from .polynomials import RealPolynomial, laguerre

TWO_OVER_PI = 2.0 / math.pi


class ImaginaryResidue(ArithmeticError):
    """A quantity that must be real came out with too much imaginary part."""


class NotPhaseInvariant(ValueError):
    """Radial extraction requires a phase-invariant operator."""


@dataclass(frozen=True, eq=False)
class MonomialMatrix:
    """Coefficients P_{kl} of conj(alpha)^k alpha^l, Hermitian for real W."""

    dim: int
    P: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.P, dtype=complex)
        if m.shape != (self.dim + 1, self.dim + 1):
            raise ValueError(f"matrix shape {m.shape} vs dim {self.dim}")
        scale = max(np.linalg.norm(m), 1e-300)
        if np.linalg.norm(m - m.conj().T) > 1e-10 * scale:
            raise ValueError("monomial matrix must be Hermitian (real Wigner function)")
        object.__setattr__(self, "P", 0.5 * (m + m.conj().T))
        self.P.setflags(write=False)

    def __call__(self, alpha):
        """Evaluate the polyanalytic polynomial at alpha (scalar or array)."""
        return polynomial_eval(self.P, alpha)

    def normalization_integral(self) -> float:
        """int P(a, a*) e^{-2|a|^2} d^2a = sum_k P_kk pi k!/2^{k+1} (exact)."""
        diag = np.diag(self.P).real
        return float(
            sum(c * math.pi * math.factorial(k) / 2 ** (k + 1) for k, c in enumerate(diag))
        )


def polynomial_eval(P: np.ndarray, alpha):
    """sum_{kl} P_{kl} conj(alpha)^k alpha^l, vectorized over alpha."""
    a = np.asarray(alpha, dtype=complex)
    scalar = a.ndim == 0
    a = np.atleast_1d(a)
    n = P.shape[0] - 1
    V = a[:, None] ** np.arange(n + 1)[None, :]
    out = np.einsum("ik,kl,il->i", V.conj(), P, V)
    return complex(out[0]) if scalar else out


def polynomial_dalpha(P: np.ndarray) -> np.ndarray:
    """Coefficient matrix of d/dalpha of the polyanalytic polynomial."""
    n = P.shape[0] - 1
    out = np.zeros_like(P)
    if n >= 1:
        out[:, :n] = P[:, 1:] * np.arange(1, n + 1)[None, :]
    return out


def wigner_transition(m: int, n: int, alpha):
    """Wigner function of the Fock transition |m><n| at alpha.

    For m <= n:  (2/pi) (-1)^m sqrt(m!/n!) (2 alpha)^(n-m)
                 L_m^{(n-m)}(4|alpha|^2) exp(-2|alpha|^2);
    for m > n the conjugate with swapped indices.
    """
    if m > n:
        return np.conj(wigner_transition(n, m, alpha))
    a = np.asarray(alpha, dtype=complex)
    x = 4.0 * np.abs(a) ** 2
    pref = TWO_OVER_PI * (-1) ** m * math.sqrt(math.factorial(m) / math.factorial(n))
    val = pref * (2.0 * a) ** (n - m) * laguerre(m, n - m, x) * np.exp(-x / 2.0)
    return val


def wigner(a: FockOperator, alpha):
    """W_A(alpha) by direct summation of Fock-transition terms; real output."""
    al = np.asarray(alpha, dtype=complex)
    scalar = al.ndim == 0
    al = np.atleast_1d(al)
    total = np.zeros(al.shape, dtype=complex)
    n = a.dim
    for k in range(n + 1):
        for l in range(n + 1):
            c = a.matrix[k, l]
            if c != 0:
                total += c * wigner_transition(k, l, al)
    scale = max(1.0, float(np.abs(total.real).max(initial=0.0)))
    resid = float(np.abs(total.imag).max(initial=0.0))
    if resid > 1e-8 * scale:
        raise ImaginaryResidue(f"imaginary residue {resid:.3e} on Wigner evaluation")
    out = total.real
    return float(out[0]) if scalar else out


def husimi(a: FockOperator, alpha):
    """Q_A(alpha) = <alpha|A|alpha>/pi, exact for Fock-bounded operators."""
    al = np.asarray(alpha, dtype=complex)
    scalar = al.ndim == 0
    al = np.atleast_1d(al)
    n = a.dim
    # <alpha|k> = exp(-|alpha|^2/2) conj(alpha)^k / sqrt(k!)
    fact = np.array([math.sqrt(math.factorial(k)) for k in range(n + 1)])
    V = al[:, None] ** np.arange(n + 1)[None, :] / fact[None, :]
    quad = np.einsum("ik,kl,il->i", V.conj(), a.matrix, V)
    out = quad.real * np.exp(-np.abs(al) ** 2) / math.pi
    return float(out[0]) if scalar else out


def monomial_matrix(a: FockOperator) -> MonomialMatrix:
    """P_{kl} = (2/pi) sqrt(2^{k+l}/(k! l!)) <k| E_2[A] |l>."""
    n = a.dim
    e2 = _series.loss_series(a.matrix, 2.0)
    logfact = np.zeros(n + 1)
    for j in range(1, n + 1):
        logfact[j] = logfact[j - 1] + math.log(j)
    idx = np.arange(n + 1)
    logscale = 0.5 * (idx * math.log(2.0) - logfact)
    scale = np.exp(logscale)
    P = TWO_OVER_PI * e2 * np.outer(scale, scale)
    return MonomialMatrix(dim=n, P=P)


def operator_from_monomial(P: MonomialMatrix) -> FockOperator:
    """Inverse conversion: A = (pi/2) E_{1/2}[ P_{kl} sqrt(k!l!/2^{k+l}) |k><l| ]."""
    n = P.dim
    logfact = np.zeros(n + 1)
    for j in range(1, n + 1):
        logfact[j] = logfact[j - 1] + math.log(j)
    idx = np.arange(n + 1)
    logscale = 0.5 * (logfact - idx * math.log(2.0))
    scale = np.exp(logscale)
    q = P.P * np.outer(scale, scale)
    mat = (math.pi / 2.0) * _series.loss_series(q, 0.5)
    return _wrap(mat)


def monomial_convolve(A: MonomialMatrix, B: MonomialMatrix) -> MonomialMatrix:
    """(A*B)_{kl} = sum A_{k'l'} B_{k-k', l-l'}; pointwise polynomial product."""
    na, nb = A.dim, B.dim
    out = np.zeros((na + nb + 1, na + nb + 1), dtype=complex)
    for k in range(na + 1):
        for l in range(na + 1):
            if A.P[k, l] != 0:
                out[k : k + nb + 1, l : l + nb + 1] += A.P[k, l] * B.P
    return MonomialMatrix(dim=na + nb, P=out)


def radial_polynomial(a: FockOperator, tol: float = 1e-10) -> RealPolynomial:
    """P(t) with W_A(alpha) = P(|alpha|^2) exp(-2|alpha|^2).

    Only valid for phase-invariant operators; coefficients are the
    diagonal of the monomial matrix.
    """
    if not is_phase_invariant(a, tol):
        raise NotPhaseInvariant("operator has non-negligible off-diagonal part")
    P = monomial_matrix(a)
    return RealPolynomial(np.diag(P.P).real)


# -- quadrature oracles ------------------------------------------------------

def _polar_nodes(n_radial: int = 64, n_angles: int = 128, beta: float = 4.0):
    """Nodes/weights for int f(alpha) e^{-beta |alpha|^2} d^2alpha.

    Gauss-Laguerre in t = beta r^2 (exact for polynomial f of matching
    degree) and a uniform angular grid (exact for trigonometric
    polynomials up to degree n_angles - 1).
    """
    t, wt = np.polynomial.laguerre.laggauss(n_radial)
    phi = 2.0 * math.pi * np.arange(n_angles) / n_angles
    r = np.sqrt(t / beta)
    alphas = r[:, None] * np.exp(1j * phi)[None, :]
    # d^2alpha = r dr dphi; t = beta r^2 -> r dr = dt/(2 beta)
    weights = (wt[:, None] / (2.0 * beta)) * (2.0 * math.pi / n_angles)
    return alphas.ravel(), np.broadcast_to(weights, alphas.shape).ravel()


def wigner_norm_integral(a: FockOperator) -> float:
    """int W_A(alpha) d^2alpha, evaluated by exact-degree quadrature."""
    nodes, w = _polar_nodes(n_radial=max(64, a.dim + 2), n_angles=128, beta=2.0)
    P = monomial_matrix(a)
    vals = polynomial_eval(P.P, nodes)
    return float(np.real(np.sum(vals * w)))


def wigner_overlap(a: FockOperator, b: FockOperator) -> float:
    """pi * int W_A W_B^* d^2alpha  (equals Tr[A B^dag]); quadrature route."""
    n = max(a.dim, b.dim)
    nodes, w = _polar_nodes(n_radial=max(64, 2 * n + 2), n_angles=max(128, 4 * n + 4), beta=4.0)
    Pa = monomial_matrix(a.padded(n))
    Pb = monomial_matrix(b.padded(n))
    va = polynomial_eval(Pa.P, nodes)
    vb = polynomial_eval(Pb.P, nodes)
    return float(math.pi * np.real(np.sum(va * np.conj(vb) * w)))
