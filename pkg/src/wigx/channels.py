"""Bosonic maps on Fock-truncated operators.

Implements the generalized pure-loss map, the noiseless linear amplifier,
the polynomial-rescaling map (two independent code paths), Fock-bounded
displacement, rotations, padded Gaussian unitaries, and the two-mode
beam splitter with partial trace.

All maps preserve the finite Fock support except the Gaussian unitaries,
which act on an explicitly padded space and report their truncation tail.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.linalg import expm

from . import _series
from .fock import FockOperator, _wrap, lowering_matrix, support_degree
from .phase_space import monomial_matrix, operator_from_monomial

# vertigo_norm switches to the rescaled monomial path beyond this t to
# avoid overflowing (2t-1)^n factors; the normalized output is scale-free.
LARGE_T_SWITCH = 1e4


class VanishingTrace(ArithmeticError):
    """Normalized map requested but the output trace (nearly) vanishes."""


class TruncationWarning(UserWarning):
    """Padded Gaussian evolution left non-negligible weight near the cutoff."""


def plc(a: FockOperator, eta: float) -> FockOperator:
    """Pure-loss map E_eta: sum_k ((1-eta)^k/k!) s^n a^k rho a^dag^k s^n.

    A quantum channel for eta in [0, 1]; for other real eta this is the
    generalized linear map, exact on Fock-bounded input (finite series).
    """
    return _wrap(_series.loss_series(a.matrix, eta))


def nla(a: FockOperator, g: float) -> FockOperator:
    """Noiseless linear amplifier N_g: entrywise A_{kl} -> g^{(k+l)/2} A_{kl}."""
    if g <= 0:
        raise ValueError(f"amplifier gain must be positive, got {g}")
    return _wrap(_series.gain_scaling(a.matrix, g))


def vertigo(a: FockOperator, t: float) -> FockOperator:
    """Polynomial-rescaling map, operator-sum path.

    sum_k ((t-1)^k / k!) sqrt(t)^n a^k rho a^dag^k sqrt(t)^n; truncates
    exactly at the support degree. Not trace preserving:
    Tr out = Tr[(2t-1)^n rho].
    """
    if t <= 0:
        raise ValueError(f"rescaling parameter must be positive, got {t}")
    n = a.dim
    out = np.zeros_like(a.matrix)
    sqrt_t = math.sqrt(t)
    for k in range(n + 1):
        coeff = (t - 1.0) ** k / math.factorial(k)
        size = n + 1 - k
        idx = np.arange(size)
        amp = np.ones(size)
        for j in range(1, k + 1):
            amp *= idx + j
        amp = np.sqrt(amp)
        out[:size, :size] += coeff * (a.matrix[k:, k:] * np.outer(amp, amp))
    powers = sqrt_t ** np.arange(n + 1)
    return _wrap(out * np.outer(powers, powers))


def vertigo_via_monomial(a: FockOperator, t: float) -> FockOperator:
    """Same map through the monomial matrix: P_{kl} -> sqrt(t)^{k+l} P_{kl}."""
    if t <= 0:
        raise ValueError(f"rescaling parameter must be positive, got {t}")
    P = monomial_matrix(a)
    powers = math.sqrt(t) ** np.arange(P.dim + 1)
    scaled = P.P * np.outer(powers, powers)
    from .phase_space import MonomialMatrix

    return operator_from_monomial(MonomialMatrix(dim=P.dim, P=scaled))


def _vertigo_norm_large_t(a: FockOperator, t: float) -> FockOperator:
    """Monomial path rescaled by the top entry so huge t never overflows."""
    P = monomial_matrix(a)
    n = P.dim
    # sqrt(t)^{k+l-2n} stays <= 1; trace is restored by normalization
    powers = np.exp((np.arange(n + 1) - n) * 0.5 * math.log(t))
    scaled = P.P * np.outer(powers, powers)
    from .phase_space import MonomialMatrix

    out = operator_from_monomial(MonomialMatrix(dim=n, P=scaled))
    return out.normalized()


def vertigo_norm(a: FockOperator, t: float) -> FockOperator:
    """Trace-normalized rescaling map; VanishingTrace when ill-defined."""
    if t <= 0:
        raise ValueError(f"rescaling parameter must be positive, got {t}")
    if t > LARGE_T_SWITCH:
        return _vertigo_norm_large_t(a, t)
    out = vertigo(a, t)
    if abs(out.trace) <= 1e-12 * max(1.0, out.norm()):
        raise VanishingTrace(f"rescaled operator has trace {out.trace:.3e} at t={t}")
    return out / out.trace


def fock_displacement(a: FockOperator, beta: complex) -> FockOperator:
    """Support-preserving displacement of the Wigner polynomial by beta:

        W(alpha) -> W(alpha - beta) exp(2|alpha - beta|^2 - 2|alpha|^2).

    Realized by the nilpotent finite series
    exp(-(2 beta)* a) rho exp(-(2 beta) a^dag); the inverse is the map at
    -beta, and the n-photon component never grows.
    """
    beta = complex(beta)
    E = _series.lowering_exponential(a.dim, -2.0 * np.conj(beta))
    return _wrap(E @ a.matrix @ E.conj().T)


def fock_displacement_norm(a: FockOperator, beta: complex) -> FockOperator:
    out = fock_displacement(a, beta)
    if abs(out.trace) <= 1e-12 * max(1.0, out.norm()):
        raise VanishingTrace(f"displaced operator has trace {out.trace:.3e}")
    return out / out.trace


def rotation(a: FockOperator, theta: float) -> FockOperator:
    """Phase-space rotation: A_{kl} -> e^{i theta (k-l)} A_{kl}; exactly unitary."""
    phases = np.exp(1j * theta * np.arange(a.dim + 1))
    return _wrap(a.matrix * np.outer(phases, phases.conj()))


def default_pad(mean_excitation: float) -> int:
    """Padding policy for Gaussian unitaries on H^{n+pad}."""
    return max(20, 6 * math.ceil(mean_excitation))


def _gaussian_conjugate(
    a: FockOperator, generator: np.ndarray, pad: int, tail_bound: float
) -> tuple[FockOperator, float]:
    big = a.padded(a.dim + pad)
    U = expm(generator)
    out = U @ big.matrix @ U.conj().T
    top = np.abs(np.diag(out)[-2:]).sum()
    tail_norm = float(top / max(abs(np.trace(out).real), 1e-300))
    if tail_norm > tail_bound:
        warnings.warn(
            f"truncation tail {tail_norm:.2e} exceeds {tail_bound:.0e}; increase pad",
            TruncationWarning,
            stacklevel=3,
        )
    op = _wrap(out)
    return op / op.trace, tail_norm


def gaussian_displace(
    a: FockOperator, alpha: complex, pad: int | None = None, tail_bound: float = 1e-8
) -> tuple[FockOperator, float]:
    """True displacement unitary exp(alpha a^dag - alpha* a) on a padded space.

    Returns the trace-renormalized output and the population of the top
    two Fock levels as a truncation-error proxy.
    """
    if pad is None:
        pad = default_pad(abs(alpha) ** 2)
    low = lowering_matrix(a.dim + pad)
    gen = alpha * low.conj().T - np.conj(alpha) * low
    return _gaussian_conjugate(a, gen, pad, tail_bound)


def gaussian_squeeze(
    a: FockOperator, xi: complex, pad: int | None = None, tail_bound: float = 1e-8
) -> tuple[FockOperator, float]:
    """Squeezing unitary exp((xi* a^2 - xi a^dag^2)/2) on a padded space."""
    if pad is None:
        pad = default_pad(math.sinh(abs(xi)) ** 2)
    low = lowering_matrix(a.dim + pad)
    gen = 0.5 * (np.conj(xi) * (low @ low) - xi * (low.conj().T @ low.conj().T))
    return _gaussian_conjugate(a, gen, pad, tail_bound)


def _block_unitary(N: int, theta: float) -> np.ndarray:
    """exp(theta (a^dag b - a b^dag)) restricted to the N-photon block."""
    gen = np.zeros((N + 1, N + 1))
    for k in range(N):
        amp = math.sqrt((k + 1) * (N - k))
        gen[k + 1, k] = amp
        gen[k, k + 1] = -amp
    return expm(theta * gen)


def beam_splitter_trace(psi_a, psi_b, eta: float) -> FockOperator:
    """Two-mode beam splitter on |psi_a>|psi_b| followed by Tr over mode 2.

    The generator theta (a^dag b - a b^dag) with eta = cos^2(theta)
    preserves total photon number, so the evolution is computed exactly
    block-by-block; no truncation error.
    """
    if not (0.0 < eta < 1.0):
        raise ValueError(f"transmittance must be in (0, 1), got {eta}")
    ca = np.asarray(psi_a, dtype=complex).ravel()
    cb = np.asarray(psi_b, dtype=complex).ravel()
    da, db = len(ca) - 1, len(cb) - 1
    M = da + db
    theta = math.acos(math.sqrt(eta))
    # amplitudes on the full product space H^M x H^M, indexed (mode1, mode2)
    amp = np.zeros((M + 1, M + 1), dtype=complex)
    amp[: da + 1, : db + 1] = np.outer(ca, cb)
    out = np.zeros_like(amp)
    for N in range(M + 1):
        ks = np.arange(N + 1)
        block_in = amp[ks, N - ks]
        if not np.any(block_in):
            continue
        out[ks, N - ks] = _block_unitary(N, theta) @ block_in
    rho1 = out @ out.conj().T  # partial trace over mode 2
    return _wrap(rho1)
