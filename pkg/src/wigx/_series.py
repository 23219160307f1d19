"""Private matrix kernels shared by the channel and phase-space modules.

These operate on raw complex matrices so that generalized (non-channel)
parameter values never have to round-trip through the Hermitian
FockOperator constructor mid-composition.
"""

from __future__ import annotations

import math

import numpy as np


def loss_series(matrix: np.ndarray, eta: float) -> np.ndarray:
    """Generalized pure-loss series sum_k ((1-eta)^k / k!) s^n a^k M a^dag^k s^n.

    s = sqrt(eta). The series truncates exactly at the matrix size for
    Fock-bounded input. eta may be any real; only eta in [0, 1] is a
    quantum channel. Negative eta produces complex sqrt factors and is the
    caller's responsibility (composite identities restore Hermiticity).
    """
    n = matrix.shape[0] - 1
    s = np.sqrt(complex(eta))
    out = np.zeros_like(matrix, dtype=complex)
    for k in range(n + 1):
        coeff = (1.0 - eta) ** k / math.factorial(k)
        size = n + 1 - k
        idx = np.arange(size)
        # (a^k M a^dag^k)_{ij} = sqrt((i+k)!/i!) sqrt((j+k)!/j!) M_{i+k, j+k}
        amp = np.ones(size)
        for j in range(1, k + 1):
            amp *= idx + j
        amp = np.sqrt(amp)
        out[:size, :size] += coeff * (matrix[k:, k:] * np.outer(amp, amp))
    powers = s ** np.arange(n + 1)
    return out * np.outer(powers, powers)


def gain_scaling(matrix: np.ndarray, g: float) -> np.ndarray:
    """Entrywise M_{kl} -> g^{(k+l)/2} M_{kl} (noiseless-amplifier action)."""
    n = matrix.shape[0] - 1
    powers = np.sqrt(complex(g)) ** np.arange(n + 1)
    return matrix * np.outer(powers, powers)


def lowering_exponential(dim: int, z: complex) -> np.ndarray:
    """exp(z * a) on H^dim: nilpotent, so the series is finite and exact."""
    logfact = np.zeros(dim + 1)
    for j in range(1, dim + 1):
        logfact[j] = logfact[j - 1] + math.log(j)
    m = np.zeros((dim + 1, dim + 1), dtype=complex)
    for i in range(dim + 1):
        for j in range(i, dim + 1):
            k = j - i
            m[i, j] = z**k * math.exp(0.5 * (logfact[j] - logfact[i]) - logfact[k])
    return m
