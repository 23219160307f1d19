"""Finite Fock-truncated operator algebra.

Operators live on H^n = span{|0>, ..., |n>} and are stored as dense complex
(n+1) x (n+1) Hermitian matrices. Everything here is immutable and pure:
operations return new values and never mutate inputs, so concurrent reads
are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Relative residual above which an input matrix is rejected instead of
# being repaired by (A + A^dag)/2.
HERMITIZE_RTOL = 1e-9

DEFAULT_TOL = 1e-10


class NonHermitianError(ValueError):
    """Input matrix is too far from Hermitian to repair."""


class DimensionMismatchError(ValueError):
    """Matrix shape does not match the declared Fock cutoff."""


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Hermitian operator on span{|0>..|dim>}; matrix is (dim+1) x (dim+1)."""

    dim: int
    matrix: np.ndarray
    trace_cached: float = field(default=0.0)

    def __post_init__(self):
        self.matrix.setflags(write=False)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "FockOperator") -> "FockOperator":
        a, b = pad_pair(self, other)
        return _wrap(a.matrix + b.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        a, b = pad_pair(self, other)
        return _wrap(a.matrix - b.matrix)

    def __mul__(self, c) -> "FockOperator":
        c = _real_scalar(c)
        return _wrap(c * self.matrix)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "FockOperator":
        return self * (1.0 / _real_scalar(c))

    def __neg__(self) -> "FockOperator":
        return _wrap(-self.matrix)

    def adjoint(self) -> "FockOperator":
        return _wrap(self.matrix.conj().T)

    @property
    def trace(self) -> float:
        return self.trace_cached

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.matrix))

    def normalized(self) -> "FockOperator":
        """Unit-trace rescaling; raises on (near-)vanishing trace."""
        tr = self.trace_cached
        if abs(tr) <= 1e-14 * max(1.0, self.norm()):
            raise ZeroDivisionError("cannot normalize operator with vanishing trace")
        return self / tr

    def padded(self, dim: int) -> "FockOperator":
        """Embed into H^dim (dim >= self.dim) with zero blocks."""
        if dim < self.dim:
            raise DimensionMismatchError(f"cannot pad dim {self.dim} down to {dim}")
        out = np.zeros((dim + 1, dim + 1), dtype=complex)
        out[: self.dim + 1, : self.dim + 1] = self.matrix
        return _wrap(out)

    def trimmed(self, tol: float = DEFAULT_TOL) -> "FockOperator":
        """Restriction to the support block H^{support_degree}."""
        s = support_degree(self, tol)
        return _wrap(self.matrix[: s + 1, : s + 1].copy())


def _real_scalar(c) -> float:
    if isinstance(c, complex) and abs(c.imag) > 1e-14 * max(1.0, abs(c)):
        raise ValueError("FockOperator scaling must be real to stay Hermitian")
    return float(np.real(c))


def _wrap(matrix: np.ndarray) -> FockOperator:
    """Internal constructor: matrix already Hermitian up to roundoff."""
    m = np.asarray(matrix, dtype=complex)
    m = 0.5 * (m + m.conj().T)
    tr = float(np.trace(m).real)
    return FockOperator(dim=m.shape[0] - 1, matrix=m, trace_cached=tr)


def new_operator(dim: int, entries) -> FockOperator:
    """Validated public constructor.

    Symmetrizes (A + A^dag)/2 when the Hermiticity residual is <= 1e-9
    relative to max|A|, rejects otherwise.
    """
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"entries must be square, got shape {m.shape}")
    if m.shape[0] != dim + 1:
        raise DimensionMismatchError(
            f"matrix side {m.shape[0]} does not match dim+1 = {dim + 1}"
        )
    scale = np.abs(m).max()
    residual = np.abs(m - m.conj().T).max()
    if residual > HERMITIZE_RTOL * max(scale, 1e-300):
        raise NonHermitianError(
            f"Hermiticity residual {residual:.3e} exceeds {HERMITIZE_RTOL:.0e} * max|A|"
        )
    return _wrap(m)


def pad_pair(a: FockOperator, b: FockOperator) -> tuple[FockOperator, FockOperator]:
    """Zero-pad the smaller operator so both live on the same H^n."""
    n = max(a.dim, b.dim)
    return a.padded(n), b.padded(n)


def hs_inner(a: FockOperator, b: FockOperator) -> complex:
    """Hilbert-Schmidt inner product Tr[a b^dag]."""
    a, b = pad_pair(a, b)
    return complex(np.trace(a.matrix @ b.matrix.conj().T))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues ascending; eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigendecompose(a: FockOperator) -> Spectrum:
    vals, vecs = np.linalg.eigh(a.matrix)
    recon = (vecs * vals) @ vecs.conj().T
    resid = np.linalg.norm(recon - a.matrix)
    if resid > 1e-10 * max(1.0, np.linalg.norm(a.matrix)):
        raise ArithmeticError(f"eigendecomposition residual {resid:.3e} too large")
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def min_eigenvalue(a: FockOperator) -> float:
    return float(np.linalg.eigvalsh(a.matrix)[0])


def is_psd(a: FockOperator, tol: float = DEFAULT_TOL) -> bool:
    """Positive semi-definite up to -tol * max(1, ||A||)."""
    vals = np.linalg.eigvalsh(a.matrix)
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    return bool(vals[0] >= -tol * scale)


def dephase(a: FockOperator) -> FockOperator:
    """Completely dephasing channel: zero off-diagonals, keep the diagonal."""
    return _wrap(np.diag(np.diag(a.matrix)))


def is_phase_invariant(a: FockOperator, tol: float = DEFAULT_TOL) -> bool:
    off = a.matrix - np.diag(np.diag(a.matrix))
    return bool(np.linalg.norm(off) <= tol * max(1.0, np.linalg.norm(a.matrix)))


def support_degree(a: FockOperator, tol: float = DEFAULT_TOL) -> int:
    """Smallest m with every row/column beyond m below tol (relative)."""
    scale = max(np.abs(a.matrix).max(), 1e-300)
    weight = np.maximum(np.abs(a.matrix).max(axis=0), np.abs(a.matrix).max(axis=1))
    alive = np.nonzero(weight > tol * scale)[0]
    return int(alive[-1]) if alive.size else 0


def trace_distance(a: FockOperator, b: FockOperator) -> float:
    """(1/2) ||a - b||_1."""
    a, b = pad_pair(a, b)
    vals = np.linalg.eigvalsh(a.matrix - b.matrix)
    return 0.5 * float(np.abs(vals).sum())


def lowering_matrix(dim: int) -> np.ndarray:
    """Annihilation operator truncated to H^dim."""
    m = np.zeros((dim + 1, dim + 1), dtype=complex)
    for k in range(1, dim + 1):
        m[k - 1, k] = np.sqrt(k)
    return m


def fock_projector(k: int, dim: int | None = None) -> FockOperator:
    """|k><k| on H^dim (dim defaults to k)."""
    n = k if dim is None else dim
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[k, k] = 1.0
    return _wrap(m)
