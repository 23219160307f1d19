"""Real univariate polynomial machinery.

Covers generalized Laguerre evaluation, elementary symmetric polynomials,
root isolation on the half-line [0, inf), recognition of the extreme
non-negative form c * t^k * prod_i (t - lam_i)^2, and the constructive
decomposition of an arbitrary non-negative polynomial on [0, inf) into a
convex mixture of such extreme forms.

Polynomials are stored with ascending coefficients. Throughout, the
reference normalization is the exponentially weighted integral
int_0^inf p(t) e^{-2t} dt, evaluated exactly via int t^m e^{-2t} dt
= m! / 2^{m+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

TRIM_RTOL = 1e-14

# Cluster radius for grouping companion-matrix root candidates; relative
# to max(1, |root|). Near-degenerate clusters are our tolerance choice.
CLUSTER_RTOL = 1e-7


class ConditioningFailure(RuntimeError):
    """Sturm count and companion-matrix clustering disagree after refinement."""


class NotNonnegative(ValueError):
    """Input polynomial takes negative values on [0, inf)."""


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial sum_m coeffs[m] * t^m with trimmed leading zeros."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        scale = np.abs(c).max()
        if scale > 0:
            keep = len(c)
            while keep > 1 and abs(c[keep - 1]) <= TRIM_RTOL * scale:
                keep -= 1
            c = c[:keep]
        else:
            c = np.zeros(1)
        object.__setattr__(self, "coeffs", c)
        self.coeffs.setflags(write=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)

    def derivative(self) -> "RealPolynomial":
        return RealPolynomial(np.polynomial.polynomial.polyder(self.coeffs))

    def scaled(self, c: float) -> "RealPolynomial":
        return RealPolynomial(self.coeffs * c)

    def exp_weighted_integral(self) -> float:
        """int_0^inf p(t) e^{-2t} dt, exact termwise via Gamma integrals."""
        return sum(
            c * math.factorial(m) / 2 ** (m + 1) for m, c in enumerate(self.coeffs)
        )


def laguerre(m: int, a: int, x):
    """Generalized Laguerre L_m^{(a)}(x) by the three-term recurrence.

    Supports scalar or array x. Requires m >= 0 (a may be any integer the
    recurrence tolerates; callers pass a >= 0).
    """
    if m < 0:
        raise ValueError(f"invalid Laguerre order m={m} < 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def elementary_symmetric_all(mu) -> np.ndarray:
    """[e_0, e_1, ..., e_m] from the coefficients of prod_i (1 + mu_i x)."""
    mu = np.asarray(mu, dtype=float)
    e = np.zeros(len(mu) + 1)
    e[0] = 1.0
    for v in mu:
        e[1:] = e[1:] + v * e[:-1]
    return e


def elementary_symmetric(mu, j: int) -> float:
    """e_j(mu): sum of products over all j-subsets; e_0 = 1."""
    mu = np.asarray(mu, dtype=float)
    if j < 0 or j > len(mu):
        raise IndexError(f"elementary symmetric index {j} out of range 0..{len(mu)}")
    return float(elementary_symmetric_all(mu)[j])


def monic_from_roots(roots) -> np.ndarray:
    """Ascending coefficients of prod (t - r) for real roots."""
    c = np.array([1.0])
    for r in roots:
        c = np.convolve(c, np.array([-float(r), 1.0]))
    return c


class HalflineCheck(NamedTuple):
    ok: bool
    witness: Optional[float]  # minimizing t when not ok (or the global min)
    min_value: float


def _cauchy_bound(coeffs: np.ndarray) -> float:
    """Upper bound on the magnitude of all roots."""
    lead = coeffs[-1]
    if len(coeffs) == 1 or lead == 0:
        return 1.0
    return 1.0 + float(np.abs(coeffs[:-1] / lead).max())


def _trim(c: np.ndarray, rtol: float = 1e-13) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    scale = np.abs(c).max()
    if scale == 0:
        return np.zeros(1)
    keep = len(c)
    while keep > 1 and abs(c[keep - 1]) <= rtol * scale:
        keep -= 1
    return c[:keep]


def _sturm_chain(coeffs: np.ndarray) -> list[np.ndarray]:
    """Canonical Sturm chain (counts distinct real roots).

    Each member is rescaled by a positive factor, which leaves the sign
    pattern untouched. With multiple roots the chain terminates at a
    multiple of gcd(p, p'); evaluation points away from roots still give
    the distinct-root count.
    """
    P = np.polynomial.polynomial
    p0 = _trim(coeffs / np.abs(coeffs).max())
    chain = [p0]
    if p0.size > 1:
        chain.append(_trim(P.polyder(p0)))
    while chain[-1].size > 1:
        _, rem = P.polydiv(chain[-2], chain[-1])
        rem = _trim(rem)
        # chain members are normalized to max 1, so a genuinely tiny
        # remainder marks the gcd (multiple roots): stop there
        if np.abs(rem).max() <= 1e-10:
            break
        chain.append(-rem / np.abs(rem).max())
    return chain


def _sign_changes(chain: list[np.ndarray], x: float) -> int:
    vals = [np.polynomial.polynomial.polyval(x, c) for c in chain]
    signs = [v for v in vals if abs(v) > 1e-300]
    n = 0
    for a, b in zip(signs, signs[1:]):
        if a * b < 0:
            n += 1
    return n


def sturm_count_distinct(p: RealPolynomial, lo: float, hi: float) -> int:
    """Number of distinct real roots in (lo, hi]."""
    if p.degree == 0:
        return 0
    chain = _sturm_chain(p.coeffs)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _root_candidates(coeffs: np.ndarray) -> np.ndarray:
    """Companion-matrix roots of an ascending-coefficient polynomial."""
    if len(coeffs) <= 1:
        return np.array([], dtype=complex)
    return np.polynomial.polynomial.polyroots(coeffs)


def _multiplicity(p: RealPolynomial, r: float, tol: float) -> int:
    """Largest j with |p^{(i)}(r)| below threshold for all i < j.

    Each derivative is compared against its own natural magnitude at r
    (sum of |coefficient| * max(1,|r|)^power), which stays sharp when
    max(1,r)^deg would inflate the tolerance by orders of magnitude.
    """
    q = p
    j = 0
    while j <= p.degree:
        mags = np.abs(q.coeffs) * np.maximum(1.0, abs(r)) ** np.arange(len(q.coeffs))
        if abs(q(r)) > tol * max(float(mags.sum()), 1e-300):
            break
        j += 1
        q = q.derivative()
    return j


def _polish(p: RealPolynomial, r: float, mult: int) -> float:
    """Newton-polish a root of multiplicity `mult` on p^{(mult-1)}."""
    q = p
    for _ in range(mult - 1):
        q = q.derivative()
    dq = q.derivative()
    x = r
    for _ in range(40):
        fx, dfx = q(x), dq(x)
        if dfx == 0:
            break
        step = fx / dfx
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x


def _isolate_positive_roots(
    stripped: RealPolynomial, tol: float, rtol_im: float
) -> list[tuple[float, int]] | None:
    """One classification attempt at a given real/complex split threshold.

    Companion candidates within rtol_im of the real axis are treated as
    real, clustered (a multiplicity-m root shows up as an m-point
    cluster), Newton-polished at the estimated multiplicity, and assigned
    their final multiplicity from the successive-derivative criterion.
    Returns None when the result fails internal consistency.
    """
    cand = _root_candidates(stripped.coeffs)
    real = sorted(
        z.real
        for z in cand
        if abs(z.imag) <= rtol_im * max(1.0, abs(z)) and z.real >= -1e-9
    )
    radius = max(10.0 * rtol_im, CLUSTER_RTOL)
    clusters: list[list[float]] = []
    for r in real:
        if clusters and abs(r - clusters[-1][-1]) <= radius * max(1.0, abs(r)):
            clusters[-1].append(r)
        else:
            clusters.append([r])
    found: list[tuple[float, int]] = []
    for group in clusters:
        r = float(np.mean(group))
        r = _polish(stripped, r, len(group))
        mult = _multiplicity(stripped, r, tol)
        if mult == 0:
            continue
        if mult != len(group):
            r = _polish(stripped, r, mult)
            mult = _multiplicity(stripped, r, tol)
            if mult == 0:
                continue
        found.append((max(r, 0.0), mult))
    if sum(m for _, m in found) > stripped.degree:
        return None
    return found


def _deflation_validates(
    stripped: RealPolynomial, found: list[tuple[float, int]], tol: float
) -> bool:
    """True when dividing out the found roots leaves no [0, inf) root behind."""
    P = np.polynomial.polynomial
    factor = monic_from_roots([r for r, m in found for _ in range(m)])
    quo, _ = P.polydiv(stripped.coeffs, factor)
    quo = _trim(quo)
    if quo.size <= 1:
        return True
    for z in _root_candidates(quo):
        if z.real > tol and abs(z.imag) <= 1e-6 * max(1.0, abs(z)):
            return False
    return True


def real_roots_nonneg(
    p: RealPolynomial, tol: float = 1e-8
) -> list[tuple[float, int]]:
    """All roots of p in [0, inf) with multiplicities.

    Roots at zero are stripped exactly. For the rest, companion-matrix
    candidates are clustered and Newton-polished with multiplicities from
    successive-derivative magnitudes; the real/complex split threshold is
    widened until the result is self-certifying (all roots accounted
    for), matches an independent Sturm count over [0, bound], or is
    confirmed by deflation (multiple roots scatter candidates off the
    real axis by a conditioning-dependent amount, and the same
    conditioning can degrade the float Sturm chain).
    """
    if p.degree < 1:
        raise ValueError("root isolation needs degree >= 1")
    coeffs = p.coeffs / np.abs(p.coeffs).max()

    k0 = 0
    while k0 < len(coeffs) - 1 and abs(coeffs[k0]) <= 1e-13:
        k0 += 1
    stripped = RealPolynomial(coeffs[k0:])

    prefix = [(0.0, k0)] if k0 > 0 else []
    if stripped.degree < 1:
        return prefix

    bound = _cauchy_bound(stripped.coeffs)
    sturm = sturm_count_distinct(stripped, 1e-12 * max(1.0, bound), bound * (1 + 1e-9))
    last = None
    sturm_match = None
    for rtol_im in (1e-7, 1e-6, 1e-5, 1e-4, 5e-4):
        found = _isolate_positive_roots(stripped, tol, rtol_im)
        if found is None:
            continue
        last = found
        if sum(m for _, m in found) == stripped.degree:
            # every root accounted for as validated real non-negative;
            # this certifies the count even when the float Sturm chain is
            # unreliable (near-degenerate clusters)
            return sorted(prefix + found)
        if sturm_match is None and sum(1 for r, _ in found if r > 0) == sturm:
            sturm_match = found
    if sturm_match is not None:
        return sorted(prefix + sturm_match)
    if last is not None and _deflation_validates(stripped, last, tol):
        return sorted(prefix + last)
    got = None if last is None else sum(1 for r, _ in last if r > 0)
    raise ConditioningFailure(
        f"Sturm count {sturm} != clustered count {got} after threshold ladder"
    )


def is_nonneg_on_halfline(p: RealPolynomial, tol: float = 1e-9) -> HalflineCheck:
    """Decide p(t) >= -tol*scale for all t >= 0.

    Checks p(0), the leading coefficient, and the sign at every real
    critical point in (0, inf). The witness is the minimizing t.
    """
    scale = max(1.0, float(np.abs(p.coeffs).max()))
    lead = p.coeffs[-1]
    candidates = [0.0]
    if p.degree >= 2:
        crit = _root_candidates(p.derivative().coeffs)
        candidates += [
            z.real
            for z in crit
            if abs(z.imag) <= 1e-8 * max(1.0, abs(z)) and z.real > 0
        ]
    elif p.degree == 1 and lead < 0:
        # decreasing line: negative far out
        candidates.append(abs(p.coeffs[0] / lead) + 1.0)
    values = [float(p(t)) for t in candidates]
    i_min = int(np.argmin(values))
    min_value, witness = values[i_min], candidates[i_min]
    ok = min_value >= -tol * scale
    if p.degree >= 1 and lead < 0:
        far = _cauchy_bound(p.coeffs) * 2.0
        far_val = float(p(far))
        if far_val < min_value:
            min_value, witness = far_val, far
        ok = False
    return HalflineCheck(ok=ok, witness=None if ok else witness, min_value=min_value)


@dataclass(frozen=True)
class ExtremeRadialSpec:
    """Root data of the extreme form c * t^k * prod_i (t - lambdas[i])^2."""

    k: int
    lambdas: tuple[float, ...]
    c: float = 1.0

    def __post_init__(self):
        if self.k < 0 or any(lam <= 0 for lam in self.lambdas) or self.c <= 0:
            raise ValueError(f"invalid extreme-form spec {self}")
        object.__setattr__(self, "lambdas", tuple(sorted(float(x) for x in self.lambdas)))

    @property
    def degree(self) -> int:
        return self.k + 2 * len(self.lambdas)

    def mu(self) -> np.ndarray:
        """Canonical root vector (0,...,0, lam_1, lam_1, ..., lam_l, lam_l)."""
        out = [0.0] * self.k
        for lam in self.lambdas:
            out += [lam, lam]
        return np.array(out)

    def polynomial(self) -> RealPolynomial:
        return RealPolynomial(self.c * monic_from_roots(self.mu()))

    def normalized_polynomial(self) -> RealPolynomial:
        """Rescaled so that int_0^inf p e^{-2t} dt = 1."""
        base = RealPolynomial(monic_from_roots(self.mu()))
        return base.scaled(1.0 / base.exp_weighted_integral())


def is_extreme_radial(
    p: RealPolynomial, tol: float = 1e-8
) -> Optional[ExtremeRadialSpec]:
    """Recognize p = c t^k prod (t - lam_i)^2 with lam_i > 0, c > 0.

    Returns None when p has any complex or negative root, any positive
    root of odd multiplicity, or a non-positive leading coefficient.
    The returned c is the leading coefficient of the input.
    """
    lead = float(p.coeffs[-1])
    if lead <= 0:
        return None
    if p.degree == 0:
        return ExtremeRadialSpec(k=0, lambdas=(), c=lead)
    try:
        roots = real_roots_nonneg(p, tol)
    except ConditioningFailure:
        return None
    total = sum(m for _, m in roots)
    if total != p.degree:
        return None  # leftover complex or negative roots
    k = 0
    lams: list[float] = []
    for r, m in roots:
        if r <= tol:
            k = m
        else:
            if m % 2 != 0:
                return None
            lams += [r] * (m // 2)
    return ExtremeRadialSpec(k=k, lambdas=tuple(lams), c=lead)


def _newton_polish_simple(coeffs: np.ndarray, z: complex) -> complex:
    P = np.polynomial.polynomial
    d = P.polyder(coeffs)
    for _ in range(40):
        f = P.polyval(z, coeffs)
        df = P.polyval(z, d)
        if df == 0:
            break
        step = f / df
        z = z - step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


def _classify_roots(p: RealPolynomial, tol: float):
    """Split the root multiset into (k0, positive doubles, negatives, complex pairs).

    Non-negative real roots are found by the multiplicity-aware half-line
    finder; the polynomial is then deflated and the quotient's roots give
    the negative/complex factors (generically simple, so Newton polishing
    is quadratic).
    """
    P = np.polynomial.polynomial
    nonneg = real_roots_nonneg(p, tol) if p.degree >= 1 else []
    k0 = 0
    doubles: list[float] = []
    for r, m in nonneg:
        if r <= 1e-9:
            k0 = m
        else:
            if m % 2 != 0:
                raise NotNonnegative(
                    f"positive root {r:.6g} has odd multiplicity {m}"
                )
            doubles += [r] * (m // 2)
    factor = monic_from_roots([r for r, m in nonneg for _ in range(m)])
    quo, _rem = P.polydiv(p.coeffs, factor)
    quo = _trim(quo)
    neg: list[float] = []
    cplx: list[complex] = []
    for z in _root_candidates(quo):
        z = _newton_polish_simple(p.coeffs / np.abs(p.coeffs).max(), z)
        if abs(z.imag) <= 1e-6 * max(1.0, abs(z)):
            neg.append(min(z.real, 0.0))
        elif z.imag > 0:
            cplx.append(complex(z.real, z.imag))
    neg.sort()
    cplx.sort(key=lambda w: abs(w.imag))
    return k0, doubles, neg, cplx


def decompose_to_extremes(
    p: RealPolynomial, tol: float = 1e-9
) -> list[tuple[float, ExtremeRadialSpec]]:
    """Convex decomposition of a non-negative polynomial into extreme forms.

    Inverts the two mixing moves that create negative and complex roots:
    a negative root mu is split with weight w = 1/(1-mu) between P and
    t*P, and a conjugate pair {z, z*} with w = 1/(1+Im(z)^2) between P and
    (t - Re z)^2 P (a Re z < 0 square is handled as two negative roots).
    Weights returned are convex (sum to 1 after internal normalization).
    """
    check = is_nonneg_on_halfline(p, tol)
    if not check.ok:
        raise NotNonnegative(
            f"polynomial reaches {check.min_value:.3e} at t={check.witness}"
        )
    total = p.exp_weighted_integral()
    if total <= 0:
        raise NotNonnegative("polynomial has non-positive weighted integral")
    work = p.scaled(1.0 / total)

    k0, doubles, negatives, cpairs = _classify_roots(work, 1e-8)
    lead = float(work.coeffs[-1])
    if lead <= 0:
        raise NotNonnegative("leading coefficient not positive")

    # terms: (coefficient, k, lambdas tuple, pending real factors to strip)
    # pending holds negative values; each (t - mu) factor is removed by the
    # negative-root move, possibly enqueueing more factors.
    terms: list[tuple[float, int, tuple[float, ...]]] = []
    queue: list[tuple[float, int, tuple[float, ...], tuple[float, ...], tuple[complex, ...]]] = [
        (lead, k0, tuple(doubles), tuple(negatives), tuple(cpairs))
    ]
    while queue:
        c, k, lams, negs, cps = queue.pop()
        if negs:
            mu, rest = negs[0], negs[1:]
            w = 1.0 / (1.0 - mu)
            queue.append((c * (1.0 - mu) * (1.0 - w), k, lams, rest, cps))
            queue.append((c * (1.0 - mu) * w, k + 1, lams, rest, cps))
        elif cps:
            z, rest = cps[0], cps[1:]
            w = 1.0 / (1.0 + z.imag**2)
            queue.append((c * (1.0 - w) / w, k, lams, (), rest))
            a = z.real
            if a > tol:
                queue.append((c, k, tuple(sorted(lams + (a,))), (), rest))
            elif a >= -tol:
                queue.append((c, k + 2, lams, (), rest))
            else:
                queue.append((c, k, lams, (a, a), rest))
        else:
            terms.append((c, k, lams))

    # merge identical specs and convert to convex weights over normalized forms
    merged: dict[tuple[int, tuple[float, ...]], float] = {}
    for c, k, lams in terms:
        key = (k, tuple(round(x, 12) for x in lams))
        merged[key] = merged.get(key, 0.0) + c
    out: list[tuple[float, ExtremeRadialSpec]] = []
    for (k, lams), c in sorted(merged.items()):
        base = RealPolynomial(monic_from_roots(ExtremeRadialSpec(k, lams).mu()))
        integral = base.exp_weighted_integral()
        weight = c * integral
        spec = ExtremeRadialSpec(k=k, lambdas=lams, c=1.0 / integral)
        out.append((weight, spec))
    return out


def reconstruct_from_decomposition(
    parts: list[tuple[float, ExtremeRadialSpec]],
) -> RealPolynomial:
    """sum_i w_i * (normalized extreme polynomial_i)."""
    deg = max(spec.degree for _, spec in parts)
    coeffs = np.zeros(deg + 1)
    for w, spec in parts:
        c = spec.normalized_polynomial().coeffs
        coeffs[: len(c)] += w * c
    return RealPolynomial(coeffs)
