"""Eigenstates of the 1-D problem as q-deformed Bargmann functions.

States are expanded over phi_m(xi) = xi^m / sqrt([m]_q!), which realizes the
q-boson basis with b+ -> xi and b -> D_q.  In that basis
xi phi_m = sqrt([m+1]) phi_{m+1} and D_q phi_m = sqrt([m]) phi_{m-1}, so every
operator used here acts on finite coefficient vectors without approximation;
only the ground-state series itself is truncated.

Ground state: D_q psi = (t xi + z) psi, solved by E_q(lambda xi) E_q(mu xi) with
lambda + mu = z and lambda mu = t/(q - 1).  Excited states follow from

    psi_{n+1}(t, z) = F_n (xi - t D_q - z) psi_n(t_1, z_1),
    t_1 = t/q,  z_1 = (z/q)(1 - t)/(1 - t/q),

and psi_n = N_n P_n(xi) E_q(lambda_n xi) E_q(mu_n xi) with (lambda_n, mu_n) the
root pair at the n-fold shifted parameters (t_n, z_n).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, TruncationWarning
from .qcalc import (
    DEFAULT_DEGREE,
    QPolynomial,
    qbinomial,
    qderiv,
    qexp_coeffs,
    qexp_product,
    qfactorial,
    qfactorial_sqrt_table,
    qnumber,
    qpochhammer,
)

TAIL_TOL = 1e-10
MAX_DEFAULT_LEVEL = 20


@dataclass(frozen=True)
class CoeffVector:
    """sum_m entries[m] phi_m(xi)."""

    q: float
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=complex))

    @property
    def M(self) -> int:
        return len(self.entries) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def normalized(self) -> "CoeffVector":
        return CoeffVector(self.q, self.entries / self.norm())

    def phase_fixed(self) -> "CoeffVector":
        """Rotate so the largest-magnitude entry is real and positive."""
        k = int(np.argmax(np.abs(self.entries)))
        ph = self.entries[k] / abs(self.entries[k])
        return CoeffVector(self.q, self.entries / ph)

    def real(self, tol: float = 1e-12) -> np.ndarray:
        """Real part, after checking the imaginary residue is negligible."""
        scale = max(float(np.max(np.abs(self.entries))), 1e-300)
        if np.max(np.abs(self.entries.imag)) > tol * scale:
            raise DomainError("coefficient vector is not real")
        return self.entries.real.copy()

    def overlap(self, other) -> float:
        """|<self|other>| against another CoeffVector or a plain array, on the common support."""
        v = other.entries if isinstance(other, CoeffVector) else np.asarray(other)
        k = min(len(v), len(self.entries))
        return float(abs(np.vdot(self.entries[:k], v[:k])))

    def monomials(self) -> QPolynomial:
        """Same function as a power series in xi."""
        return QPolynomial(self.q, self.entries / qfactorial_sqrt_table(self.M, self.q))


@dataclass(frozen=True)
class BargmannState:
    n: int
    q: float
    t: float
    z: float
    prefactor: QPolynomial
    lam: complex
    mu: complex
    norm: float
    coeffs: CoeffVector
    tail: float


def _check_q(q):
    if not q > 1:
        raise DomainError(f"Bargmann states need q > 1, got {q}")


def lambda_mu(q: float, t: float, z: float) -> tuple[complex, complex]:
    _check_q(q)
    delta = cmath.sqrt(0.25 * z * z - t / (q - 1.0))
    return 0.5 * z + delta, 0.5 * z - delta


def shifted(q: float, t: float, z: float, k: int) -> tuple[float, float]:
    """(t_k, z_k): the k-fold parameter shift."""
    qk = q ** (-k)
    return t * qk, z * qk * (1.0 - t) / (1.0 - t * qk)


@lru_cache(maxsize=4096)
def anp(n: int, p: int, q: float) -> float:
    """a_{n,p}(q) as the nested sum sum_{r=2p-1}^{n-1} [r] a_{r-1,p-1}."""
    if n < 0 or p < 0 or p > n // 2:
        raise DomainError(f"anp needs 0 <= p <= n//2, got n={n}, p={p}")
    if p == 0:
        return 1.0
    return sum(qnumber(r, q) * anp(r - 1, p - 1, q) for r in range(2 * p - 1, n))


def anp_table(nmax: int, q: float) -> np.ndarray:
    """a_{n,p} for n <= nmax from a_{n+1,p} = a_{n,p} + [n] a_{n-1,p-1}."""
    tab = np.zeros((nmax + 1, nmax // 2 + 1))
    tab[:, 0] = 1.0
    for n in range(1, nmax):
        qn = qnumber(n, q)
        for p in range(1, (n + 1) // 2 + 1):
            tab[n + 1, p] = tab[n, p] + qn * tab[n - 1, p - 1]
    return tab


def ground_recurrence(q: float, t: float, z: float, L: int) -> np.ndarray:
    """Unnormalized c_0..c_L from D_q psi = (t xi + z) psi written on phi_m.

    c_{m+1} = t sqrt([m]/[m+1]) c_{m-1} + z c_m / sqrt([m+1]); unlike the
    monomial sums below it never forms [m]_q!, so it cannot overflow.
    """
    _check_q(q)
    qn = qnumber(np.arange(L + 2), q)
    c = np.zeros(L + 1, complex)
    c[0] = 1.0
    if L >= 1:
        c[1] = z
    for m in range(1, L):
        c[m + 1] = t * math.sqrt(qn[m] / qn[m + 1]) * c[m - 1] + z * c[m] / math.sqrt(qn[m + 1])
    return c


def ground_monomial_sums(q: float, t: float, z: float, M: int, path: str = "real") -> np.ndarray:
    """C_m = sqrt([m]_q!) c_m, unnormalized, for m = 0..M."""
    _check_q(q)
    if path == "real":
        tab = anp_table(M, q)
        out = np.zeros(M + 1, complex)
        for m in range(M + 1):
            p = np.arange(m // 2 + 1)
            out[m] = np.sum(tab[m, p] * np.power(complex(z), m - 2 * p) * np.power(complex(t), p))
        return out
    if path == "complex":
        lam, mu = lambda_mu(q, t, z)
        out = np.zeros(M + 1, complex)
        for m in range(M + 1):
            out[m] = sum(qbinomial(m, j, q) * lam**j * mu ** (m - j) for j in range(m + 1))
        return out
    raise DomainError(f"path must be 'real' or 'complex', got {path!r}")


def _tail_fraction(v: np.ndarray, M: int) -> float:
    tot = float(np.sum(np.abs(v) ** 2))
    return float(np.sum(np.abs(v[M + 1:]) ** 2)) / tot if tot > 0 else 0.0


def _warn_tail(tail: float, what: str):
    if tail > TAIL_TOL:
        warnings.warn(f"{what}: truncated tail mass {tail:.2e} exceeds {TAIL_TOL:g}", TruncationWarning, stacklevel=3)


def _ground_padded(q, t, z, L, path):
    if path == "recurrence":
        return ground_recurrence(q, t, z, L)
    with np.errstate(over="ignore", invalid="ignore"):
        v = ground_monomial_sums(q, t, z, L, path) / qfactorial_sqrt_table(L, q)
    if not np.all(np.isfinite(v)):
        raise OverflowError(f"[m]_q! overflows on the {path} path; use path='recurrence'")
    return v


def ground_coeffs(
    q: float, t: float, z: float, M: int = DEFAULT_DEGREE, path: str = "recurrence", pad: int = 20
) -> CoeffVector:
    """Normalized ground state over phi_0..phi_M.

    ``path`` selects how the coefficients are produced: "real" (a_{n,p} sums),
    "complex" (q-binomial sums over the root pair) or "recurrence" (default).
    """
    if M < 0:
        raise DomainError("M must be >= 0")
    v = _ground_padded(q, t, z, M + pad, path)
    _warn_tail(_tail_fraction(v, M), "ground state")
    return CoeffVector(q, v[: M + 1]).normalized()


def apply_raising(v: np.ndarray, q: float, t: float, z: float) -> np.ndarray:
    """(xi - t D_q - z) on phi-coefficients; the result is one entry longer."""
    L = len(v)
    root = np.sqrt(qnumber(np.arange(1, L + 1), q))
    out = np.zeros(L + 1, complex)
    out[1:] += root * v
    out[:-2] -= t * root[:-1] * v[1:]
    out[:-1] -= z * v
    return out


def step_factor(q: float, t: float, z: float, n: int) -> float:
    """F in psi_{n+1} = F (xi - t D_q - z) psi_n(t_1, z_1)."""
    m = n + 1
    qm = q ** (-m)
    val = qnumber(m, q) * (1.0 - t * t * qm) * (1.0 + (q - 1.0) * z * z * qm / (1.0 - t * qm) ** 2)
    return 1.0 / math.sqrt(val)


def excited_state(q: float, t: float, z: float, n: int, M: int | None = None, pad: int | None = None) -> BargmannState:
    """psi_n(q, t, z) by repeated raising from the ground state at (t_n, z_n)."""
    _check_q(q)
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    if M is None:
        if n > MAX_DEFAULT_LEVEL:
            raise DomainError(f"levels above {MAX_DEFAULT_LEVEL} need an explicit M")
        M = max(DEFAULT_DEGREE, 2 * n + 30)
    pad = 20 + n if pad is None else pad
    L = M + pad
    tn, zn = shifted(q, t, z, n)
    v = ground_recurrence(q, tn, zn, L)
    norm = 1.0 / math.sqrt(float(np.sum(np.abs(v) ** 2)))
    v = v * norm
    for j in range(n - 1, -1, -1):
        tj, zj = shifted(q, t, z, j)
        F = step_factor(q, tj, zj, n - 1 - j)
        v = F * apply_raising(v, q, tj, zj)
        norm *= F
    # the last n entries miss contributions from the dropped series tail
    v = v[: L + 1]
    tail = _tail_fraction(v[: L - n + 1], M)
    _warn_tail(tail, f"level {n}")
    lam, mu = lambda_mu(q, tn, zn)
    return BargmannState(
        n, q, t, z, pn_recursive(n, q, t, z), lam, mu, norm,
        CoeffVector(q, v[: M + 1]).normalized(), tail,
    )


def pn_recursive(n: int, q: float, t: float, z: float) -> QPolynomial:
    """P_n from P_{n+1}(t,z;xi) = (xi - z) P_n(t_1,z_1;xi)
    - t (t_{n+1} xi + z_{n+1}) P_n(t_1,z_1;q xi) - t D_q P_n(t_1,z_1;xi)."""
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    if n == 0:
        return QPolynomial(q, [1.0])
    t1, z1 = shifted(q, t, z, 1)
    prev = pn_recursive(n - 1, q, t1, z1)
    tn, zn = shifted(q, t, z, n)
    xi = QPolynomial(q, [0.0, 1.0])
    out = (xi - z) * prev
    out = out - t * (QPolynomial(q, [zn, tn]) * prev.scale_argument(q))
    out = out - t * qderiv(prev)
    return out.truncate(n)


def pn_closed(n: int, q: float, t: float, z: float) -> QPolynomial:
    """Closed forms of P_1, P_2, P_3."""
    _check_q(q)
    if n == 1:
        c1 = 1.0 - t * t / q
        return QPolynomial(q, [-c1 * z / (1.0 - t / q), c1])
    q2 = qnumber(2, q)
    if n == 2:
        pre = 1.0 - t * t / q**3
        c2 = 1.0 - t * t / q
        c1 = -q2 * (z / q) * c2 / (1.0 - t / q**2)
        c0 = -t + (z * z / q) * (1.0 - t) * (1.0 + t / q) / (1.0 - t / q**2) ** 2
        return QPolynomial(q, pre * np.array([c0, c1, c2]))
    if n == 3:
        q3 = qnumber(3, q)
        pre = (1.0 - t * t / q**5) * (1.0 - t * t / q**3)
        c3 = 1.0 - t * t / q
        c2 = -q3 * (z / q**2) * c3 / (1.0 - t / q**3)
        c1 = q3 * (-t / q + (z * z / q**3) * (1.0 - t) * (1.0 + t / q) / (1.0 - t / q**3) ** 2)
        c0 = (
            z * (t / q**2) * ((q2 + q) - (q2 + 1.0) * t) / ((1.0 - t / q) * (1.0 - t / q**3))
            - (z**3 / q**3) * (1.0 - t) ** 2 * (1.0 + t / q**2) / ((1.0 - t / q) * (1.0 - t / q**3) ** 3)
        )
        return QPolynomial(q, pre * np.array([c0, c1, c2, c3]))
    raise DomainError(f"closed forms exist for n in 1..3 only, got {n}")


def state_from_prefactor(st: BargmannState, M: int | None = None) -> CoeffVector:
    """N_n P_n E_q(lambda_n xi) E_q(mu_n xi) re-expanded over phi_m."""
    M = st.coeffs.M if M is None else M
    series = st.prefactor * qexp_product(st.lam, st.mu, st.q, M + st.n)
    c = series.truncate(M).coeffs * qfactorial_sqrt_table(M, st.q)
    return CoeffVector(st.q, st.norm * c)


def coherent_norm(q: float, z: float, n: int) -> float:
    """N_n at t = 0: {[n]_q! (q^(1-2n)(1-q) z^2; q)_n}^(-1/2) E_q(z^2/q^(2n))^(-1/2)."""
    zz = z / q**n
    e = qexp_coeffs(zz * zz, q, 200)
    n0 = 1.0 / math.sqrt(float(np.sum(e.coeffs).real))
    poch = qpochhammer(q ** (1 - 2 * n) * (1 - q) * z * z, q, n)
    return n0 / math.sqrt(qfactorial(n, q) * poch)
