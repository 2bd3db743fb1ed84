"""q-deformed special functions on truncated power series.

Conventions: [n]_q = (q^n - 1)/(q - 1), E_q(x) = sum_n x^n / [n]_q!, and
D_q f(x) = (f(qx) - f(x)) / ((q - 1) x).  Bargmann-side objects are power
series in a complex variable xi, stored as coefficient arrays with an explicit
degree cap instead of symbolic expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

DEFAULT_DEGREE = 64


def qnumber(n, q):
    """[n]_q.  Exact classical value n at q == 1; vectorizes over ``n``."""
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")
    if q == 1:
        return np.asarray(n, dtype=float) if np.ndim(n) else float(n)
    lq = math.log(q)
    # expm1 ratio keeps full precision as q -> 1
    out = np.expm1(np.asarray(n, dtype=float) * lq) / math.expm1(lq)
    return out if np.ndim(n) else float(out)


def qfactorial(n: int, q: float) -> float:
    if n < 0:
        raise DomainError(f"qfactorial needs n >= 0, got {n}")
    out = 1.0
    for k in range(1, n + 1):
        out *= qnumber(k, q)
    return out


def qbinomial(n: int, m: int, q: float) -> float:
    """Gaussian binomial [n choose m]_q, built as a running ratio to avoid overflow."""
    if m < 0 or n < 0 or m > n:
        raise DomainError(f"qbinomial needs 0 <= m <= n, got n={n}, m={m}")
    m = min(m, n - m)
    out = 1.0
    for j in range(1, m + 1):
        out *= qnumber(n - m + j, q) / qnumber(j, q)
    return out


def qpochhammer(a, q: float, n: int):
    """(a; q)_n = prod_{j<n} (1 - a q^j)."""
    if n < 0:
        raise DomainError(f"qpochhammer needs n >= 0, got {n}")
    out = 1.0 + 0.0j if isinstance(a, complex) else 1.0
    qj = 1.0
    for _ in range(n):
        out *= 1.0 - a * qj
        qj *= q
    return out


def qfactorial_sqrt_table(M: int, q: float) -> np.ndarray:
    """sqrt([m]_q!) for m = 0..M, the phi_m normalization."""
    out = np.ones(M + 1)
    if M > 0:
        # log space: [m]_q! itself overflows long before its square root does
        out[1:] = np.exp(0.5 * np.cumsum(np.log(qnumber(np.arange(1, M + 1), q))))
    return out


@dataclass(frozen=True, eq=False)
class QPolynomial:
    """Truncated series sum_m coeffs[m] xi^m over base ``q``.

    ``tail`` records the magnitude of the first dropped coefficient when the
    object is a truncation of an infinite series (0 for genuine polynomials).
    """

    q: float
    coeffs: np.ndarray
    tail: float = field(default=0.0)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1:
            raise DomainError("coefficients must be one-dimensional")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def trimmed(self) -> "QPolynomial":
        return QPolynomial(self.q, self.coeffs[: self.degree + 1].copy(), self.tail)

    def __eq__(self, other):
        if not isinstance(other, QPolynomial):
            return NotImplemented
        a, b = self.trimmed().coeffs, other.trimmed().coeffs
        return self.q == other.q and a.shape == b.shape and bool(np.all(a == b))

    def __call__(self, xi):
        # numpy polyval wants highest degree first
        return np.polyval(self.coeffs[::-1], xi)

    def _binary(self, other, op):
        if isinstance(other, QPolynomial):
            n = max(len(self.coeffs), len(other.coeffs))
            a = np.zeros(n, complex)
            b = np.zeros(n, complex)
            a[: len(self.coeffs)] = self.coeffs
            b[: len(other.coeffs)] = other.coeffs
            return QPolynomial(self.q, op(a, b), max(self.tail, other.tail))
        c = self.coeffs.copy()
        c[0] = op(c[0], other)
        return QPolynomial(self.q, c, self.tail)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __neg__(self):
        return QPolynomial(self.q, -self.coeffs, self.tail)

    def __mul__(self, other):
        if isinstance(other, QPolynomial):
            return QPolynomial(self.q, np.convolve(self.coeffs, other.coeffs))
        return QPolynomial(self.q, self.coeffs * other, self.tail * abs(other))

    __rmul__ = __mul__

    def truncate(self, M: int) -> "QPolynomial":
        c = np.zeros(M + 1, complex)
        k = min(M + 1, len(self.coeffs))
        c[:k] = self.coeffs[:k]
        return QPolynomial(self.q, c, self.tail)

    def times_xi(self) -> "QPolynomial":
        return QPolynomial(self.q, np.concatenate([[0.0], self.coeffs]), self.tail)

    def scale_argument(self, c) -> "QPolynomial":
        """p(c xi)."""
        return QPolynomial(self.q, self.coeffs * c ** np.arange(len(self.coeffs)), self.tail)

    @classmethod
    def monomial(cls, q: float, m: int, value=1.0) -> "QPolynomial":
        c = np.zeros(m + 1, complex)
        c[m] = value
        return cls(q, c)


def qexp_coeffs(a, q: float, M: int = DEFAULT_DEGREE) -> QPolynomial:
    """E_q(a xi) truncated at degree M; coefficient m is a^m / [m]_q!."""
    if q < 1:
        raise DomainError(f"series objects need q >= 1, got {q}")
    if M < 0:
        raise DomainError("degree cap must be non-negative")
    c = np.empty(M + 2, complex)
    c[0] = 1.0
    for m in range(1, M + 2):
        c[m] = c[m - 1] * a / qnumber(m, q)
    return QPolynomial(q, c[: M + 1], float(abs(c[M + 1])))


def qderiv(p: QPolynomial) -> QPolynomial:
    """Termwise D_q xi^m = [m]_q xi^(m-1)."""
    n = len(p.coeffs)
    if n == 1:
        return QPolynomial(p.q, np.zeros(1, complex), p.tail)
    scale = qnumber(np.arange(1, n), p.q)
    return QPolynomial(p.q, p.coeffs[1:] * scale, p.tail)


def qexp_product(a, b, q: float, M: int = DEFAULT_DEGREE) -> QPolynomial:
    """Cauchy product E_q(a xi) E_q(b xi), truncated at degree M."""
    ea = qexp_coeffs(a, q, M)
    eb = qexp_coeffs(b, q, M)
    prod = np.convolve(ea.coeffs, eb.coeffs)[: M + 1]
    return QPolynomial(q, prod, ea.tail + eb.tail)
