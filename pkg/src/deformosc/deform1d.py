"""1-D harmonic oscillator in a uniform field under [X, P] = i(1 + alpha X^2 + beta P^2).

Dimensionless Hamiltonian h = (P^2 + X^2)/2 - E X.  It factorizes as
h = B+ B- + eps_0 with B+- = (s X -+ i g P + r)/sqrt(2), which fixes

    k = (beta - alpha)/2 + sqrt(1 + (beta - alpha)^2/4)   (physical root only)
    s = 1/sqrt(1 - alpha k),  g = s k,  r s = -E,  eps_0 = (g s - r^2)/2.

Shape invariance under parameter scaling gives the hierarchy
u_i = q^(i/2) u, v_i = q^(-i/2) v with u = g + gamma s, v = g - gamma s,
gamma = sqrt(beta/alpha), q = (1 + sqrt(alpha beta))/(1 - sqrt(alpha beta)),
and e_n = sum_{i<=n} eps_i.

Partner Hamiltonians.  Expanding B+_i B-_i with the deformed commutator,

    B+_i B-_i = 1/2 [(g_i^2 - beta g_i s_i) P^2 + (s_i^2 - alpha g_i s_i) X^2]
                + r_i s_i X + (r_i^2 - g_i s_i)/2,

and r_i s_i = -E at every level, so h_i = (a_i P^2 + b_i X^2)/2 - E X + c_i with

    a_i = g_i^2 - beta g_i s_i,  b_i = s_i^2 - alpha g_i s_i,
    c_i = (r_i^2 - g_i s_i)/2 + sum_{j<=i} eps_j  (= sum_{j<i} g_j s_j).

The boundary cases alpha == 0, beta == 0 and alpha == beta have their own
entry points; ``level`` dispatches on exact equality, never on thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BranchError, DomainError
from .qcalc import qnumber

MODES = ("general", "alpha0", "beta0", "equal")


@dataclass(frozen=True)
class Deform1DParams:
    alpha: float
    beta: float
    efield: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "efield"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.alpha < 0 or self.beta < 0:
            raise DomainError(f"need alpha >= 0 and beta >= 0, got ({self.alpha}, {self.beta})")
        if self.alpha * self.beta >= 1:
            raise DomainError(f"need alpha*beta < 1, got {self.alpha * self.beta}")


@dataclass(frozen=True)
class Derived1D:
    """Algebraic parameter bundle consumed by every general-branch formula."""

    alpha: float
    beta: float
    efield: float
    k: float
    g: float
    s: float
    r: float
    gamma: float
    u: float
    v: float
    d: float
    q: float
    t: float
    bigK: float
    z: float
    log_q: float

    def qpow(self, x: float) -> float:
        """q**x through a single exp/log, so deep hierarchy levels do not drift."""
        return math.exp(x * self.log_q)


@dataclass(frozen=True)
class HierarchyLevel1D:
    i: int
    g_i: float
    s_i: float
    r_i: float
    z_i: float
    t_i: float
    eps_i: float
    u_i: float
    v_i: float


@dataclass(frozen=True)
class PartnerCoeffs:
    i: int
    a_i: float
    b_i: float
    c_i: float

    @property
    def mass_ratio(self) -> float:
        """m_i / m."""
        return 1.0 / self.a_i

    @property
    def freq_ratio(self) -> float:
        """omega_i / omega."""
        return math.sqrt(self.a_i * self.b_i)

    @property
    def physical(self) -> bool:
        return self.a_i > 0 and self.b_i > 0


def derive_params(p: Deform1DParams) -> Derived1D:
    a, b, E = p.alpha, p.beta, p.efield
    if a == 0 or b == 0:
        raise BranchError("general branch needs alpha > 0 and beta > 0; use the alpha0/beta0 branches")
    k = 0.5 * (b - a) + math.sqrt(1.0 + 0.25 * (b - a) ** 2)
    if a * k >= 1:
        raise DomainError(f"alpha*k = {a * k} >= 1; factorization does not exist")
    s = 1.0 / math.sqrt(1.0 - a * k)
    g = s * k
    r = -E / s
    gamma = math.sqrt(b / a)
    u = g + gamma * s
    v = g - gamma * s
    t = v / u
    sab = math.sqrt(a * b)
    q = (1.0 + sab) / (1.0 - sab)
    log_q = math.log1p(sab) - math.log1p(-sab)
    bigK = u * math.sqrt((q + 1.0) / (4.0 * gamma))
    z = 4.0 * gamma * math.sqrt(gamma / (q + 1.0)) * E / (u * u * (1.0 - t))
    return Derived1D(a, b, E, k, g, s, r, gamma, u, v, u * v, q, t, bigK, z, log_q)


def _level_core(d: Derived1D, i: int):
    """(g_i, s_i, r_i, u_i, v_i) for level i."""
    u_i = d.qpow(0.5 * i) * d.u
    v_i = d.qpow(-0.5 * i) * d.v
    g_i = 0.5 * (u_i + v_i)
    s_i = 0.5 * (u_i - v_i) / d.gamma
    r_i = -(2.0 * d.gamma * d.efield / d.u) * d.qpow(-0.5 * i) / (1.0 - d.t * d.qpow(-i))
    return g_i, s_i, r_i, u_i, v_i


def hierarchy_level(d: Derived1D, i: int) -> HierarchyLevel1D:
    if i < 0:
        raise DomainError(f"hierarchy index must be >= 0, got {i}")
    g_i, s_i, r_i, u_i, v_i = _level_core(d, i)
    qmi = d.qpow(-i)
    t_i = d.t * qmi
    z_i = d.z * qmi * (1.0 - d.t) / (1.0 - t_i)
    if i == 0:
        eps = 0.5 * (g_i * s_i - r_i * r_i)
    else:
        gp, sp, rp, _, _ = _level_core(d, i - 1)
        eps = 0.5 * (gp * sp + g_i * s_i + rp * rp - r_i * r_i)
    return HierarchyLevel1D(i, g_i, s_i, r_i, z_i, t_i, eps, u_i, v_i)


def _finite(x: float, what: str) -> float:
    if not math.isfinite(x):
        raise OverflowError(f"{what} overflows double precision")
    return x


def field_free_energy(d: Derived1D, n: int) -> float:
    """e_n(q, t, 0)."""
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    try:
        qn = d.qpow(n)
        t2 = d.t * d.t
        val = d.bigK ** 2 / (d.q + 1.0) * (
            (1.0 - t2 * d.qpow(1 - n)) * qnumber(n, d.q) + 0.5 * (qn - t2 / qn)
        )
    except OverflowError:
        raise OverflowError(f"e_{n} overflows double precision (q = {d.q})") from None
    return _finite(val, f"e_{n}")


def field_correction(d: Derived1D, n: int) -> float:
    """Delta e_n: the level-dependent shift caused by the field (always <= 0)."""
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    qmn = d.qpow(-n)
    return -0.5 * (d.bigK * d.z * (1.0 - d.t)) ** 2 * qmn / (1.0 - d.t * qmn) ** 2


def energy(d: Derived1D, n: int) -> float:
    return _finite(field_free_energy(d, n) + field_correction(d, n), f"e_{n}")


def excitation_correction(d: Derived1D, n: int) -> float:
    """Delta e_n - Delta e_0 in closed form."""
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    qmn = d.qpow(-n)
    return (
        0.5 * (d.q - 1.0) * (d.bigK * d.z) ** 2 * qmn
        * (1.0 - d.t * d.t * qmn) / (1.0 - d.t * qmn) ** 2 * qnumber(n, d.q)
    )


def partner_coeffs(d: Derived1D, i: int) -> PartnerCoeffs:
    lev = hierarchy_level(d, i)
    gs = lev.g_i * lev.s_i
    eps_sum = sum(hierarchy_level(d, j).eps_i for j in range(i + 1))
    return PartnerCoeffs(
        i,
        a_i=lev.g_i ** 2 - d.beta * gs,
        b_i=lev.s_i ** 2 - d.alpha * gs,
        c_i=0.5 * (lev.r_i ** 2 - gs) + eps_sum,
    )


# --- boundary branches -------------------------------------------------------

def _check_level(n: int):
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")


def correction_beta0(alpha: float, efield: float, n: int) -> float:
    _check_level(n)
    s_n = (n + 0.5) * alpha + math.sqrt(1.0 + 0.25 * alpha * alpha)
    return -0.5 * efield * efield / (s_n * s_n)


def energy_beta0(alpha: float, efield: float, n: int) -> float:
    """beta = 0: s_i = s + i alpha, g_i = 1, r_i = -E/s_i; quadratic spectrum."""
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    _check_level(n)
    root = math.sqrt(1.0 + 0.25 * alpha * alpha)
    return (n + 0.5) * root + 0.5 * alpha * (n * n + n + 0.5) + correction_beta0(alpha, efield, n)


def energy_alpha0(beta: float, efield: float, n: int) -> float:
    # field-free part is symmetric under alpha <-> beta; the field only shifts
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    return energy_beta0(beta, 0.0, n) - 0.5 * efield * efield


def correction_equal(alpha: float, efield: float, n: int) -> float:
    _check_level(n)
    q = (1.0 + alpha) / (1.0 - alpha)
    return -efield * efield / (q + 1.0) * q ** (-n)


def energy_equal(alpha: float, efield: float, n: int) -> float:
    """alpha == beta: h is a q-deformed oscillator with q = (1 + alpha)/(1 - alpha)."""
    if not 0 <= alpha < 1:
        raise DomainError(f"need 0 <= alpha < 1, got {alpha}")
    _check_level(n)
    q = (1.0 + alpha) / (1.0 - alpha)
    try:
        e0 = 0.5 * (q + 1.0) * (qnumber(n, q) + 0.5 * q ** n)
    except OverflowError:
        raise OverflowError(f"e_{n} overflows double precision (q = {q})") from None
    return _finite(e0 + correction_equal(alpha, efield, n), f"e_{n}")


def resolve_mode(p: Deform1DParams, mode: str | None = None) -> str:
    """Pick the branch for ``p``.  ``None``/"auto" selects by exact equality only."""
    a, b = p.alpha, p.beta
    if mode in (None, "auto"):
        if a == 0:
            return "alpha0"
        if b == 0:
            return "beta0"
        if a == b:
            return "equal"
        return "general"
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    if mode == "alpha0" and a != 0:
        raise BranchError(f"mode alpha0 needs alpha == 0, got {a}")
    if mode == "beta0" and b != 0:
        raise BranchError(f"mode beta0 needs beta == 0, got {b}")
    if mode == "equal" and a != b:
        raise BranchError(f"mode equal needs alpha == beta, got ({a}, {b})")
    if mode == "general" and (a == 0 or b == 0):
        raise BranchError("mode general needs alpha > 0 and beta > 0")
    return mode


def level(p: Deform1DParams, n: int, mode: str | None = None) -> tuple[float, float]:
    """(e_n, Delta e_n) on the branch chosen by ``resolve_mode``."""
    m = resolve_mode(p, mode)
    if m == "alpha0":
        e, corr = energy_alpha0(p.beta, p.efield, n), -0.5 * p.efield ** 2
    elif m == "beta0":
        e, corr = energy_beta0(p.alpha, p.efield, n), correction_beta0(p.alpha, p.efield, n)
    elif m == "equal":
        e, corr = energy_equal(p.alpha, p.efield, n), correction_equal(p.alpha, p.efield, n)
    else:
        d = derive_params(p)
        e, corr = energy(d, n), field_correction(d, n)
    return e, corr + 0.0  # + 0.0 turns a zero-field -0.0 into 0.0
