"""D-dimensional oscillator with isotropic minimal length: radial problem.

With f(P) = 1 + beta0 P^2 and beta0 = beta + beta', the radial operator is

    h^(l) = 1/2 [ -(f d/dP)^2 + a_l / P^2 + b_l P^2 ],
    a_l = (l + (D-3)/2)(l + (D-1)/2),
    b_l = 1 + beta^2 [L^2 + (D^2 - 1)/4] + (D-1) beta beta'/2,   L^2 = l(l+D-2),

and ``e = e~ + beta [L^2 + (D-1)^2/4] - (D-1) beta'/4`` converts its eigenvalues
e~ into energies e.  It factorizes with s = l + (D-1)/2 and
g = beta0/2 + Delta_l, Delta_l = sqrt(1 + beta^2 L^2 + (D beta + beta')^2/4),
and shape invariance shifts s_i = s + i, g_i = g + beta0 i.

The variable rho = arctan(sqrt(beta0) P)/sqrt(beta0) turns f d/dP into d/drho
on the finite interval (0, pi/(2 sqrt(beta0))); the quadrature and the
finite-difference oracle both work in rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class RadialProblem:
    D: int
    l: int
    beta: float
    betaPrime: float
    gammaWeight: float = 0.0

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 2:
            raise DomainError(f"need integer D >= 2, got {self.D}")
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"need integer l >= 0, got {self.l}")
        if not (self.beta >= 0 and self.betaPrime >= 0):
            raise DomainError("need beta >= 0 and beta' >= 0")

    @property
    def beta0(self) -> float:
        return self.beta + self.betaPrime

    def with_l(self, l: int | None) -> "RadialProblem":
        if l is None or l == self.l:
            return self
        return RadialProblem(self.D, l, self.beta, self.betaPrime, self.gammaWeight)


@dataclass(frozen=True)
class RadialDerived:
    D: int
    l: int
    beta: float
    betaPrime: float
    beta0: float
    L2: float
    a_l: float
    b_l: float
    delta: float
    s: float
    g: float
    eps0: float
    lam: float
    mu: float


@dataclass(frozen=True)
class RadialLevel:
    i: int
    s_i: float
    g_i: float
    eps_i: float
    a_i: float
    b_i: float
    c_i: float


def _core(rp: RadialProblem):
    """(L2, a_l, b_l, Delta_l) without requiring beta0 > 0."""
    D, l, b, bp = rp.D, rp.l, rp.beta, rp.betaPrime
    L2 = l * (l + D - 2)
    a_l = (l + (D - 3) / 2) * (l + (D - 1) / 2)
    b_l = 1 + b * b * (L2 + 0.25 * (D * D - 1)) + 0.5 * (D - 1) * b * bp
    delta = math.sqrt(1 + b * b * L2 + 0.25 * (D * b + bp) ** 2)
    return L2, a_l, b_l, delta


def radial_derive(rp: RadialProblem) -> RadialDerived:
    b0 = rp.beta0
    if b0 <= 0:
        raise DomainError("radial_derive needs beta + beta' > 0; the conventional case has no Jacobi form")
    L2, a_l, b_l, delta = _core(rp)
    D, l = rp.D, rp.l
    s = l + (D - 1) / 2
    g = 0.5 * b0 + delta
    eps0 = 0.5 * b0 * (2 * l + D - 0.5) + (l + D / 2) * delta
    return RadialDerived(D, l, rp.beta, rp.betaPrime, b0, L2, a_l, b_l, delta, s, g, eps0, g / b0 - 0.5, s - 0.5)


def radial_hierarchy(rd: RadialDerived, i: int) -> RadialLevel:
    if i < 0:
        raise DomainError(f"hierarchy index must be >= 0, got {i}")
    b0, D, l = rd.beta0, rd.D, rd.l
    s_i, g_i = rd.s + i, rd.g + b0 * i
    if i == 0:
        eps = rd.eps0
    else:
        eps = g_i * (s_i + 0.5) - (g_i - b0) * (s_i - 1.5) + 0.5 * b0 * (2 * s_i - 1)
    a_i = (l + i + (D - 3) / 2) * (l + i + (D - 1) / 2)
    b_i = rd.b_l + 2 * b0 * i * rd.delta + b0 * b0 * i * i
    c_i = i * (b0 * (l + i - 1 + D / 2) + rd.delta)
    return RadialLevel(i, s_i, g_i, eps, a_i, b_i, c_i)


def energy_shift(rp: RadialProblem) -> float:
    """e - e~."""
    L2 = rp.l * (rp.l + rp.D - 2)
    return rp.beta * (L2 + 0.25 * (rp.D - 1) ** 2) - 0.25 * (rp.D - 1) * rp.betaPrime


def radial_energy(rp: RadialProblem, n: int, l: int | None = None) -> tuple[float, float]:
    """(e~_nl, e_Nl) with N = 2n + l.  Valid for beta0 = 0 too."""
    if n < 0:
        raise DomainError(f"radial quantum number must be >= 0, got {n}")
    rp = rp.with_l(l)
    D, l, b, bp, b0 = rp.D, rp.l, rp.beta, rp.betaPrime, rp.beta0
    L2, _, _, delta = _core(rp)
    N = 2 * n + l
    te = (N + D / 2) * delta + 0.5 * b0 * (N + D / 2) + b0 * (l + (D - 1) / 2) * (2 * n + 0.5) + 2 * b0 * n * n
    e = (N + D / 2) * delta + 0.5 * (b0 * (N + D / 2) ** 2 + (b - bp) * (L2 + D * D / 4) + bp * D / 2)
    return te, e


# --- Jacobi polynomials ------------------------------------------------------

def _check_jacobi(n, a, b, z):
    if n < 0 or int(n) != n:
        raise DomainError(f"degree must be a non-negative integer, got {n}")
    if not (a > -1 and b > -1):
        raise DomainError(f"need parameters > -1, got ({a}, {b})")
    if np.any(np.abs(np.asarray(z)) > 1 + 1e-14):
        raise DomainError("argument must lie in [-1, 1]")


def jacobi_eval(n: int, a: float, b: float, z):
    """P_n^{(a,b)}(z) by the standard three-term recurrence."""
    _check_jacobi(n, a, b, z)
    z = np.asarray(z, dtype=float)
    p0 = np.ones_like(z)
    if n == 0:
        return p0 if p0.ndim else float(p0)
    p1 = 0.5 * (a + b + 2) * z + 0.5 * (a - b)
    for k in range(1, n):
        c = 2 * k + a + b
        p0, p1 = p1, (
            (c + 1) * (c * (c + 2) * z + a * a - b * b) * p1 - 2 * (k + a) * (k + b) * (c + 2) * p0
        ) / (2 * (k + 1) * (k + a + b + 1) * c)
    return p1 if p1.ndim else float(p1)


def jacobi_deriv(n: int, a: float, b: float, z):
    """d/dz P_n^{(a,b)} = (n + a + b + 1)/2 P_{n-1}^{(a+1,b+1)}."""
    _check_jacobi(n, a, b, z)
    if n == 0:
        return np.zeros_like(np.asarray(z, dtype=float)) if np.ndim(z) else 0.0
    return 0.5 * (n + a + b + 1) * jacobi_eval(n - 1, a + 1, b + 1, z)


def backward_shift(n: int, a: float, b: float, z):
    """[-(1 - z^2) d/dz + a - b + (a + b + 2) z] P_n^{(a+1,b+1)}(z); equals 2(n+1) P_{n+1}^{(a,b)}."""
    z = np.asarray(z, dtype=float)
    out = -(1 - z * z) * jacobi_deriv(n, a + 1, b + 1, z) + (a - b + (a + b + 2) * z) * jacobi_eval(n, a + 1, b + 1, z)
    return out if np.ndim(out) else float(out)


# --- wave functions ----------------------------------------------------------

def _log_norm(n: int, lam: float, mu: float, b0: float) -> float:
    return 0.5 * (
        math.log(2 * (2 * n + lam + mu + 1))
        + math.lgamma(n + 1) + math.lgamma(n + lam + mu + 1)
        - math.lgamma(n + lam + 1) - math.lgamma(n + mu + 1)
        + (mu + 1) * math.log(b0)
    )


@dataclass(frozen=True)
class RadialState:
    n: int
    lam: float
    mu: float
    norm: float
    beta0: float
    D: int
    alpha_w: float
    chi: Callable = field(repr=False)
    R: Callable = field(repr=False)


def radial_wavefunction(rp: RadialProblem, n: int, l: int | None = None) -> RadialState:
    """chi_n(P) = N_n P_n^{(lam,mu)}(z) P^(mu+1/2) f^(-(lam+mu+1)/2), z = (beta0 P^2 - 1)/f."""
    if n < 0:
        raise DomainError(f"radial quantum number must be >= 0, got {n}")
    rp = rp.with_l(l)
    rd = radial_derive(rp)
    lam, mu, b0 = rd.lam, rd.mu, rd.beta0
    Nn = math.exp(_log_norm(n, lam, mu, b0))

    def chi(P):
        P = np.asarray(P, dtype=float)
        f = 1 + b0 * P * P
        z = np.clip((b0 * P * P - 1) / f, -1.0, 1.0)
        return Nn * jacobi_eval(n, lam, mu, z) * P ** (mu + 0.5) * f ** (-0.5 * (lam + mu + 1))

    # only the full radial function sees the measure weight
    alpha_w = (rp.gammaWeight - 0.5 * (rp.D - 1) * rp.betaPrime) / b0

    def R(P):
        P = np.asarray(P, dtype=float)
        return P ** (-0.5 * (rp.D - 1)) * (1 + b0 * P * P) ** (-0.5 * alpha_w) * chi(P)

    return RadialState(n, lam, mu, Nn, b0, rp.D, alpha_w, chi, R)


def rho_to_p(rho, beta0: float):
    k = math.sqrt(beta0)
    return np.tan(k * np.asarray(rho, dtype=float)) / k


def overlap(a: RadialState, b: RadialState) -> float:
    """int_0^inf dP/f chi_a chi_b, computed as an integral over rho."""
    if a.beta0 != b.beta0:
        raise DomainError("states belong to different problems")
    k = math.sqrt(a.beta0)
    top = math.pi / (2 * k)

    def integrand(r):
        P = rho_to_p(r, a.beta0)
        return float(a.chi(P) * b.chi(P))

    val, _ = quad(integrand, 0.0, top, epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


# --- alternative factorization -----------------------------------------------

@dataclass(frozen=True)
class AltFactorization:
    """Primed factorization s' = -l - (D-3)/2, g' = g."""

    D: int
    l: int
    beta0: float
    delta: float
    b_l: float
    s: float
    g: float
    eps0: float

    def level(self, i: int) -> RadialLevel:
        """Primed hierarchy member i; negative i gives the extended hierarchy."""
        b0, D, l = self.beta0, self.D, self.l
        s_i, g_i = self.s + i, self.g + b0 * i
        if i == 0:
            eps = self.eps0
        else:
            eps = g_i * (s_i + 0.5) - (g_i - b0) * (s_i - 1.5) + 0.5 * b0 * (2 * s_i - 1)
        a_i = (l - i + (D - 3) / 2) * (l - i + (D - 1) / 2)
        b_i = self.b_l + 2 * b0 * i * self.delta + b0 * b0 * i * i
        c_i = i * (b0 * (-l + i + 1 - D / 2) + self.delta)
        return RadialLevel(i, s_i, g_i, eps, a_i, b_i, c_i)


def alt_factorization(rp: RadialProblem) -> AltFactorization:
    _, _, b_l, delta = _core(rp)
    D, l, b0 = rp.D, rp.l, rp.beta0
    s = -l - (D - 3) / 2
    g = 0.5 * b0 + delta
    eps0 = -0.5 * b0 * (2 * l + D - 3.5) - (l + (D - 4) / 2) * delta
    return AltFactorization(D, l, b0, delta, b_l, s, g, eps0)


def alt_energy(rp: RadialProblem, m: float) -> float:
    """Primed-hierarchy eigenvalue e~_m (m may be half-integral)."""
    _, _, _, delta = _core(rp)
    D, l, b0 = rp.D, rp.l, rp.beta0
    x = 2 * m - l - (D - 4) / 2
    return x * delta + 0.5 * b0 * x - b0 * (l + (D - 3) / 2) * (2 * m + 0.5) + 2 * b0 * m * m


def alt_spectrum_check(rp: RadialProblem, n: int, l: int | None = None, rtol: float = 1e-12) -> bool:
    """e~_m (primed, m = n + l + (D-2)/2) against e~_nl; integral m also checks the telescoping sum."""
    rp = rp.with_l(l)
    m = n + rp.l + 0.5 * (rp.D - 2)
    ref = radial_energy(rp, n)[0]
    vals = [alt_energy(rp, m)]
    if float(m).is_integer():
        af = alt_factorization(rp)
        vals.append(math.fsum(af.level(i).eps_i for i in range(int(m) + 1)))
    return all(abs(v - ref) <= rtol * abs(ref) for v in vals)


def extended_relation_residual(rp: RadialProblem, i: int) -> tuple[float, float, float]:
    """Differences (a'_{-i} - a_i, b'_{-i} - b_i, c'_{-i} - (c_i - 2i)).

    All three vanish in the conventional case; a nonzero b difference in the
    deformed case rules out any relation of the form h'_{-i} = h_i + const,
    because a_i already fixes the overall scale to 1.
    """
    unp = radial_hierarchy(_derive_any(rp), i)
    pr = alt_factorization(rp).level(-i)
    return pr.a_i - unp.a_i, pr.b_i - unp.b_i, pr.c_i - (unp.c_i - 2 * i)


def _derive_any(rp: RadialProblem) -> RadialDerived:
    """radial_derive extended to beta0 = 0 (Jacobi parameters left undefined)."""
    if rp.beta0 > 0:
        return radial_derive(rp)
    L2, a_l, b_l, delta = _core(rp)
    s = rp.l + (rp.D - 1) / 2
    return RadialDerived(rp.D, rp.l, rp.beta, rp.betaPrime, 0.0, L2, a_l, b_l, delta, s, delta,
                         rp.l + rp.D / 2, math.nan, s - 0.5)


# --- finite-difference oracle ------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    values: np.ndarray
    errors: np.ndarray
    grids: tuple
    raw: tuple


def _fd_levels(a: float, b: float, s: float, k: float, rcut: float, N: int, count: int) -> np.ndarray:
    """Lowest eigenvalues of 1/2 [-d^2/drho^2 + a/P^2 + b P^2] on (0, rcut).

    The solution behaves like rho^s at the origin, so we write y = chi / rho^s
    and discretize -(w^2 y')' + V w^2 y = 2 e w^2 y with w = rho^s on a
    cell-centred grid.  The vanishing flux weight at rho = 0 supplies the
    regular boundary condition for every s > 0, including a < 0.
    """
    h = rcut / (N + 0.5)
    r = (np.arange(1, N + 1) - 0.5) * h
    rh = np.arange(0, N + 1) * h
    P = np.tan(k * r) / k
    w2 = r ** (2 * s)
    w2h = rh ** (2 * s)
    V = a * (1 / P**2 - 1 / r**2) + b * P**2
    diag = (w2h[:-1] + w2h[1:]) / h**2 + V * w2
    diag[-1] += w2h[-1] / h**2  # Dirichlet: ghost value -y_N
    off = -w2h[1:-1] / h**2
    sw = np.sqrt(w2)
    ev = eigh_tridiagonal(diag / w2, off / (sw[:-1] * sw[1:]), eigvals_only=True,
                          select="i", select_range=(0, count - 1))
    return 0.5 * ev


def sturm_liouville_oracle(
    rp: RadialProblem,
    l: int | None = None,
    count: int = 4,
    grids: tuple[int, int] = (2000, 4000),
    tol: float = 1e-6,
    coeffs: tuple[float, float, float] | None = None,
) -> OracleResult:
    """Eigenvalues of h^(l) (or of 1/2[-d^2/drho^2 + a/P^2 + b P^2] + c when ``coeffs=(a, b, c)``).

    Two grids are Richardson-combined.  ``errors`` compares that value with the
    combination of a half-size grid and the coarser grid; ConvergenceError is
    raised when it exceeds ``tol``.  The Dirichlet end sits where the solution is
    negligible: beyond the turning point the harmonic tail decays like
    exp(-V), and near rho_max the b P^2 term forces (rho_max - rho)^nu with
    nu (nu - 1) = b/beta0^2.  The farther of the two cuts is used.
    """
    rp = rp.with_l(l)
    b0 = rp.beta0
    if b0 <= 0:
        raise DomainError("the oracle needs beta + beta' > 0")
    if count < 1:
        raise DomainError("count must be >= 1")
    _, a_l, b_l, _ = _core(rp)
    a, b, c = (a_l, b_l, 0.0) if coeffs is None else coeffs
    # regular solution at the origin goes like P^(s) with s(s-1) = a
    disc = 0.25 + a
    if disc < 0:
        raise DomainError(f"centrifugal coefficient {a} below -1/4")
    s = 0.5 + math.sqrt(disc)
    k = math.sqrt(b0)
    rmax = math.pi / (2 * k)

    nu = 0.5 + math.sqrt(0.25 + b / b0**2)
    rpow = rmax * (1 - 1e-30 ** (1 / (2 * nu)))
    # coarse pass on (nearly) the whole interval sizes the cut
    emax = _fd_levels(a, b, s, k, rmax * (1 - 1e-6), 400, count)[-1]
    n1, n2 = grids
    n0 = n1 // 2
    # an under-resolved coarse pass overestimates, so the cut is refined both ways
    for _ in range(8):
        pc = math.sqrt(2 * (2 * max(emax, 1.0) + 100) / b)
        rcut = max(math.atan(k * pc) / k, rpow)
        coarse, *raw = (_fd_levels(a, b, s, k, rcut, N, count) for N in (n0, n1, n2))
        top = raw[-1][-1]
        if top > emax:
            emax = 2 * top
        elif top < 0.25 * emax:
            emax = top
        else:
            break

    def richardson(lo, hi, nlo, nhi):
        r2 = ((nhi + 0.5) / (nlo + 0.5)) ** 2
        return (r2 * hi - lo) / (r2 - 1)

    rich = richardson(raw[0], raw[1], n1, n2)
    # the extrapolated value's error is gauged against the coarser pair
    err = np.abs(rich - richardson(coarse, raw[0], n0, n1))
    if np.any(err > tol):
        raise ConvergenceError(f"Richardson estimate {err.max():.2e} exceeds tolerance {tol:g}")
    return OracleResult(rich + c, err, tuple(grids), tuple(x + c for x in raw))
