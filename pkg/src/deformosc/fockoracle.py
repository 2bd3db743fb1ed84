"""Brute-force oracle for the 1-D problem in a truncated q-boson number basis.

Basis: b+|n> = sqrt([n+1]_q)|n+1>, so b b+ - q b+ b = 1 away from the cut.
X = sqrt(gamma (q+1))/2 (b + b+), P = iA with A = sqrt((q+1)/gamma)/2 (b+ - b);
A is real antisymmetric, hence P^2 = -A^2 and every observable is real.

Matrices here are strongly graded (entries grow like q^n along the diagonal).
LAPACK's symmetric solver is only accurate on such input when the Householder
reduction starts from the large end, which ``eig_sym`` arranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from . import deform1d
from .deform1d import Deform1DParams
from .errors import ConvergenceError, DomainError
from .qcalc import qnumber

# FockMatrix is a plain dense float ndarray; the alias only documents intent
FockMatrix = np.ndarray

#: largest q**N allowed when squaring X; beyond this X @ X overflows
MAX_GROWTH = 1e150
EDGE_FRACTION = 0.2
ROUNDING_FLOOR = 16 * np.finfo(float).eps


def interior(N: int) -> int:
    """Number of leading basis states trusted in residual checks."""
    return N - math.ceil(EDGE_FRACTION * N)


def max_dim(q: float) -> int:
    if q <= 1:
        return 10**9
    return int(math.log(MAX_GROWTH) / math.log(q))


def build_ladder(q: float, N: int) -> tuple[FockMatrix, FockMatrix]:
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    if N < 2:
        raise DomainError(f"need N >= 2, got {N}")
    off = np.sqrt(qnumber(np.arange(1, N), q))
    b = np.diag(off, 1)
    return b, b.T.copy()


def build_xp(gamma: float, q: float, N: int) -> tuple[FockMatrix, FockMatrix]:
    """(X, A) with P = iA."""
    if gamma <= 0:
        raise DomainError(f"need gamma > 0, got {gamma}")
    b, bd = build_ladder(q, N)
    X = 0.5 * math.sqrt(gamma * (q + 1.0)) * (b + bd)
    A = 0.5 * math.sqrt((q + 1.0) / gamma) * (bd - b)
    return X, A


def _gamma_q(p: Deform1DParams) -> tuple[float, float]:
    if p.alpha <= 0 or p.beta <= 0:
        raise DomainError("the Fock oracle needs alpha > 0 and beta > 0")
    sab = math.sqrt(p.alpha * p.beta)
    return math.sqrt(p.beta / p.alpha), (1.0 + sab) / (1.0 - sab)


def _operators(p: Deform1DParams, N: int):
    gamma, q = _gamma_q(p)
    if N > max_dim(q):
        raise DomainError(f"N = {N} too large for q = {q}: X @ X would overflow (max {max_dim(q)})")
    return build_xp(gamma, q, N)


def commutator_residual(alpha: float, beta: float, N: int) -> float:
    """max |[X, A] - (1 + alpha X^2 - beta A^2)| on the interior block, relative."""
    X, A = _operators(Deform1DParams(alpha, beta), N)
    lhs = X @ A - A @ X
    rhs = np.eye(N) + alpha * (X @ X) - beta * (A @ A)
    m = interior(N)
    diff = (lhs - rhs)[:m, :m]
    return float(np.max(np.abs(diff)) / max(1.0, np.max(np.abs(rhs[:m, :m]))))


def build_hamiltonian(p: Deform1DParams, N: int) -> FockMatrix:
    X, A = _operators(p, N)
    H = 0.5 * (X @ X - A @ A) - p.efield * X
    return 0.5 * (H + H.T)


def build_partner(p: Deform1DParams, i: int, N: int) -> FockMatrix:
    """h_i = (a_i P^2 + b_i X^2)/2 - E X + c_i from the partner coefficients."""
    pc = deform1d.partner_coeffs(deform1d.derive_params(p), i)
    X, A = _operators(p, N)
    H = 0.5 * (pc.b_i * (X @ X) - pc.a_i * (A @ A)) - p.efield * X + pc.c_i * np.eye(N)
    return 0.5 * (H + H.T)


def build_factorized(p: Deform1DParams, i: int, N: int, order: str = "+-") -> FockMatrix:
    """B+_i B-_i (order "+-") or B-_i B+_i (order "-+") plus sum_{j<=i} eps_j."""
    d = deform1d.derive_params(p)
    lev = deform1d.hierarchy_level(d, i)
    X, A = _operators(p, N)
    I = np.eye(N)
    Bp = (lev.s_i * X + lev.g_i * A + lev.r_i * I) / math.sqrt(2.0)
    Bm = (lev.s_i * X - lev.g_i * A + lev.r_i * I) / math.sqrt(2.0)
    shift = sum(deform1d.hierarchy_level(d, j).eps_i for j in range(i + 1))
    if order == "+-":
        return Bp @ Bm + shift * I
    if order == "-+":
        return Bm @ Bp + shift * I
    raise DomainError(f"order must be '+-' or '-+', got {order!r}")


def eig_sym(A: FockMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Full symmetric eigendecomposition, ascending, with a residual postcondition."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("eig_sym needs a square matrix")
    try:
        # upper-triangle storage makes LAPACK reduce from the bottom-right corner,
        # where graded q-boson matrices carry their largest entries; only the
        # implicit QL/QR driver keeps the small eigenvalues accurate afterwards
        # (the divide-and-conquer and RRR drivers lose them once |A| >~ 1e15)
        w, V = scipy.linalg.eigh(A, lower=False, driver="ev")
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    scale = max(float(np.max(np.abs(A))), 1e-300)
    res = np.max(np.abs(A @ V - V * w))
    if res > 1e-10 * scale * max(1, A.shape[0]) ** 0.5:
        raise ConvergenceError(f"eigen-residual {res:.3e} exceeds bound for |A| = {scale:.3e}")
    return w, V


@dataclass(frozen=True)
class LevelEstimate:
    value: float
    error: float
    converged: bool


def _lowest(H: FockMatrix, count: int) -> np.ndarray:
    # full solve then slice: range-restricted drivers lose accuracy on graded input
    return eig_sym(H)[0][:count]


def _with_rounding_floor(vals: np.ndarray, diff: np.ndarray) -> np.ndarray:
    """Cauchy differences can vanish by coincident rounding on large levels;
    never report less than the eigensolver's relative accuracy."""
    return np.maximum(diff, ROUNDING_FLOOR * np.abs(vals))


def converged_levels(
    p: Deform1DParams,
    count: int,
    Nseq: Sequence[int] = (200, 400),
    tol: float = 1e-9,
) -> list[LevelEstimate]:
    """Lowest ``count`` eigenvalues, certified by the change across ``Nseq``.

    Dimensions above the overflow cap for this q are clipped; if clipping
    leaves fewer than two distinct sizes every level is reported unconverged.
    """
    Nseq = sorted(set(int(n) for n in Nseq))
    if count < 1:
        raise DomainError("count must be >= 1")
    if count > Nseq[0] // 4:
        raise DomainError(f"count = {count} exceeds Nseq.min/4 = {Nseq[0] // 4}")
    _, q = _gamma_q(p)
    cap = max_dim(q)
    sizes = sorted(set(min(n, cap) for n in Nseq))
    vals = [_lowest(build_hamiltonian(p, N), count) for N in sizes]
    if len(vals) < 2:
        return [LevelEstimate(float(v), math.inf, False) for v in vals[-1]]
    err = _with_rounding_floor(vals[-1], np.abs(vals[-1] - vals[-2]))
    return [LevelEstimate(float(v), float(e), bool(e <= tol)) for v, e in zip(vals[-1], err)]


def conventional_levels(efield: float, count: int, Nseq: Sequence[int] = (200, 400),
                        tol: float = 1e-9) -> list[LevelEstimate]:
    """alpha = beta = 0: the ordinary boson basis (q = 1, gamma = 1)."""
    vals = []
    for N in sorted(Nseq):
        X, A = build_xp(1.0, 1.0, N)
        vals.append(_lowest(0.5 * (X @ X - A @ A) - efield * X, count))
    err = _with_rounding_floor(vals[-1], np.abs(vals[-1] - vals[-2]))
    return [LevelEstimate(float(v), float(e), bool(e <= tol)) for v, e in zip(vals[-1], err)]


def _extrapolate_to_zero(xs: np.ndarray, ys: np.ndarray) -> float:
    """Value at x = 0 of the interpolating polynomial through (xs, ys)."""
    # rescale so the Vandermonde system is well conditioned
    coef = np.polynomial.polynomial.polyfit(xs / np.max(np.abs(xs)), ys, len(xs) - 1)
    return float(coef[0])


def boundary_levels(
    p: Deform1DParams,
    count: int,
    seq: Sequence[float] = (0.004, 0.002, 0.001, 0.0005, 0.00025),
    N: int = 600,
    tol: float = 1e-7,
) -> list[LevelEstimate]:
    """Oracle levels for alpha == 0 or beta == 0 by extrapolating the vanishing parameter.

    The q-boson basis needs squeezing of order gamma = sqrt(beta/alpha), so a
    direct build at, say, alpha = 1e-12 is out of reach.  Instead the general
    Hamiltonian is solved along ``seq`` and extrapolated polynomially to 0.
    Levels are analytic in alpha at alpha = 0; at beta = 0 they are analytic in
    sqrt(beta), so that case extrapolates in sqrt(seq).  The error estimate is
    the change when the coarsest point is dropped.
    """
    if (p.alpha == 0) == (p.beta == 0):
        raise DomainError("boundary_levels needs exactly one of alpha, beta to be zero")
    seq = np.asarray(sorted(seq, reverse=True), dtype=float)
    if len(seq) < 3:
        raise DomainError("need at least three extrapolation points")
    rows = []
    for x in seq:
        pp = Deform1DParams(x, p.beta, p.efield) if p.alpha == 0 else Deform1DParams(p.alpha, x, p.efield)
        rows.append(_lowest(build_hamiltonian(pp, N), count))
    rows = np.array(rows)
    xs = seq if p.alpha == 0 else np.sqrt(seq)
    out = []
    for k in range(count):
        full = _extrapolate_to_zero(xs, rows[:, k])
        fewer = _extrapolate_to_zero(xs[1:], rows[1:, k])
        err = abs(full - fewer)
        out.append(LevelEstimate(full, err, err <= tol))
    return out
