"""Drivers that turn library calls into flat result records.

Each driver yields ``ResultRecord`` objects; the CLI only serializes them.
Records never carry timing data, so repeated runs produce identical output.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import bargmann, deform1d, fockoracle, radial
from .deform1d import Deform1DParams
from .errors import ConvergenceError, DomainError

SCHEMA = 1
TOL_1D = 1e-7
TOL_RADIAL = 1e-6
TOL_EIGEN = 1e-8


@dataclass
class ResultRecord:
    cmd: str
    data: dict
    ok: bool = True

    def flat(self) -> dict:
        out = {"schema": SCHEMA, "cmd": self.cmd}
        out.update(self.data)
        out["ok"] = self.ok
        return out


def _f(x) -> float | None:
    """Plain float for serialization; None for missing values."""
    return None if x is None else float(x)


# --- 1-D spectrum ------------------------------------------------------------

def _oracle_1d(p: Deform1DParams, mode: str, count: int, tol: float) -> list[fockoracle.LevelEstimate]:
    if p.alpha == 0 and p.beta == 0:
        return fockoracle.conventional_levels(p.efield, count, tol=tol)
    if mode in ("alpha0", "beta0"):
        return fockoracle.boundary_levels(p, count, tol=tol)
    return fockoracle.converged_levels(p, count, Nseq=(4 * count + 192, 4 * count + 392), tol=tol)


def spectrum1d(p: Deform1DParams, levels: int, mode: str | None = None, verify: bool = False,
               tol: float = TOL_1D) -> Iterator[ResultRecord]:
    if levels < 1:
        raise DomainError("--levels must be >= 1")
    m = deform1d.resolve_mode(p, mode)
    oracle = _oracle_1d(p, m, levels, tol) if verify else None
    for n in range(levels):
        e, corr = deform1d.level(p, n, m)
        data = {"alpha": p.alpha, "beta": p.beta, "efield": p.efield, "mode": m, "n": n,
                "energy": e, "correction": corr}
        ok = True
        if oracle is not None:
            est = oracle[n]
            delta = e - est.value
            ok = est.converged and abs(delta) <= tol
            data.update(oracle=est.value, oracle_error=est.error, delta=delta, converged=est.converged)
        yield ResultRecord("spectrum1d", data, ok)


# --- 1-D states --------------------------------------------------------------

def states1d(p: Deform1DParams, n: int, M: int = 48, check_closed_form: bool = False,
             verify_eigen: bool = False, tol: float = TOL_EIGEN) -> Iterator[ResultRecord]:
    d = deform1d.derive_params(p)
    st = bargmann.excited_state(d.q, d.t, d.z, n, M=M)
    coeffs = st.coeffs.phase_fixed().real()
    data = {"alpha": p.alpha, "beta": p.beta, "efield": p.efield, "n": n, "M": M,
            "q": d.q, "t": d.t, "z": d.z, "norm": st.norm, "tail": st.tail,
            "coeffs": [_f(c) for c in coeffs],
            "pn": [_f(c) for c in st.prefactor.coeffs.real]}
    ok = True
    if check_closed_form:
        if not 1 <= n <= 3:
            raise DomainError("--check-closed-form needs 1 <= n <= 3")
        diff = float(np.max(np.abs(bargmann.pn_closed(n, d.q, d.t, d.z).coeffs - st.prefactor.coeffs)))
        match = diff <= 1e-12
        data.update(pn_closed_diff=diff, pn_match=match)
        ok = ok and match
    if verify_eigen:
        H = fockoracle.build_hamiltonian(p, M + 1)
        k = fockoracle.interior(M + 1)
        resid = float(np.linalg.norm((H @ coeffs - deform1d.energy(d, n) * coeffs)[:k]))
        data.update(residual=resid)
        ok = ok and resid <= tol
    yield ResultRecord("states1d", data, ok)


# --- radial ------------------------------------------------------------------

def spectrumdd(rp: radial.RadialProblem, nmax: int, verify: bool = False,
               tol: float = TOL_RADIAL) -> Iterator[ResultRecord]:
    if nmax < 0:
        raise DomainError("--nmax must be >= 0")
    oracle = None
    if verify:
        try:
            oracle = radial.sturm_liouville_oracle(rp, count=nmax + 1, tol=tol)
        except ConvergenceError:
            pass  # reported per level as a failed check with no oracle value
    for n in range(nmax + 1):
        te, e = radial.radial_energy(rp, n)
        data = {"dim": rp.D, "l": rp.l, "beta": rp.beta, "betap": rp.betaPrime, "n": n,
                "N": 2 * n + rp.l, "etilde": te, "energy": e}
        ok = True
        if verify:
            if oracle is None:
                data.update(oracle=None, oracle_error=None, delta=None)
                ok = False
            else:
                delta = te - float(oracle.values[n])
                data.update(oracle=float(oracle.values[n]), oracle_error=float(oracle.errors[n]), delta=delta)
                ok = abs(delta) <= tol
        yield ResultRecord("spectrumdd", data, ok)


def radialwf(rp: radial.RadialProblem, n: int, pmax: float, points: int) -> Iterator[ResultRecord]:
    if points < 2 or not pmax > 0:
        raise DomainError("need --points >= 2 and --pmax > 0")
    st = radial.radial_wavefunction(rp, n)
    for P in np.linspace(pmax / points, pmax, points):
        yield ResultRecord("radialwf", {"dim": rp.D, "l": rp.l, "n": n, "P": float(P),
                                        "chi": float(st.chi(P)), "R": float(st.R(P))})


# --- sweeps ------------------------------------------------------------------

KIND_PARAMS = {"1d": ("alpha", "beta", "efield"), "radial": ("beta", "betap")}


def _axis(spec) -> list[float]:
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        if not spec:
            raise DomainError("empty parameter list")
        return [float(x) for x in spec]
    if isinstance(spec, dict):
        steps = int(spec.get("steps", 1))
        if steps < 1:
            raise DomainError("steps must be >= 1")
        return [float(x) for x in np.linspace(spec["start"], spec.get("stop", spec["start"]), steps)]
    raise DomainError(f"cannot read parameter range {spec!r}")


@dataclass
class SweepSpec:
    kind: str
    params: dict
    levels: int = 5
    oracle: bool = False
    tol: float | None = None
    dim: int = 3
    l: list = field(default_factory=lambda: [0])
    mode: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        kind = d.get("kind")
        if kind not in KIND_PARAMS:
            raise DomainError(f"sweep kind must be one of {sorted(KIND_PARAMS)}, got {kind!r}")
        unknown = set(d.get("params", {})) - set(KIND_PARAMS[kind])
        if unknown:
            raise DomainError(f"unknown sweep parameters {sorted(unknown)}")
        params = {k: _axis(d.get("params", {}).get(k, 0.0)) for k in KIND_PARAMS[kind]}
        ls = d.get("l", [0])
        return cls(kind, params, int(d.get("levels", 5)), bool(d.get("oracle", False)), d.get("tol"),
                   int(d.get("dim", 3)), ls if isinstance(ls, list) else [ls], d.get("mode"))

    @classmethod
    def load(cls, path: str) -> "SweepSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def points(self) -> list[dict]:
        names = KIND_PARAMS[self.kind]
        grid = [dict(zip(names, vals)) for vals in itertools.product(*(self.params[k] for k in names))]
        if self.kind == "radial":
            grid = [dict(pt, l=l) for pt in grid for l in self.l]
        return grid


def _run_point(spec: SweepSpec, pt: dict) -> list[ResultRecord]:
    try:
        if spec.kind == "1d":
            p = Deform1DParams(pt["alpha"], pt["beta"], pt["efield"])
            return list(spectrum1d(p, spec.levels, spec.mode, spec.oracle, spec.tol or TOL_1D))
        rp = radial.RadialProblem(spec.dim, int(pt["l"]), pt["beta"], pt["betap"])
        return list(spectrumdd(rp, spec.levels - 1, spec.oracle, spec.tol or TOL_RADIAL))
    except (DomainError, OverflowError) as exc:
        return [ResultRecord("sweep", dict(pt, error=str(exc)), False)]


def max_threads() -> int:
    env = os.environ.get("DOT_MAX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"DOT_MAX_THREADS must be an integer, got {env!r}") from None
    return min(8, os.cpu_count() or 1)


def sweep(spec: SweepSpec) -> Iterator[ResultRecord]:
    """Evaluate every point concurrently; records come back in input order."""
    pts = spec.points()
    with ThreadPoolExecutor(max_workers=max_threads()) as pool:
        for recs in pool.map(lambda pt: _run_point(spec, pt), pts):
            yield from recs


# --- self-check battery ------------------------------------------------------

def verify_all() -> Iterator[ResultRecord]:
    """Fast end-to-end checks of every closed form against its oracle."""
    p = Deform1DParams(1e-10, 1e-10, 0.0)
    d = deform1d.derive_params(p)
    worst = max(abs(deform1d.energy(d, n) - (n + 0.5)) for n in range(11))
    yield ResultRecord("verify-all", {"check": "conventional_limit", "value": worst}, worst <= 1e-6)

    for a, b, E in [(0.1, 0.1, 0.5), (0.05, 0.4, 1.0), (0.4, 0.2, 0.5)]:
        recs = list(spectrum1d(Deform1DParams(a, b, E), 9, verify=True))
        worst = max(abs(r.data["delta"]) for r in recs)
        yield ResultRecord("verify-all", {"check": f"fock_oracle_{a}_{b}_{E}", "value": worst},
                           all(r.ok for r in recs))

    recs = list(spectrum1d(Deform1DParams(0.0, 0.2, 0.7), 6, verify=True))
    worst = max(abs(r.data["delta"]) for r in recs)
    yield ResultRecord("verify-all", {"check": "alpha0_boundary", "value": worst}, all(r.ok for r in recs))

    p = Deform1DParams(0.15, 0.25, 0.4)
    worst = max(r.data["residual"] for n in range(4) for r in states1d(p, n, verify_eigen=True))
    yield ResultRecord("verify-all", {"check": "bargmann_eigen_residual", "value": worst}, worst <= TOL_EIGEN)

    recs = list(spectrumdd(radial.RadialProblem(3, 1, 0.05, 0.05), 3, verify=True))
    deltas = [abs(r.data["delta"]) for r in recs if r.data["delta"] is not None]
    worst = max(deltas) if deltas else math.inf
    yield ResultRecord("verify-all", {"check": "radial_oracle", "value": worst}, all(r.ok for r in recs))
