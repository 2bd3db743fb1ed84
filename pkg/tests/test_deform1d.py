import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deformosc import deform1d as d1
from deformosc.deform1d import Deform1DParams
from deformosc.errors import BranchError, DomainError
from deformosc.qcalc import qnumber

# lowest eigenvalues of the truncated Fock Hamiltonian at (0.1, 0.4, E=1),
# certified by N = 200 -> 400 (see fockoracle)
FOCK_01_04_1 = [0.2149278193778034, 1.9999238353870812, 4.683413999946603,
                8.692731166010589, 14.684288394957546, 23.650282622373794]
# e_5(E=1) - e_5(E=0) at (0.2, 0.3) from two oracle diagonalizations
FOCK_DELTA5_02_03 = -0.03706603999293989

params = st.tuples(st.floats(0.01, 0.6), st.floats(0.01, 0.6), st.floats(-1.5, 1.5))


def derived(a, b, E=0.0):
    return d1.derive_params(Deform1DParams(a, b, E))


def test_params_validation():
    with pytest.raises(DomainError):
        Deform1DParams(-0.1, 0.2)
    with pytest.raises(DomainError):
        Deform1DParams(2.0, 0.5)
    with pytest.raises(DomainError):
        Deform1DParams(0.1, float("nan"))


def test_derive_equal_parameters():
    d = derived(0.1, 0.1)
    assert d.q == pytest.approx(11 / 9, rel=1e-15)
    assert d.t == 0.0 and d.k == 1.0
    assert d.g == pytest.approx(1 / math.sqrt(0.9), rel=1e-15)
    assert d.s == pytest.approx(1 / math.sqrt(0.9), rel=1e-15)


def test_derive_unequal_parameters():
    d = derived(0.1, 0.4, 1.0)
    assert d.k == pytest.approx(0.15 + math.sqrt(1.0225), rel=1e-15)
    assert -1 < d.t < 0
    assert d.r * d.s == pytest.approx(-1.0, rel=1e-15)
    e = derived(0.5, 0.5, 0.2)
    assert e.q == pytest.approx(3.0, rel=1e-15) and e.gamma == 1.0


def test_derive_rejects_boundaries():
    with pytest.raises(BranchError):
        derived(0.0, 0.3)
    with pytest.raises(BranchError):
        derived(0.3, 0.0)


def test_small_parameter_limit():
    d = derived(1e-12, 1e-12, 0.7)
    assert d.g == pytest.approx(1.0, abs=1e-10)
    assert d.s == pytest.approx(1.0, abs=1e-10)
    assert d.r == pytest.approx(-0.7, abs=1e-10)


@given(params)
def test_derived_invariants(p):
    a, b, E = p
    d = derived(a, b, E)
    assert d.q > 1 and abs(d.t) < 1 and d.k > 0
    assert d.r * d.s == pytest.approx(-E, abs=1e-14)


def test_continuity_across_equal_parameters():
    lo, hi = derived(0.2 - 1e-9, 0.2), derived(0.2 + 1e-9, 0.2)
    assert abs(lo.t) < 1e-8 and abs(hi.t) < 1e-8
    assert d1.energy(lo, 3) == pytest.approx(d1.energy(hi, 3), rel=1e-8)


def test_hierarchy_level_examples():
    d = derived(0.2, 0.3, 0.0)
    lev = d1.hierarchy_level(d, 4)
    assert lev.r_i == 0 and lev.z_i == 0
    d = derived(0.25, 0.25, 0.8)
    assert d1.hierarchy_level(d, 2).z_i == pytest.approx(d.z / d.q**2, rel=1e-15)
    d = derived(0.1, 0.4, 1.0)
    lev = d1.hierarchy_level(d, 3)
    assert lev.r_i * lev.s_i == pytest.approx(-1.0, rel=1e-14)
    with pytest.raises(DomainError):
        d1.hierarchy_level(d, -1)


def test_hierarchy_geometric_scaling_at_depth():
    d = derived(0.3, 0.1, 0.5)
    lev = d1.hierarchy_level(d, 30)
    assert lev.u_i == pytest.approx(d.u * d.q**15, rel=1e-13)
    assert lev.v_i == pytest.approx(d.v * d.q**-15, rel=1e-13)
    assert lev.t_i == pytest.approx(d.t * d.q**-30, rel=1e-13)


def test_energy_conventional_limit():
    d = derived(1e-10, 1e-10)
    for n in range(11):
        assert d1.energy(d, n) == pytest.approx(n + 0.5, abs=1e-6)


def test_energy_ground_is_factorization_energy():
    d = derived(0.15, 0.35, -0.9)
    assert d1.energy(d, 0) == pytest.approx(0.5 * d.g * d.s - 0.5 * d.r**2, rel=1e-14)


def test_energy_matches_fock_values():
    d = derived(0.1, 0.4, 1.0)
    for n, ref in enumerate(FOCK_01_04_1):
        assert d1.energy(d, n) == pytest.approx(ref, abs=1e-9)


@settings(max_examples=40)
@given(params, st.integers(0, 30))
def test_energy_is_telescoping_sum(p, n):
    d = derived(*p)
    levels = [d1.hierarchy_level(d, i) for i in range(n + 1)]
    direct = sum(l.g_i * l.s_i for l in levels[:-1]) + 0.5 * levels[-1].g_i * levels[-1].s_i - 0.5 * levels[-1].r_i ** 2
    eps = math.fsum(l.eps_i for l in levels)
    e = d1.energy(d, n)
    assert e == pytest.approx(direct, rel=1e-12)
    assert e == pytest.approx(eps, rel=1e-12)
    if n:
        assert e - d1.energy(d, n - 1) == pytest.approx(levels[-1].eps_i, rel=1e-12, abs=1e-12)


@given(params)
def test_energy_increasing(p):
    d = derived(*p)
    es = [d1.energy(d, n) for n in range(25)]
    assert all(b > a for a, b in zip(es, es[1:]))


@given(params, st.integers(0, 20))
def test_field_free_exchange_symmetry(p, n):
    a, b, _ = p
    assert d1.energy(derived(a, b), n) == pytest.approx(d1.energy(derived(b, a), n), rel=1e-12)


def test_field_correction_not_symmetric():
    assert abs(d1.field_correction(derived(0.1, 0.4, 1), 2) - d1.field_correction(derived(0.4, 0.1, 1), 2)) > 1e-3


def test_field_correction_examples():
    d = derived(0.2, 0.3, 1.0)
    assert d1.field_correction(d, 0) == pytest.approx(-0.5 * d.bigK**2 * d.z**2, rel=1e-14)
    assert d1.field_correction(derived(0.2, 0.3, 0.0), 4) == 0.0
    assert d1.field_correction(d, 5) == pytest.approx(FOCK_DELTA5_02_03, abs=1e-9)


@settings(max_examples=40)
@given(st.floats(0.01, 0.6), st.floats(0.01, 0.6), st.floats(0.01, 1.5), st.booleans())
def test_correction_monotone_decay(a, b, E, flip):
    d = derived(a, b, -E if flip else E)
    c = [abs(d1.field_correction(d, n)) for n in range(31)]
    assert all(b < a for a, b in zip(c, c[1:]))
    assert all(d1.field_correction(d, n) < 0 for n in range(31))


@settings(max_examples=40)
@given(params, st.integers(0, 25))
def test_excitation_correction_identity(p, n):
    d = derived(*p)
    direct = d1.field_correction(d, n) - d1.field_correction(d, 0)
    assert d1.excitation_correction(d, n) == pytest.approx(direct, rel=1e-11, abs=1e-14)


def test_excitation_correction_trivial():
    assert d1.excitation_correction(derived(0.2, 0.3, 1.0), 0) == 0.0
    assert d1.excitation_correction(derived(0.2, 0.3, 0.0), 4) == 0.0


def test_beta0_examples():
    for n in range(5):
        assert d1.energy_beta0(0.0, 0.6, n) == pytest.approx(n + 0.5 - 0.18, rel=1e-15)
    # telescoping of s_i = s + i alpha with g_i = 1
    s = 0.15 + math.sqrt(1.0225)
    tele = sum(s + i * 0.3 for i in range(2)) + 0.5 * (s + 2 * 0.3)
    assert d1.energy_beta0(0.3, 0.0, 2) == pytest.approx(tele, rel=1e-14)
    assert d1.energy_beta0(0.3, 0.0, 2) == pytest.approx(2.5 * math.sqrt(1.0225) + 0.15 * 6.5, rel=1e-14)
    shift = d1.energy_beta0(0.3, 1.0, 0) - d1.energy_beta0(0.3, 0.0, 0)
    assert shift == pytest.approx(-0.5 * (0.15 + math.sqrt(1.0225)) ** -2, rel=1e-14)


def test_alpha0_examples():
    assert d1.energy_alpha0(0.0, 0.5, 3) == pytest.approx(3.5 - 0.125, rel=1e-15)
    for n in range(11):
        diff = d1.energy_alpha0(0.2, 0.7, n) - d1.energy_alpha0(0.2, 0.0, n)
        assert diff == pytest.approx(-0.245, abs=1e-12)


@given(st.floats(0.0, 0.9), st.floats(-2.0, 2.0), st.integers(0, 30))
def test_alpha0_shift_law(b, E, n):
    # with alpha = 0 the commutator only involves P, so X -> X - E leaves it
    # unchanged and turns h into an unshifted oscillator minus E^2/2
    diff = d1.energy_alpha0(b, E, n) - d1.energy_alpha0(b, 0.0, n)
    assert diff == pytest.approx(-0.5 * E * E, abs=1e-12 * (1 + d1.energy_alpha0(b, 0.0, n)))


def test_equal_branch_agrees_with_general():
    for E in (0.0, 0.5, -1.2):
        d = derived(0.1, 0.1, E)
        for n in range(15):
            assert d1.energy_equal(0.1, E, n) == pytest.approx(d1.energy(d, n), rel=1e-13)
    q = 11 / 9
    e0 = d1.energy_equal(0.1, 0.0, 0)
    assert d1.energy_equal(0.1, 0.5, 0) == pytest.approx(e0 - 0.25 / (q + 1), rel=1e-14)
    assert d1.energy_equal(0.0, 0.4, 2) == pytest.approx(2.5 - 0.08, rel=1e-15)


@pytest.mark.parametrize("alpha", [0.1, 0.3])
def test_beta_to_zero_limit(alpha):
    d = derived(alpha, 1e-10, 0.8)
    for n in range(11):
        assert d1.energy(d, n) == pytest.approx(d1.energy_beta0(alpha, 0.8, n), abs=1e-6)


@pytest.mark.parametrize("beta", [0.1, 0.3])
def test_alpha_to_zero_limit(beta):
    d = derived(1e-10, beta, 0.8)
    for n in range(11):
        assert d1.energy(d, n) == pytest.approx(d1.energy_alpha0(beta, 0.8, n), abs=1e-6)


def test_overflow_is_reported():
    d = derived(0.8, 0.9, 0.1)
    assert d.q > 5
    with pytest.raises(OverflowError):
        d1.energy(d, 2000)


def test_partner_coeffs_ground_and_limit():
    pc = d1.partner_coeffs(derived(0.1, 0.4, 1.0), 0)
    assert pc.a_i == pytest.approx(1.0, rel=1e-14)
    assert pc.b_i == pytest.approx(1.0, rel=1e-14)
    assert pc.c_i == pytest.approx(0.0, abs=1e-14)
    d = derived(1e-12, 1e-12, 0.5)
    for i in range(5):
        pc = d1.partner_coeffs(d, i)
        assert (pc.a_i, pc.b_i, pc.c_i) == pytest.approx((1.0, 1.0, float(i)), abs=1e-9)


@given(params, st.integers(0, 8))
def test_partner_coeffs_field_independent(p, i):
    a, b, E = p
    x = d1.partner_coeffs(derived(a, b, E), i)
    y = d1.partner_coeffs(derived(a, b, 0.0), i)
    assert (x.a_i, x.b_i) == pytest.approx((y.a_i, y.b_i), rel=1e-12)
    assert x.c_i == pytest.approx(y.c_i, rel=1e-10, abs=1e-12)
    assert x.physical and x.mass_ratio > 0 and x.freq_ratio > 0


def test_mode_resolution():
    assert d1.resolve_mode(Deform1DParams(0.0, 0.3)) == "alpha0"
    assert d1.resolve_mode(Deform1DParams(0.3, 0.0)) == "beta0"
    assert d1.resolve_mode(Deform1DParams(0.0, 0.0)) == "alpha0"
    assert d1.resolve_mode(Deform1DParams(0.2, 0.2)) == "equal"
    assert d1.resolve_mode(Deform1DParams(0.2, 0.2 + 1e-15)) == "general"
    with pytest.raises(BranchError):
        d1.resolve_mode(Deform1DParams(0.1, 0.2), "equal")
    with pytest.raises(BranchError):
        d1.resolve_mode(Deform1DParams(0.0, 0.2), "general")
    with pytest.raises(DomainError):
        d1.resolve_mode(Deform1DParams(0.1, 0.2), "bogus")


def test_level_dispatch_consistency():
    p = Deform1DParams(0.3, 0.0, 0.4)
    assert d1.level(p, 3) == (d1.energy_beta0(0.3, 0.4, 3), d1.correction_beta0(0.3, 0.4, 3))
    e, c = d1.level(Deform1DParams(0.2, 0.2, 0.0), 1)
    assert c == 0.0 and math.copysign(1, c) == 1


def test_qnumber_used_in_spectrum_has_classical_limit():
    d = derived(0.3, 0.3, 0.0)
    e = [d1.energy(d, n) for n in range(4)]
    q = d.q
    for n in range(4):
        assert e[n] == pytest.approx(0.5 * (q + 1) * (qnumber(n, q) + 0.5 * q**n), rel=1e-14)
