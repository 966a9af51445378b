"""Closed-form radial bases against direct numerical integration.

The coupled radial system for the spinor components (u, w) at local
energy shift E reads

    -u'' - u'/r + ((m/r + b r)^2 + 4 b s) u
        + a ( w' + ((m+1)/r + b r) w ) = E u,
    -w'' - w'/r + (((m+1)/r + b r)^2 - 4 b s) w
        + a ( -u' + (m/r + b r) u ) = E w.

Each test seeds an initial condition from the closed-form basis, runs
a high-order initial value integration across the region, and compares
against the closed form at the far end.
"""

import cmath
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from qring.model import DEFAULT_PARAMS, RingParams
from qring.radial import (
    DegenerateDenominatorError,
    Regime,
    assemble_uw,
    exponents,
    r_cut,
    region1_basis,
    region2_basis,
    region3_basis,
)


def _rhs(m, E, params):
    a, b, s = params.a, params.b, params.s

    def fun(r, y):
        u, up, w, wp = y
        upp = (
            -up / r
            + ((m / r + b * r) ** 2 + 4.0 * b * s - E) * u
            + a * (wp + ((m + 1) / r + b * r) * w)
        )
        wpp = (
            -wp / r
            + (((m + 1) / r + b * r) ** 2 - 4.0 * b * s - E) * w
            + a * (-up + (m / r + b * r) * u)
        )
        return [up, upp, wp, wpp]

    return fun


def _state_vector(basis, which, m, params, r):
    """(u, u', w, w') of one family member from basis values at r."""
    b = params.b
    f = getattr(basis, f"f_{which}")
    df = getattr(basis, f"df_{which}")
    g = getattr(basis, f"g_{which}")
    dg = getattr(basis, f"dg_{which}")
    env = math.exp(-0.5 * b * r * r)
    sq = math.sqrt(b) * r
    am = abs(m)
    aw = abs(m + 1)
    gpref = params.a / (2.0 * math.sqrt(b))
    u = env * sq**am * f
    up = env * sq**am * (df + (am / r - b * r) * f)
    w = env * sq**aw * gpref * g
    wp = env * sq**aw * gpref * (dg + (aw / r - b * r) * g)
    return np.array([u, up, w, wp], dtype=complex)


def _propagate(m, E, params, y0, r0, r1):
    sol = solve_ivp(
        _rhs(m, E, params),
        (r0, r1),
        y0,
        method="DOP853",
        rtol=1e-11,
        atol=1e-13 * np.abs(y0).max(),
    )
    assert sol.success
    return sol.y[:, -1]


def _rel_gap(got, want):
    scale = max(np.abs(want).max(), 1e-280)
    return np.abs(got - want).max() / scale


@pytest.mark.parametrize("m", [0, -1, 2, -3])
def test_region1_closed_form_propagates(m):
    e = 30.0
    params = DEFAULT_PARAMS
    r0, r1 = 0.2, 0.45
    b0 = region1_basis(m, e, params, r0)
    b1 = region1_basis(m, e, params, r1)
    assert exponents(e - params.v, params).regime is Regime.CONJUGATE_PAIR
    for which in ("plus", "minus"):
        y0 = _state_vector(b0, which, m, params, r0)
        want = _state_vector(b1, which, m, params, r1)
        got = _propagate(m, e - params.v, params, y0, r0, r1)
        assert _rel_gap(got, want) < 1e-7


def test_region1_real_regime_propagates():
    # shallow well puts the disk exponents on the real branch
    params = RingParams(v=25.0, a=1.0, b=1.0, s=-0.00737, r_i=0.5)
    e = 22.7
    assert exponents(e - params.v, params).regime is Regime.REAL_PAIR
    r0, r1 = 0.15, 0.4
    b0 = region1_basis(0, e, params, r0)
    b1 = region1_basis(0, e, params, r1)
    for which in ("plus", "minus"):
        y0 = _state_vector(b0, which, 0, params, r0)
        want = _state_vector(b1, which, 0, params, r1)
        got = _propagate(0, e - params.v, params, y0, r0, r1)
        assert _rel_gap(got, want) < 1e-7


@pytest.mark.parametrize("m", [0, -1, 1, -2])
def test_region2_both_families_propagate(m):
    e = 30.0
    params = DEFAULT_PARAMS
    r0, r1 = 0.55, 0.95
    m0, u0 = region2_basis(m, e, params, r0)
    m1, u1 = region2_basis(m, e, params, r1, u_log_shift=u0.log_scale)
    assert u1.log_scale == u0.log_scale
    for basis0, basis1 in ((m0, m1), (u0, u1)):
        for which in ("plus", "minus"):
            y0 = _state_vector(basis0, which, m, params, r0)
            want = _state_vector(basis1, which, m, params, r1)
            got = _propagate(m, e, params, y0, r0, r1)
            assert _rel_gap(got, want) < 1e-7


@pytest.mark.parametrize("m", [0, -2])
def test_region3_decaying_family_propagates(m):
    e = 30.0
    params = DEFAULT_PARAMS
    r0, r1 = 1.05, 1.3
    b0 = region3_basis(m, e, params, r0)
    b1 = region3_basis(m, e, params, r1, log_shift=b0.log_scale)
    for which in ("plus", "minus"):
        y0 = _state_vector(b0, which, m, params, r0)
        want = _state_vector(b1, which, m, params, r1)
        got = _propagate(m, e - params.v, params, y0, r0, r1)
        assert _rel_gap(got, want) < 1e-7


def test_exponent_vieta_identities():
    rng = np.random.default_rng(31)
    for _ in range(200):
        params = RingParams(
            v=float(rng.uniform(5, 800)),
            a=float(rng.uniform(0, 2.5)),
            b=float(rng.uniform(0.05, 4.0)),
            s=float(rng.uniform(-0.3, 0.6)),
            r_i=0.5,
        )
        e_sh = float(rng.uniform(-500, 500))
        ex = exponents(e_sh, params)
        a, b, s = params.a, params.b, params.s
        ksum = ex.k_plus + ex.k_minus
        assert abs(ksum - (e_sh + 0.5 * a * a) / (2.0 * b)) < 1e-9 * (
            1.0 + abs(ksum)
        )
        kprod = ex.k_plus * ex.k_minus
        want = ((e_sh + 0.5 * a * a) ** 2 - ex.discriminant) / (16.0 * b * b)
        assert abs(kprod - want) < 1e-9 * (1.0 + abs(want))
        dsum = ex.d_plus + ex.d_minus
        assert abs(dsum - 2.0 * (s - 0.5 - a * a / (8.0 * b))) < 1e-10 * (
            1.0 + abs(dsum)
        )
        if ex.regime is Regime.CONJUGATE_PAIR:
            assert ex.k_minus == ex.k_plus.conjugate()
            assert ex.d_minus == ex.d_plus.conjugate()
        else:
            assert ex.k_plus.imag == 0.0
            assert ex.k_minus.imag == 0.0


def test_well_region_always_real_branch():
    # inside the well E = e > 0, so the discriminant is strictly positive
    rng = np.random.default_rng(37)
    for _ in range(100):
        params = RingParams(
            v=float(rng.uniform(5, 800)),
            a=float(rng.uniform(0.01, 2.5)),
            b=float(rng.uniform(0.05, 4.0)),
            s=float(rng.uniform(-0.3, 0.4)),
            r_i=0.5,
        )
        e = float(rng.uniform(1e-6, params.v))
        ex = exponents(e, params)
        assert ex.regime is Regime.REAL_PAIR
        assert ex.discriminant > 0.0


def test_confluent_exponents_at_closed_special_point():
    # a = 0, s = 1/2 kills the discriminant; E = 4, b = 1 makes k = 1
    params = RingParams(v=400.0, a=0.0, b=1.0, s=0.5, r_i=0.5)
    ex = exponents(4.0, params)
    assert ex.discriminant == 0.0
    assert ex.regime is Regime.REAL_PAIR
    assert ex.k_plus == ex.k_minus == 1.0 + 0.0j


def test_degenerate_denominator_raises():
    # root = 4 b (1/2 - s) + a^2/2 makes D^- vanish; invert for E
    params = RingParams(v=400.0, a=1.0, b=1.0, s=0.0, r_i=0.5)
    a, b, s = params.a, params.b, params.s
    root = 4.0 * b * (0.5 - s) + 0.5 * a * a
    e_sh = (root * root - 16.0 * b * b * (s - 0.5) ** 2) / (a * a) - 0.25 * a * a
    ex = exponents(e_sh, params)
    assert abs(ex.d_minus) < 1e-12
    with pytest.raises(DegenerateDenominatorError):
        region2_basis(0, e_sh, params, 0.7)


def test_disk_family_regular_at_origin():
    # M(alpha, beta, 0) = 1, so f -> 1 and u ~ r^{|m|}
    basis = region1_basis(3, 50.0, DEFAULT_PARAMS, 1e-6)
    assert abs(basis.f_plus - 1.0) < 1e-9
    assert abs(basis.f_minus - 1.0) < 1e-9


def test_barrier_family_decays():
    # tail falls like exp(-sqrt(v - e) (r - 1)): ~2e-5 over this span
    e = 30.0
    kappa = math.sqrt(DEFAULT_PARAMS.v - e)
    b0 = region3_basis(0, e, DEFAULT_PARAMS, 1.05)
    b1 = region3_basis(0, e, DEFAULT_PARAMS, 1.6, log_shift=b0.log_scale)
    u0, _ = assemble_uw(0, DEFAULT_PARAMS, b0.f_plus, b0.g_plus, 1.05)
    u1, _ = assemble_uw(0, DEFAULT_PARAMS, b1.f_plus, b1.g_plus, 1.6)
    ratio = abs(u1) / abs(u0)
    assert ratio < 10.0 * math.exp(-kappa * 0.55)
    assert ratio > 0.01 * math.exp(-kappa * 0.55)


def test_assemble_uw_envelope():
    params = DEFAULT_PARAMS
    r = 0.8
    u, w = assemble_uw(2, params, 1.0 + 0.0j, 1.0 + 0.0j, r)
    env = math.exp(-0.5 * params.b * r * r)
    sq = math.sqrt(params.b) * r
    assert u == pytest.approx(env * sq**2)
    assert w == pytest.approx(env * sq**3)
    u2, w2 = assemble_uw(-3, params, 1.0 + 0.0j, 1.0 + 0.0j, r)
    assert u2 == pytest.approx(env * sq**3)
    assert w2 == pytest.approx(env * sq**2)


def test_r_cut_clamps():
    params = DEFAULT_PARAMS
    assert r_cut(params, 0.0) == 1.5
    assert r_cut(params, params.v) == 6.0
    assert r_cut(params, params.v + 10.0) == 6.0
    mid = r_cut(params, params.v - 25.0)
    assert mid == pytest.approx(1.0 + 8.0 / 5.0)
    shallow = RingParams(v=25.0, a=1.0, b=1.0, s=0.0, r_i=0.5)
    assert r_cut(shallow, 24.9) == 6.0
