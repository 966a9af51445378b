"""Unit conversions, parameter validation, and config parsing."""

import math

import pytest

from qring.model import (
    DEFAULT_PARAMS,
    PhysicalConfig,
    RingParams,
    energy_to_physical,
    energy_unit_mev,
    load_config,
    to_dimensionless,
    to_physical,
)

GAAS = PhysicalConfig(
    mass_ratio=0.067,
    g_factor=-0.44,
    rho_i_nm=15.0,
    rho_o_nm=30.0,
    depth_mev=252.0,
    field_t=1.46,
    rashba_mevnm=19.0,
)


def test_energy_unit_against_hand_calculation():
    # hbar^2 / (2 m rho^2) with CODATA-2018 constants, GaAs mass, 30 nm
    hbar = 1.054571817e-34
    m = 0.067 * 9.1093837015e-31
    rho = 30e-9
    ref = hbar * hbar / (2.0 * m * rho * rho) / 1.602176634e-22
    assert math.isclose(energy_unit_mev(0.067, 30.0), ref, rel_tol=1e-14)
    # quadratic radius dependence
    assert math.isclose(
        energy_unit_mev(0.067, 60.0), ref / 4.0, rel_tol=1e-14
    )


def test_zeeman_factor_is_exact_ratio():
    rp = to_dimensionless(GAAS)
    assert rp.s == pytest.approx(-0.44 * 0.067 / 4.0, rel=1e-15)
    assert rp.s == pytest.approx(-0.00737, rel=1e-12)


def test_round_trip_physical_dimensionless():
    rp = to_dimensionless(GAAS)
    back = to_physical(rp, GAAS.mass_ratio, GAAS.rho_o_nm)
    for field in (
        "mass_ratio",
        "g_factor",
        "rho_i_nm",
        "rho_o_nm",
        "depth_mev",
        "field_t",
        "rashba_mevnm",
    ):
        assert getattr(back, field) == pytest.approx(
            getattr(GAAS, field), rel=1e-12
        )


def test_conversions_are_linear():
    rp = to_dimensionless(GAAS)
    doubled = PhysicalConfig(
        mass_ratio=GAAS.mass_ratio,
        g_factor=GAAS.g_factor,
        rho_i_nm=GAAS.rho_i_nm,
        rho_o_nm=GAAS.rho_o_nm,
        depth_mev=2.0 * GAAS.depth_mev,
        field_t=2.0 * GAAS.field_t,
        rashba_mevnm=2.0 * GAAS.rashba_mevnm,
    )
    rp2 = to_dimensionless(doubled)
    assert rp2.v == pytest.approx(2.0 * rp.v, rel=1e-14)
    assert rp2.b == pytest.approx(2.0 * rp.b, rel=1e-14)
    assert rp2.a == pytest.approx(2.0 * rp.a, rel=1e-14)
    assert rp2.s == rp.s
    assert rp2.r_i == rp.r_i


def test_energy_to_physical_scales_with_unit():
    assert energy_to_physical(1.0, GAAS) == pytest.approx(
        energy_unit_mev(0.067, 30.0), rel=1e-15
    )
    assert energy_to_physical(7.5, GAAS) == pytest.approx(
        7.5 * energy_unit_mev(0.067, 30.0), rel=1e-15
    )


def test_default_params():
    assert DEFAULT_PARAMS == RingParams(v=400.0, a=1.0, b=1.0, s=-0.00737, r_i=0.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(v=-1.0, a=1.0, b=1.0, s=0.0, r_i=0.5),
        dict(v=400.0, a=-0.1, b=1.0, s=0.0, r_i=0.5),
        dict(v=400.0, a=1.0, b=0.0, s=0.0, r_i=0.5),
        dict(v=400.0, a=1.0, b=1.0, s=0.0, r_i=0.0),
        dict(v=400.0, a=1.0, b=1.0, s=0.0, r_i=1.0),
    ],
)
def test_ring_params_validation(kwargs):
    with pytest.raises(ValueError):
        RingParams(**kwargs)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(rho_i_nm=40.0),
        dict(rho_i_nm=0.0),
        dict(depth_mev=0.0),
        dict(mass_ratio=0.0),
    ],
)
def test_physical_config_validation(kwargs):
    base = dict(
        mass_ratio=0.067,
        g_factor=-0.44,
        rho_i_nm=15.0,
        rho_o_nm=30.0,
        depth_mev=252.0,
        field_t=1.46,
        rashba_mevnm=19.0,
    )
    base.update(kwargs)
    with pytest.raises(ValueError):
        PhysicalConfig(**base)


def _write(tmp_path, text):
    p = tmp_path / "ring.ini"
    p.write_text(text)
    return str(p)


def test_load_config_physical(tmp_path):
    path = _write(
        tmp_path,
        """
[physical]
mass_ratio = 0.067
g_factor = -0.44
rho_i_nm = 15.0
rho_o_nm = 30.0
depth_mev = 252.0
field_t = 1.46
rashba_mevnm = 19.0
""",
    )
    rp, pc = load_config(path)
    assert pc is not None
    assert rp == to_dimensionless(pc)
    assert rp.r_i == pytest.approx(0.5)


def test_load_config_dimensionless(tmp_path):
    path = _write(
        tmp_path,
        """
[dimensionless]
v = 400.0
a = 1.0
b = 1.0
s = -0.00737
r_i = 0.5
""",
    )
    rp, pc = load_config(path)
    assert pc is None
    assert rp == DEFAULT_PARAMS


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("[physical]\nmass_ratio = 0.067\n", "missing keys"),
        (
            "[dimensionless]\nv = 1\na = 1\nb = 1\ns = 0\nr_i = 0.5\nzz = 3\n",
            "unknown keys",
        ),
        ("[other]\nx = 1\n", "needs a"),
        (
            "[physical]\nmass_ratio = 0.067\ng_factor = -0.44\nrho_i_nm = 15\n"
            "rho_o_nm = 30\ndepth_mev = 252\nfield_t = 1.46\nrashba_mevnm = 19\n"
            "[dimensionless]\nv = 1\na = 1\nb = 1\ns = 0\nr_i = 0.5\n",
            "not both",
        ),
    ],
)
def test_load_config_rejects_bad_layout(tmp_path, text, fragment):
    path = _write(tmp_path, text)
    with pytest.raises(ValueError, match=fragment):
        load_config(path)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ValueError, match="not found"):
        load_config(str(tmp_path / "nope.ini"))
