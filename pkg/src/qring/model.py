"""Parameter types and unit conversions for the annular ring problem.

The solver works in dimensionless variables: lengths in units of the
outer radius rho_o and energies in units of hbar^2 / (2 M_eff rho_o^2).
In these units the problem is fixed by five numbers,

    v   well depth,
    a   Rashba coupling strength,
    b   magnetic field (flux-like, b = q_e rho_o^2 B / 2 hbar),
    s   Zeeman factor s = g M_eff / (4 M_e),
    r_i inner radius as a fraction of the outer one,

collected in RingParams.  PhysicalConfig holds the dimensional device
description (radii in nm, energies in meV, field in tesla) and converts
both ways.  Conversions use CODATA-2018 constants.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

__all__ = [
    "DEFAULT_PARAMS",
    "PhysicalConfig",
    "RingParams",
    "energy_to_physical",
    "energy_unit_mev",
    "load_config",
    "to_dimensionless",
    "to_physical",
]

# CODATA-2018
HBAR = 1.054571817e-34  # J s
Q_E = 1.602176634e-19  # C (exact)
M_E = 9.1093837015e-31  # kg

_NM = 1e-9
_MEV = 1e-3 * Q_E  # J per meV


@dataclass(frozen=True)
class PhysicalConfig:
    """Dimensional device parameters.

    mass_ratio    effective mass over bare electron mass
    g_factor      effective Lande g factor (sign included)
    rho_i_nm      inner radius, nm
    rho_o_nm      outer radius, nm
    depth_mev     confinement depth V, meV
    field_t       perpendicular magnetic field B, tesla
    rashba_mevnm  Rashba strength a_R, meV nm
    """

    mass_ratio: float
    g_factor: float
    rho_i_nm: float
    rho_o_nm: float
    depth_mev: float
    field_t: float
    rashba_mevnm: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rho_i_nm < self.rho_o_nm:
            raise ValueError(
                f"need 0 < rho_i < rho_o, got {self.rho_i_nm}, {self.rho_o_nm}"
            )
        if self.depth_mev <= 0.0:
            raise ValueError(f"depth must be positive, got {self.depth_mev}")
        if self.mass_ratio <= 0.0:
            raise ValueError(f"mass ratio must be positive, got {self.mass_ratio}")


@dataclass(frozen=True)
class RingParams:
    """Dimensionless problem instance, the solver's canonical input."""

    v: float
    a: float
    b: float
    s: float
    r_i: float

    def __post_init__(self) -> None:
        if self.v <= 0.0:
            raise ValueError(f"well depth v must be positive, got {self.v}")
        if self.a < 0.0:
            raise ValueError(f"Rashba strength a must be nonnegative, got {self.a}")
        if self.b <= 0.0:
            # b = 0 needs a different basis (plain Bessel); out of scope
            raise ValueError(f"magnetic parameter b must be positive, got {self.b}")
        if not 0.0 < self.r_i < 1.0:
            raise ValueError(f"inner radius r_i must lie in (0, 1), got {self.r_i}")


# Ring used for all reference tables: GaAs-like mass and g factor.
DEFAULT_PARAMS = RingParams(v=400.0, a=1.0, b=1.0, s=-0.00737, r_i=0.5)


def energy_unit_mev(mass_ratio: float, rho_o_nm: float) -> float:
    """The energy unit hbar^2 / (2 M_eff rho_o^2), expressed in meV."""
    m_eff = mass_ratio * M_E
    rho = rho_o_nm * _NM
    return HBAR * HBAR / (2.0 * m_eff * rho * rho) / _MEV


def to_dimensionless(pc: PhysicalConfig) -> RingParams:
    """Map a dimensional device description onto RingParams."""
    unit = energy_unit_mev(pc.mass_ratio, pc.rho_o_nm)
    rho = pc.rho_o_nm * _NM
    return RingParams(
        v=pc.depth_mev / unit,
        a=pc.rashba_mevnm / (unit * pc.rho_o_nm),
        b=Q_E * rho * rho * pc.field_t / (2.0 * HBAR),
        s=pc.g_factor * pc.mass_ratio / 4.0,
        r_i=pc.rho_i_nm / pc.rho_o_nm,
    )


def to_physical(rp: RingParams, mass_ratio: float, rho_o_nm: float) -> PhysicalConfig:
    """Inverse of to_dimensionless given the mass ratio and outer radius."""
    unit = energy_unit_mev(mass_ratio, rho_o_nm)
    rho = rho_o_nm * _NM
    return PhysicalConfig(
        mass_ratio=mass_ratio,
        g_factor=4.0 * rp.s / mass_ratio,
        rho_i_nm=rp.r_i * rho_o_nm,
        rho_o_nm=rho_o_nm,
        depth_mev=rp.v * unit,
        field_t=2.0 * HBAR * rp.b / (Q_E * rho * rho),
        rashba_mevnm=rp.a * unit * rho_o_nm,
    )


def energy_to_physical(e: float, pc: PhysicalConfig) -> float:
    """Dimensionless energy e to meV for the given device."""
    return e * energy_unit_mev(pc.mass_ratio, pc.rho_o_nm)


_PHYS_KEYS = {
    "mass_ratio",
    "g_factor",
    "rho_i_nm",
    "rho_o_nm",
    "depth_mev",
    "field_t",
    "rashba_mevnm",
}
_DIMLESS_KEYS = {"v", "a", "b", "s", "r_i"}


def load_config(path: str) -> tuple[RingParams, PhysicalConfig | None]:
    """Read an INI-style config with a [physical] or [dimensionless] block.

    Exactly one of the two sections must be present.  Returns the ring
    parameters plus the PhysicalConfig when the physical form was given
    (used downstream to attach meV columns to reports).
    """
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ValueError(f"config file not found or unreadable: {path}")
    has_phys = cp.has_section("physical")
    has_dim = cp.has_section("dimensionless")
    if has_phys and has_dim:
        raise ValueError("config must contain [physical] or [dimensionless], not both")
    if not has_phys and not has_dim:
        raise ValueError("config needs a [physical] or [dimensionless] section")
    if has_phys:
        sec = cp["physical"]
        unknown = set(sec) - _PHYS_KEYS
        if unknown:
            raise ValueError(f"unknown keys in [physical]: {sorted(unknown)}")
        missing = _PHYS_KEYS - set(sec)
        if missing:
            raise ValueError(f"missing keys in [physical]: {sorted(missing)}")
        pc = PhysicalConfig(**{k: sec.getfloat(k) for k in _PHYS_KEYS})
        return to_dimensionless(pc), pc
    sec = cp["dimensionless"]
    unknown = set(sec) - _DIMLESS_KEYS
    if unknown:
        raise ValueError(f"unknown keys in [dimensionless]: {sorted(unknown)}")
    missing = _DIMLESS_KEYS - set(sec)
    if missing:
        raise ValueError(f"missing keys in [dimensionless]: {sorted(missing)}")
    rp = RingParams(**{k: sec.getfloat(k) for k in _DIMLESS_KEYS})
    return rp, None
