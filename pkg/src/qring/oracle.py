"""Finite-difference reference spectra for the radial spinor problem.

Fully independent of the matching solver: the coupled radial equations
are discretized on a uniform grid and the lowest eigenvalues are taken
from a symmetric banded eigenproblem.  Accuracy is plain second order,
so this module serves as an oracle for validating the spectral solver
and for locating energy windows, not as a production solver itself.

Discretization notes.  Working variables are x = sqrt(r) u and
y = sqrt(r) w, which turn the radial measure r dr into a flat one and
make the operator symmetric.  The kinetic term uses a conservative
finite-volume form with face radii r_{j+1/2}; for a component with
zero angular index the inner face flux at the first node is dropped,
which encodes the natural regularity condition u'(0) = 0 (components
with nonzero angular index vanish at the origin, which the retained
flux enforces as a Dirichlet wall).  The confinement step is averaged
exactly over each cell, keeping the scheme second order regardless of
where the interfaces fall relative to the grid.  The spin-orbit
coupling block a (d/dr + (m + 1/2)/r + b r) uses a centered difference
and enters the lower triangle as its exact transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig_banded

from .model import RingParams

__all__ = [
    "FdGrid",
    "fd_hamiltonian",
    "fd_spectrum",
    "suggest_window",
]


@dataclass(frozen=True)
class FdGrid:
    """Uniform radial grid r_j = j h, j = 1..n_points, h = r_max/(n+1).

    The first node sits one spacing away from the origin and a hard
    wall is imposed at r_max, so r_max must comfortably exceed the
    classical turning region (decay makes the wall harmless).
    """

    n_points: int = 800
    r_max: float = 3.0

    def __post_init__(self):
        if self.n_points < 500:
            raise ValueError(f"n_points must be >= 500, got {self.n_points}")
        if not self.r_max >= 2.0:
            raise ValueError(f"r_max must be >= 2, got {self.r_max}")

    @property
    def spacing(self) -> float:
        return self.r_max / (self.n_points + 1)

    @property
    def radii(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.n_points + 1)


def fd_hamiltonian(m: int, params: RingParams, grid: FdGrid) -> np.ndarray:
    """Upper-banded storage (4, 2n) of the discretized Hamiltonian.

    Unknowns are interleaved (x_1, y_1, x_2, y_2, ...), giving a
    symmetric matrix of bandwidth 3 suitable for scipy.linalg.eig_banded
    with lower=False.
    """
    n = grid.n_points
    h = grid.spacing
    r = grid.radii
    face_plus = r + 0.5 * h
    face_minus = r - 0.5 * h
    mu_u = abs(m)
    mu_w = abs(m + 1)

    # confinement averaged exactly over each cell [r_j - h/2, r_j + h/2]
    below = np.clip(params.r_i - face_minus, 0.0, h)
    above = np.clip(face_plus - 1.0, 0.0, h)
    v_bar = params.v * (below + above) / h

    common = v_bar + (params.b * r) ** 2
    zeeman = 4.0 * params.s * params.b

    def kinetic_diag(mu: int) -> np.ndarray:
        keep = np.ones(n)
        if mu == 0:
            keep[0] = 0.0
        return (face_plus + keep * face_minus) / (r * h * h)

    d_u = kinetic_diag(mu_u) + (mu_u / r) ** 2 + common + 2.0 * params.b * m + zeeman
    d_w = (
        kinetic_diag(mu_w)
        + (mu_w / r) ** 2
        + common
        + 2.0 * params.b * (m + 1)
        - zeeman
    )
    kinetic_off = -face_plus[:-1] / (h * h * np.sqrt(r[:-1] * r[1:]))
    coupling_diag = params.a * ((m + 0.5) / r + params.b * r)
    coupling_off = params.a / (2.0 * h)

    band = np.zeros((4, 2 * n))
    band[3, 0::2] = d_u
    band[3, 1::2] = d_w
    band[2, 1::2] = coupling_diag  # (x_j, y_j)
    band[2, 2::2] = -coupling_off  # (y_j, x_{j+1}): transpose block
    band[1, 2::2] = kinetic_off  # (x_j, x_{j+1})
    band[1, 3::2] = kinetic_off  # (y_j, y_{j+1})
    band[0, 3::2] = coupling_off  # (x_j, y_{j+1})
    return band


def fd_spectrum(
    m: int, params: RingParams, grid: FdGrid, n_levels: int = 4
) -> list[tuple[float, np.ndarray]]:
    """Lowest bound levels of the discretized problem.

    Returns up to n_levels pairs (e, profile) with e < v, sorted
    ascending.  Each profile has shape (n_points, 2) holding the
    radial components (u, w) on grid.radii, normalized so that
    sum (u^2 + w^2) r h = 1, sign-fixed to a nonnegative integral of
    u (falling back to w when u vanishes).
    """
    if n_levels < 1:
        raise ValueError(f"n_levels must be >= 1, got {n_levels}")
    band = fd_hamiltonian(m, params, grid)
    vals, vecs = eig_banded(
        band, lower=False, select="i", select_range=(0, n_levels - 1)
    )
    scale = 1.0 / np.sqrt(grid.spacing * grid.radii)
    out: list[tuple[float, np.ndarray]] = []
    for col in range(vals.size):
        if vals[col] >= params.v:
            break
        u = vecs[0::2, col] * scale
        w = vecs[1::2, col] * scale
        probe = u.sum()
        if abs(probe) < 1e-8 * np.abs(w).sum():
            probe = w.sum()
        if probe < 0.0:
            u = -u
            w = -w
        out.append((float(vals[col]), np.column_stack((u, w))))
    return out


def suggest_window(
    m: int,
    params: RingParams,
    n_levels: int = 2,
    pad: float = 0.85,
    grid: FdGrid | None = None,
) -> tuple[float, float]:
    """Energy window bracketing the lowest n_levels, from a coarse grid.

    The pad absorbs the discretization error of the default grid; the
    window is clipped to the open interval (0, v) where bound levels
    can live.
    """
    if grid is None:
        grid = FdGrid()
    band = fd_hamiltonian(m, params, grid)
    vals = eig_banded(
        band,
        lower=False,
        eigvals_only=True,
        select="i",
        select_range=(0, n_levels - 1),
    )
    lo = max(float(vals[0]) - pad, 1e-6)
    hi = min(float(vals[-1]) + pad, params.v * (1.0 - 1e-9))
    if not lo < hi:
        raise ValueError(
            f"no bound-level window for m={m}: levels {vals} against depth {params.v}"
        )
    return lo, hi
