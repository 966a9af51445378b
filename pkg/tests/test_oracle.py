"""Finite-difference oracle: convergence order, limits, band packing."""

import math

import numpy as np
import pytest
from scipy.linalg import eig_banded, eigh
from scipy.optimize import brentq
from scipy.special import jv, yv

from qring.model import DEFAULT_PARAMS, RingParams
from qring.oracle import FdGrid, fd_hamiltonian, fd_spectrum, suggest_window


def _lowest(m, params, grid, k=1):
    band = fd_hamiltonian(m, params, grid)
    return eig_banded(
        band, lower=False, eigvals_only=True, select="i", select_range=(0, k - 1)
    )


def test_hard_wall_bessel_limit():
    # a = 0, s = 0, b -> 0, v huge: levels approach the annular membrane
    # values e = kappa^2 with J_m(kappa r_i) Y_m(kappa) = Y_m(kappa r_i) J_m(kappa)
    params = RingParams(v=1e6, a=0.0, b=0.01, s=0.0, r_i=0.5)
    m = 0

    def cross(kappa):
        return jv(m, kappa * params.r_i) * yv(m, kappa) - yv(
            m, kappa * params.r_i
        ) * jv(m, kappa)

    kappa0 = brentq(cross, 4.0, 8.0)
    want = kappa0 * kappa0
    grid = FdGrid(n_points=3000, r_max=2.0)
    got = float(_lowest(m, params, grid, 1)[0])
    # residual finite-depth leakage and the b^2 r^2 term allow ~1e-2
    assert got == pytest.approx(want, rel=1e-2)


def test_default_ring_ground_level():
    grid = FdGrid(n_points=4000, r_max=3.0)
    e0 = float(_lowest(0, DEFAULT_PARAMS, grid, 1)[0])
    assert e0 == pytest.approx(26.6594, abs=0.03)


def test_second_order_convergence():
    # the h^2 prefactor depends on where the interfaces fall inside a
    # cell, so the doubling keeps them on nodes: (n+1) divisible by 6
    # puts both r_i = 0.5 and r = 1 on grid points at r_max = 3
    e_exact = 26.65935146  # refined matching-solver value
    errs = []
    for n in (1199, 2399, 4799):
        grid = FdGrid(n_points=n, r_max=3.0)
        errs.append(abs(float(_lowest(0, DEFAULT_PARAMS, grid, 1)[0]) - e_exact))
    assert 1.7 < math.log2(errs[0] / errs[1]) < 2.3
    assert 1.7 < math.log2(errs[1] / errs[2]) < 2.3


def test_wall_position_insensitivity():
    # identical spacing, farther wall: the barrier tail hides the change
    near = FdGrid(n_points=2999, r_max=3.0)
    far = FdGrid(n_points=3999, r_max=4.0)
    assert near.spacing == far.spacing
    e_near = float(_lowest(0, DEFAULT_PARAMS, near, 1)[0])
    e_far = float(_lowest(0, DEFAULT_PARAMS, far, 1)[0])
    assert abs(e_near - e_far) < 1e-8


def test_band_packing_matches_dense_matrix():
    params = RingParams(v=40.0, a=1.3, b=0.8, s=0.1, r_i=0.4)
    grid = FdGrid(n_points=500, r_max=2.5)
    band = fd_hamiltonian(-1, params, grid)
    size = 2 * grid.n_points
    dense = np.zeros((size, size))
    for j in range(size):
        for u in range(4):
            i = j - (3 - u)
            if 0 <= i <= j:
                dense[i, j] = band[u, j]
    dense = dense + dense.T - np.diag(np.diag(dense))
    assert np.allclose(dense, dense.T)
    vals_band = eig_banded(
        band, lower=False, eigvals_only=True, select="i", select_range=(0, 3)
    )
    vals_dense = eigh(dense, eigvals_only=True, subset_by_index=(0, 3))
    assert np.allclose(vals_band, vals_dense, rtol=0.0, atol=1e-9)


def test_fd_spectrum_contract():
    grid = FdGrid(n_points=1500, r_max=3.0)
    pairs = fd_spectrum(0, DEFAULT_PARAMS, grid, n_levels=3)
    assert len(pairs) == 3
    energies = [e for e, _ in pairs]
    assert energies == sorted(energies)
    h = grid.spacing
    for e, profile in pairs:
        assert e < DEFAULT_PARAMS.v
        assert profile.shape == (grid.n_points, 2)
        norm = np.sum((profile[:, 0] ** 2 + profile[:, 1] ** 2) * grid.radii * h)
        assert norm == pytest.approx(1.0, rel=1e-10)
        probe = profile[:, 0].sum()
        if abs(probe) < 1e-8 * np.abs(profile[:, 1]).sum():
            probe = profile[:, 1].sum()
        assert probe >= 0.0
    with pytest.raises(ValueError):
        fd_spectrum(0, DEFAULT_PARAMS, grid, n_levels=0)


def test_shallow_well_keeps_only_bound_levels():
    shallow = RingParams(v=25.0, a=1.0, b=1.0, s=-0.00737, r_i=0.5)
    grid = FdGrid(n_points=1500, r_max=3.0)
    pairs = fd_spectrum(0, shallow, grid, n_levels=12)
    assert 0 < len(pairs) <= 12
    assert all(e < shallow.v for e, _ in pairs)


def test_suggest_window_brackets_levels():
    lo, hi = suggest_window(0, DEFAULT_PARAMS, n_levels=2)
    assert lo < 26.659 < 31.558 < hi
    assert lo > 0.0
    assert hi < DEFAULT_PARAMS.v


def test_grid_validation():
    with pytest.raises(ValueError):
        FdGrid(n_points=100)
    with pytest.raises(ValueError):
        FdGrid(n_points=1000, r_max=1.2)
