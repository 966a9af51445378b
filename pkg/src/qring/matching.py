"""Boundary matching: the 8x8 continuity system and the spectrum it encodes.

Each region contributes basis families (f, g) in two exponent branches
k^+ and k^-.  Continuity of f, f', g, g' at the two interfaces r = r_i
and r = 1 gives eight homogeneous equations for the eight combination
coefficients; energies are the zeros of the determinant.

Two transformations make the determinant numerically trustworthy while
leaving its zero set untouched (each multiplies det by a smooth nonzero
factor):

* Denominator clearing.  The g members carry 1/D^pm factors whose
  zeros are parametrization artifacts.  Every column is multiplied by
  its D^pm, which removes the poles; the cleared columns are assembled
  from division-free quadruples.

* Pair realification.  The exterior +/- pairs (regions outside the
  well) use the combination columns (col+ + col-)/2 and
  (col+ - col-)/(2 Delta), Delta = (k+ - k-)/2.  In the conjugate
  regime these are the real and imaginary parts of col+, making the
  matrix real; crucially the determinant then stays smooth and nonzero
  through the exponent confluence disc = 0 (where col+ and col- would
  coalesce and produce a spurious sign change exactly at the crossing
  energy e* with disc(e*) = 0 -- such crossings sit inside physical
  scan windows, e.g. for shallow wells near the barrier top).  The
  interior pairs are kept as separate branch columns instead: their
  regime is real for every e > 0 with the pair bounded away from
  confluence, while the branch magnitudes can differ by a large
  gamma-function factor that the combination columns would cancel to
  rounding noise (narrow rings push the interior k to values of tens).

At a = 0 the spin components decouple; the matrix is then built as two
independent 4x4 blocks (spin-up from the f families at k^+, spin-down
from the g families at k^-) embedded in the same 8x8 layout, so scans,
refinement and state extraction share one code path.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .model import RingParams
from .radial import (
    DegenerateDenominatorError,
    Exponents,
    Regime,
    _m_quadruple,
    _pair_arguments,
    _u_quadruple,
    assemble_uw,
    exponents,
    r_cut,
)

__all__ = [
    "BoundState",
    "ImaginaryDetError",
    "MatchingError",
    "MatchingMatrix",
    "MaxIterationsError",
    "RankDeficiencyAmbiguousError",
    "SolveError",
    "assemble",
    "basis_degeneracy_energies",
    "levels",
    "refine_root",
    "sample_wavefunction",
    "scaled_det",
    "scan_levels",
    "solve_state",
]


class MatchingError(Exception):
    """Base class for matching-stage failures."""


class ImaginaryDetError(MatchingError):
    """Imaginary residue of the realified matrix exceeds tolerance.

    The symmetrized columns must be real up to roundoff whenever the
    basis obeys its conjugation symmetry; a violation signals a basis
    bug, so the scan is aborted rather than silently truncated.
    """


class MaxIterationsError(MatchingError):
    """Root refinement failed to converge inside a valid bracket."""


class SolveError(MatchingError):
    """Null-space extraction failed at a claimed root."""


class RankDeficiencyAmbiguousError(MatchingError):
    """Two singular values are small: near-degenerate level crossing."""

    def __init__(self, message: str, null_vectors=None):
        super().__init__(message)
        self.null_vectors = null_vectors


_DEGENERATE_NUDGE = 1e-9  # relative energy shift used to sidestep artifacts


class _Families:
    """Symmetrized cleared basis machinery for one (m, e, params).

    Families are indexed 0..3: region-1 M-type (outer shift e - v),
    region-2 M-type, region-2 U-type (both inner shift e), region-3
    U-type (outer shift).  Family j owns matrix columns (2j, 2j+1).
    U-type families are scale-managed: the first evaluation anchors a
    log shift that all later radii reuse, so each family remains one
    consistent function of r.
    """

    def __init__(
        self,
        m: int,
        e: float,
        params: RingParams,
        u2_log_shift: float | None = None,
        u3_log_shift: float | None = None,
    ):
        self.m = m
        self.e = e
        self.params = params
        self.a_zero = params.a == 0.0
        self.ex_out = exponents(e - params.v, params)
        self.ex_in = exponents(e, params)
        self.delta_out = 0.5 * (self.ex_out.k_plus - self.ex_out.k_minus)
        self.delta_in = 0.5 * (self.ex_in.k_plus - self.ex_in.k_minus)
        if not self.a_zero:
            for ex, delta in (
                (self.ex_out, self.delta_out),
                (self.ex_in, self.delta_in),
            ):
                if abs(delta) < 1e-10 * max(1.0, abs(ex.k_plus)):
                    raise DegenerateDenominatorError(
                        f"exponent confluence (k+ = k-) at e={e!r}; "
                        "shift the evaluation energy"
                    )
        self._shift = {2: u2_log_shift, 3: u3_log_shift}

    def _exponent_info(self, fam: int) -> tuple[Exponents, complex]:
        if fam in (0, 3):
            return self.ex_out, self.delta_out
        return self.ex_in, self.delta_in

    def _pair(self, fam: int, r: float) -> tuple[np.ndarray, np.ndarray]:
        """Cleared quadruples (q+, q-) of family fam at radius r.

        Clearing multiplies each branch column by its denominator D^pm:
        the raw quadruples carry (f, f', G, G') with the g member
        already free of 1/D, so only the f rows pick up the factor.
        """
        ex, _ = self._exponent_info(fam)
        xi = self.params.b * r * r
        dxi = 2.0 * self.params.b * r
        if fam in (0, 1):
            qp = np.array(_m_quadruple(self.m, ex.k_plus, xi, dxi))
            qp[0:2] *= ex.d_plus
            if ex.regime is Regime.CONJUGATE_PAIR:
                qm = qp.conjugate()
            else:
                qm = np.array(_m_quadruple(self.m, ex.k_minus, xi, dxi))
                qm[0:2] *= ex.d_minus
            return qp, qm
        scaled_p = _u_quadruple(self.m, ex.k_plus, xi, dxi)
        if ex.regime is Regime.CONJUGATE_PAIR:
            scaled_m = [(mant.conjugate(), l) for mant, l in scaled_p]
        else:
            scaled_m = _u_quadruple(self.m, ex.k_minus, xi, dxi)
        shift = self._shift[fam]
        if shift is None:
            shift = max(l for _, l in scaled_p + tuple(scaled_m))
            self._shift[fam] = shift
        qp = np.array(
            [mant * math.exp(l - shift) if l - shift > -745.0 else 0.0j
             for mant, l in scaled_p]
        )
        qm = np.array(
            [mant * math.exp(l - shift) if l - shift > -745.0 else 0.0j
             for mant, l in scaled_m]
        )
        qp[0:2] *= ex.d_plus
        qm[0:2] *= ex.d_minus
        return qp, qm

    def _real_columns(self, fam: int, r: float) -> np.ndarray:
        """Real (4, 2) column block of family fam at radius r.

        Interior families (1, 2) keep the two branches as separate
        columns: their branch magnitudes can differ by many orders (a
        gamma-function growth in k), so the sum/difference combination
        would erase the smaller branch.  Their pair never approaches
        confluence for e > 0, which makes the raw branches safe.
        Exterior families (0, 3) use the combination columns
        (q+ + q-)/2 and (q+ - q-)/(2 Delta): these realify the
        conjugate regime and stay smooth through the confluence the
        exterior pair crosses near threshold, where both branch
        magnitudes are comparable anyway.
        """
        ex, delta = self._exponent_info(fam)
        qp, qm = self._pair(fam, r)
        if ex.regime is Regime.CONJUGATE_PAIR:
            # q- = conj(q+), Delta = i |Delta|: exact real forms
            return np.column_stack((qp.real, qp.imag / delta.imag))
        if fam in (1, 2):
            block = np.column_stack((qp, qm))
        else:
            col_a = 0.5 * (qp + qm)
            col_b = (qp - qm) / (2.0 * delta)
            block = np.column_stack((col_a, col_b))
        scale = np.abs(block.real).max()
        resid = np.abs(block.imag).max()
        if resid > 1e-10 * max(scale, 1e-300):
            raise ImaginaryDetError(
                f"realified columns not real: residue {resid:.2e} "
                f"against scale {scale:.2e} (m={self.m}, e={self.e!r})"
            )
        return block.real

    def _decoupled(self, fam: int, r: float) -> np.ndarray:
        """a = 0 block (4, 2): spin-up f column and spin-down g column.

        The spin-up radial problem is solved by the f member at k^+,
        the spin-down one by the g member at k^- (without its constant
        prefactor, which would vanish with k or m).  Entries are placed
        in the f rows / g rows respectively; the other rows stay zero.
        """
        from . import specfun

        ex, _ = self._exponent_info(fam)
        xi = self.params.b * r * r
        dxi = 2.0 * self.params.b * r
        af, bf, _, _, _ = _pair_arguments(self.m, ex.k_plus)
        _, _, ag, bg, _ = _pair_arguments(self.m, ex.k_minus)
        block = np.zeros((4, 2))
        if fam in (0, 1):
            fu = specfun.kummer_m(af, bf, xi)
            dfu = af / bf * specfun.kummer_m(af + 1, bf + 1, xi) * dxi
            gw = specfun.kummer_m(ag, bg, xi)
            dgw = ag / bg * specfun.kummer_m(ag + 1, bg + 1, xi) * dxi
            vals = (fu, dfu, gw, dgw)
            block[0, 0], block[1, 0] = vals[0].real, vals[1].real
            block[2, 1], block[3, 1] = vals[2].real, vals[3].real
            return block
        pairs = [
            specfun.tricomi_u_scaled(af, bf, xi),
            specfun.tricomi_u_scaled(af + 1, bf + 1, xi),
            specfun.tricomi_u_scaled(ag, bg, xi),
            specfun.tricomi_u_scaled(ag + 1, bg + 1, xi),
        ]
        shift = self._shift[fam]
        if shift is None:
            shift = max(l for _, l in pairs)
            self._shift[fam] = shift
        vals = [mant * math.exp(l - shift) if l - shift > -745.0 else 0.0j
                for mant, l in pairs]
        block[0, 0] = vals[0].real
        block[1, 0] = (-af * vals[1] * dxi).real
        block[2, 1] = vals[2].real
        block[3, 1] = (-ag * vals[3] * dxi).real
        return block

    def block(self, fam: int, r: float) -> np.ndarray:
        """Real (4, 2) column block of family fam evaluated at r."""
        if self.a_zero:
            return self._decoupled(fam, r)
        return self._real_columns(fam, r)

    # -- state evaluation -------------------------------------------------

    def quantities(self, region: int, r: float, chat: np.ndarray) -> np.ndarray:
        """(f, f', g, g') combination of one region at r.

        region 1 uses coefficients chat[0:2], region 2 chat[2:6],
        region 3 chat[6:8].
        """
        if region == 1:
            return self.block(0, r) @ chat[0:2]
        if region == 2:
            return (self.block(1, r) @ chat[2:4]) + (self.block(2, r) @ chat[4:6])
        return self.block(3, r) @ chat[6:8]

    def uw_at(self, chat: np.ndarray, r: float) -> tuple[float, float]:
        """Physical radial components (u, w) at r for coefficients chat."""
        if r <= self.params.r_i:
            q = self.quantities(1, r, chat)
        elif r <= 1.0:
            q = self.quantities(2, r, chat)
        else:
            q = self.quantities(3, r, chat)
        if self.a_zero:
            g_factor = 1.0
        else:
            g_factor = self.params.a / (2.0 * math.sqrt(self.params.b))
        u, w = assemble_uw(self.m, self.params, q[0], g_factor * q[2], r)
        return u.real, w.real


@dataclass
class MatchingMatrix:
    """Assembled 8x8 continuity matrix in the real column form.

    Rows: f, f', g, g' continuity at r_i (0..3) then at r = 1 (4..7).
    Columns: family pairs (region-1, region-2 M, region-2 U, region-3),
    two columns each.  column_scales is populated by scaled_det.
    """

    entries: np.ndarray
    m: int
    e: float
    families: _Families
    column_scales: np.ndarray | None = None


def assemble(m: int, e: float, params: RingParams) -> MatchingMatrix:
    """Build the continuity matrix at energy e for quantum number m.

    Zero blocks are structural: region-1 columns act only at r_i,
    region-3 columns only at r = 1.  Raises DegenerateDenominatorError
    at exponent-confluence energies (callers nudge and retry).
    """
    fam = _Families(m, e, params)
    entries = np.zeros((8, 8))
    r_i = params.r_i
    entries[0:4, 0:2] = fam.block(0, r_i)
    entries[0:4, 2:4] = -fam.block(1, r_i)
    entries[0:4, 4:6] = -fam.block(2, r_i)
    entries[4:8, 2:4] = fam.block(1, 1.0)
    entries[4:8, 4:6] = fam.block(2, 1.0)
    entries[4:8, 6:8] = -fam.block(3, 1.0)
    return MatchingMatrix(entries=entries, m=m, e=e, families=fam)


def scaled_det(matrix: MatchingMatrix) -> float:
    """Determinant after per-column max-magnitude scaling.

    Column scales are positive, so the returned value has a consistent
    sign as a function of e.  The matrix is real by construction (the
    conjugation symmetry is enforced with tolerance 1e-10 during
    assembly, raising ImaginaryDetError on violation), so no imaginary
    part remains to discard here.
    """
    scales = np.abs(matrix.entries).max(axis=0)
    safe = np.where(scales > 0.0, scales, 1.0)
    matrix.column_scales = safe
    if np.any(scales == 0.0):
        return 0.0
    return float(np.linalg.det(matrix.entries / safe))


def _det_at(m: int, params: RingParams, e: float) -> float:
    """scaled_det at e, sidestepping degenerate energies by one nudge."""
    try:
        return scaled_det(assemble(m, e, params))
    except DegenerateDenominatorError:
        e_nudged = e + _DEGENERATE_NUDGE * (1.0 + abs(e))
        return scaled_det(assemble(m, e_nudged, params))


def basis_degeneracy_energies(
    m: int, params: RingParams, e_lo: float, e_hi: float
) -> list[float]:
    """Energies in [e_lo, e_hi] where the well-region basis degenerates.

    Whenever an exponent k of the well region hits an integer n large
    enough that the confluent parameters become nonpositive integers,
    the second-kind members turn polynomial and coincide with the
    first-kind ones, so the matching determinant acquires an exact,
    sign-changing zero that is not an eigenvalue.  Setting k(e) = n and
    eliminating the discriminant gives the closed form

        e* = 4 b n +- sqrt(4 a^2 b n + 16 b^2 (s - 1/2)^2).

    Each candidate is verified against the actual exponents before
    being accepted; the determinant used for root scanning divides out
    one linear factor per listed energy.
    """
    c_zee = 16.0 * params.b**2 * (params.s - 0.5) ** 2
    if params.a == 0.0:
        n_min_plus = max(1, m + 1)  # first-kind pair, carried by k+
        n_min_minus = max(0, m + 1)  # second-kind pair, carried by k-
    else:
        n_min_plus = n_min_minus = max(1, m + 1)
    out: list[float] = []
    n = min(n_min_plus, n_min_minus)
    while True:
        radical = math.sqrt(4.0 * params.a**2 * params.b * n + c_zee)
        lo_cand = 4.0 * params.b * n - radical
        if lo_cand > e_hi:
            break
        for e_star in (lo_cand, 4.0 * params.b * n + radical):
            if not e_lo <= e_star <= e_hi:
                continue
            try:
                ex = exponents(e_star, params)
            except Exception:
                continue
            if ex.regime is not Regime.REAL_PAIR:
                continue
            tol = 1e-6 * max(1.0, n)
            if abs(ex.k_plus - n) < tol and n >= n_min_plus:
                out.append(e_star)
            elif abs(ex.k_minus - n) < tol and n >= n_min_minus:
                out.append(e_star)
        n += 1
    return sorted(out)


def _deflated_det(m: int, params: RingParams, spurious: list[float]):
    """Determinant function with known basis-degeneracy zeros removed.

    Near each listed energy the evaluation point is pushed to the edge
    of a small guard interval (the polynomial limit underneath makes
    the raw determinant collapse exactly there), then one normalized
    linear factor per listed energy is divided out.
    """

    def det(e: float) -> float:
        for e_star in spurious:
            guard = 1e-7 * (1.0 + abs(e_star))
            if abs(e - e_star) < guard:
                e = e_star + (guard if e >= e_star else -guard)
                break
        value = _det_at(m, params, e)
        for e_star in spurious:
            value /= (e - e_star) / (1.0 + 0.1 * abs(e_star))
        return value

    return det


def scan_levels(
    m: int, params: RingParams, e_lo: float, e_hi: float, de: float = 0.05
) -> list[tuple[float, float]]:
    """Sign-change brackets of the matching determinant on a uniform grid.

    The determinant is deflated by the known basis-degeneracy factors
    first, so only genuine eigenvalues produce sign changes.  Grid
    points where even the nudged evaluation fails are skipped;
    bracketing then uses the surviving neighbors.  Local minima of
    |det| below 1e-9 of the neighborhood scale without a sign change
    are reported via warnings (possible double root / det touch).
    """
    if not e_lo < e_hi:
        raise ValueError(f"need e_lo < e_hi, got {e_lo}, {e_hi}")
    if de <= 0.0:
        raise ValueError(f"need de > 0, got {de}")
    spurious = basis_degeneracy_energies(m, params, e_lo - de, e_hi + de)
    det = _deflated_det(m, params, spurious)
    n = int(math.floor((e_hi - e_lo) / de + 1e-9)) + 1
    grid = [min(e_lo + i * de, e_hi) for i in range(n)]
    if grid[-1] < e_hi - 1e-12 * max(1.0, abs(e_hi)):
        grid.append(e_hi)
    points: list[tuple[float, float]] = []
    for e in grid:
        try:
            value = det(e)
            if value == 0.0:
                value = det(e + _DEGENERATE_NUDGE * (1.0 + abs(e)))
            if value == 0.0:
                continue
            points.append((e, value))
        except DegenerateDenominatorError:
            warnings.warn(f"scan point e={e} skipped: degenerate even after nudge")
    brackets = [
        (e0, e1)
        for (e0, v0), (e1, v1) in zip(points, points[1:])
        if v0 * v1 < 0.0
    ]
    # det touching zero without sign change hints at a double root
    for i in range(1, len(points) - 1):
        (em, vm), (e0, v0), (ep, vp) = points[i - 1], points[i], points[i + 1]
        if abs(v0) < abs(vm) and abs(v0) < abs(vp) and vm * vp > 0.0:
            if abs(v0) < 1e-9 * max(abs(vm), abs(vp)):
                warnings.warn(
                    f"determinant touch near e={e0}: |det|={abs(v0):.2e} "
                    "without sign change; possible double root"
                )
    return brackets


def refine_root(
    bracket: tuple[float, float], m: int, params: RingParams
) -> float:
    """Determinant zero inside a sign-change bracket, to 1e-10 relative."""
    lo, hi = bracket
    spurious = basis_degeneracy_energies(m, params, lo - 0.5, hi + 0.5)
    det = _deflated_det(m, params, spurious)
    try:
        root, info = brentq(
            det,
            lo,
            hi,
            xtol=1e-12,
            rtol=1e-10,
            maxiter=200,
            full_output=True,
        )
    except ValueError as exc:
        raise MatchingError(f"invalid bracket {bracket} for m={m}: {exc}") from exc
    if not info.converged:
        raise MaxIterationsError(
            f"root refinement did not converge in bracket {bracket} (m={m})"
        )
    return float(root)


def _segments(fam: _Families) -> tuple[tuple[float, float], ...]:
    cut = r_cut(fam.params, fam.e)
    return ((0.0, fam.params.r_i), (fam.params.r_i, 1.0), (1.0, cut))


def _density(fam: _Families, chat: np.ndarray):
    def rho(r: float) -> float:
        u, w = fam.uw_at(chat, r)
        return (u * u + w * w) * r

    return rho


_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _gauss_segment(rho, lo: float, hi: float, panels: int) -> float:
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        acc = 0.0
        for x, wt in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
            acc += wt * rho(mid + half * x)
        total += half * acc
    return total


def _norm_integral(fam: _Families, chat: np.ndarray) -> float:
    """Integral of (u^2 + w^2) r dr over [0, r_cut].

    Composite 32-point Gauss panels per analytic segment, with panel
    doubling until two successive estimates agree to 1e-12 relative.
    The density oscillates on the scale 1/sqrt(e), so the starting
    panel count tracks the segment's phase span; the relative stop is
    immune to the overall coefficient scale.  Spectral convergence on
    these piecewise-analytic densities means the doubling loop settles
    after one or two rounds; a warning (not an error) reports the rare
    failure to settle so norm_check stays honest.
    """
    rho = _density(fam, chat)
    phase = math.sqrt(max(abs(fam.e), 1.0))
    total = 0.0
    for a, b in _segments(fam):
        panels = max(2, int(math.ceil((b - a) * phase / 12.0)))
        value = _gauss_segment(rho, a, b, panels)
        for _ in range(6):
            panels *= 2
            refined = _gauss_segment(rho, a, b, panels)
            close = abs(refined - value) <= 1e-12 * max(abs(refined), 1e-30)
            value = refined
            if close:
                break
        else:
            warnings.warn(
                f"norm integral on [{a:g}, {b:g}] did not settle at "
                f"{panels} panels (m={fam.m}, e={fam.e!r})",
                stacklevel=2,
            )
        total += value
    return total


def _paper_coefficients(fam: _Families, chat: np.ndarray) -> tuple[complex, ...]:
    """Map internal column coefficients back to the branch convention.

    Exterior combination pairs map through c^pm = D^pm (chat_A / 2 pm
    chat_B / (2 Delta)); interior pairs already carry per-branch
    coefficients and only pick up the D factor that undoes the
    denominator clearing.  U-type families refer to their log-shifted
    basis (see BoundState.u*_log_shift).  At a = 0 the internal
    representation is the natural one and is returned unchanged.
    """
    if fam.a_zero:
        return tuple(complex(c) for c in chat)
    out = []
    for p in range(4):
        ex, delta = fam._exponent_info((0, 1, 2, 3)[p])
        ca, cb = chat[2 * p], chat[2 * p + 1]
        if p in (1, 2) and ex.regime is Regime.REAL_PAIR:
            # interior columns are the branches themselves
            c_plus, c_minus = complex(ca), complex(cb)
        else:
            c_plus = 0.5 * ca + cb / (2.0 * delta)
            c_minus = 0.5 * ca - cb / (2.0 * delta)
        out.append(c_plus * ex.d_plus)
        out.append(c_minus * ex.d_minus)
    return tuple(out)


@dataclass(frozen=True)
class BoundState:
    """One normalized bound state.

    coeffs holds the basis coefficients in the per-branch convention;
    the two region-3 entries (and the region-2 U entries) refer to the
    log-shifted U family, true basis values being exp(u3_log_shift)
    (resp. u2_log_shift) times larger than the stored ones.
    coeffs_symmetrized is the internal real representation that
    sample_wavefunction consumes.
    """

    m: int
    e: float
    coeffs: tuple[complex, ...]
    norm_check: float
    det_residual: float
    continuity_residual: float
    level_index: int
    params: RingParams
    u2_log_shift: float
    u3_log_shift: float
    coeffs_symmetrized: tuple[float, ...]


def solve_state(
    m: int, e_root: float, params: RingParams, level_index: int = 0
) -> BoundState:
    """Extract, phase-fix and normalize the state at a refined root.

    The null direction comes from the SVD of the column-scaled matrix;
    sigma_min/sigma_max must be below 1e-8 (consistent with the root
    tolerance).  If the second singular value is also below threshold
    the level is flagged as a near-degenerate crossing and both
    candidate vectors are attached to the error.
    """
    matrix = assemble(m, e_root, params)
    det_residual = abs(scaled_det(matrix))
    scales = matrix.column_scales
    svd_u, svd_s, svd_vt = np.linalg.svd(matrix.entries / scales)
    ratio = svd_s[-1] / svd_s[0]
    if ratio > 1e-8:
        raise SolveError(
            f"matrix not singular at e={e_root!r} (m={m}): "
            f"sigma_min/sigma_max = {ratio:.2e}"
        )
    if svd_s[-2] / svd_s[0] <= 1e-8:
        raise RankDeficiencyAmbiguousError(
            f"null space dimension > 1 at e={e_root!r} (m={m}): "
            "near-degenerate levels",
            null_vectors=(svd_vt[-1] / scales, svd_vt[-2] / scales),
        )
    chat = svd_vt[-1] / scales
    fam = matrix.families
    # fix the global sign so u (or w, if u vanishes) is positive mid-well
    r_mid = 0.5 * (params.r_i + 1.0)
    u_mid, w_mid = fam.uw_at(chat, r_mid)
    probe = u_mid if abs(u_mid) > 1e-8 * abs(w_mid) else w_mid
    if probe < 0.0:
        chat = -chat
    norm2 = _norm_integral(fam, chat)
    if not norm2 > 0.0:
        raise SolveError(f"nonpositive norm integral at e={e_root!r} (m={m})")
    chat = chat / math.sqrt(norm2)
    norm_check = _norm_integral(fam, chat)
    # continuity residual: compare one-sided (f, f', g, g') across interfaces
    left_i = fam.quantities(1, params.r_i, chat)
    right_i = fam.quantities(2, params.r_i, chat)
    left_o = fam.quantities(2, 1.0, chat)
    right_o = fam.quantities(3, 1.0, chat)
    mismatch = np.concatenate((left_i - right_i, left_o - right_o))
    scale = np.abs(np.concatenate((left_i, right_i, left_o, right_o))).max()
    continuity_residual = float(np.abs(mismatch).max() / max(scale, 1e-300))
    return BoundState(
        m=m,
        e=e_root,
        coeffs=_paper_coefficients(fam, chat),
        norm_check=norm_check,
        det_residual=det_residual,
        continuity_residual=continuity_residual,
        level_index=level_index,
        params=params,
        u2_log_shift=fam._shift[2] if fam._shift[2] is not None else 0.0,
        u3_log_shift=fam._shift[3] if fam._shift[3] is not None else 0.0,
        coeffs_symmetrized=tuple(float(c) for c in chat),
    )


def sample_wavefunction(
    state: BoundState, n_samples: int = 512
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Radial profile (r, u, w) of a solved state on [0, r_cut].

    Both interface radii land exactly on sample points so that the
    second derivative kinks there never straddle a trapezoid panel;
    the trapezoid rule on the returned density then reproduces the
    unit norm far better than 1e-6.
    """
    if n_samples < 16:
        raise ValueError(f"n_samples must be >= 16, got {n_samples}")
    fam = _Families(
        state.m,
        state.e,
        state.params,
        u2_log_shift=state.u2_log_shift,
        u3_log_shift=state.u3_log_shift,
    )
    chat = np.array(state.coeffs_symmetrized)
    cut = r_cut(state.params, state.e)
    knots = (0.0, state.params.r_i, 1.0, cut)
    # panels per segment proportional to length, at least 4 each
    lengths = np.diff(knots)
    panels = np.maximum(4, np.rint(lengths / cut * (n_samples - 1)).astype(int))
    pieces = [np.array([0.0])]
    for (lo, hi), n_seg in zip(zip(knots[:-1], knots[1:]), panels):
        pieces.append(np.linspace(lo, hi, n_seg + 1)[1:])
    r = np.concatenate(pieces)
    u = np.empty_like(r)
    w = np.empty_like(r)
    for i, ri in enumerate(r):
        u[i], w[i] = fam.uw_at(chat, ri)
    return r, u, w


def levels(
    m: int,
    params: RingParams,
    e_lo: float | None = None,
    e_hi: float | None = None,
    de: float = 0.05,
    n_levels: int | None = None,
) -> list[BoundState]:
    """Scan, refine and solve the bound states of one quantum number.

    Without an explicit window, a coarse finite-difference spectrum
    anchors it around the lowest levels (n_levels of them, default 2).
    """
    if e_lo is None or e_hi is None:
        from .oracle import suggest_window

        lo, hi = suggest_window(m, params, n_levels if n_levels else 2)
        e_lo = lo if e_lo is None else e_lo
        e_hi = hi if e_hi is None else e_hi
    brackets = scan_levels(m, params, e_lo, e_hi, de)
    roots: list[float] = []
    for bracket in brackets:
        root = refine_root(bracket, m, params)
        if not any(abs(root - r0) <= 1e-8 * (1.0 + abs(r0)) for r0 in roots):
            roots.append(root)
    roots.sort()
    if n_levels is not None:
        roots = roots[:n_levels]
    return [
        solve_state(m, root, params, level_index=i) for i, root in enumerate(roots)
    ]
