"""Closed-form radial basis functions for the three ring regions.

After separating the angular dependence (spin-up component carries
exp(i m phi), spin-down exp(i (m+1) phi)) and substituting

    u(r) = exp(-b r^2 / 2) (sqrt(b) r)^{|m|}   f(xi),
    w(r) = exp(-b r^2 / 2) (sqrt(b) r)^{|m+1|} (a / 2 sqrt(b)) g(xi),

with xi = b r^2, the coupled radial system reduces in each
constant-potential region to confluent hypergeometric form.  The f/g
pairs close under two exponent values k^+ and k^- per region:

    k^pm = (E + a^2/2 pm sqrt(a^2 (E + a^2/4) + 16 b^2 (s-1/2)^2)) / 4b,

where E = e - v in the inner disk and outer barrier and E = e inside
the well.  Regularity selects Kummer M solutions in the disk (region
1), decay selects Tricomi U in the barrier (region 3), and the well
(region 2) keeps both an M-type and a U-type pair.  The g members
carry a denominator D^pm = -k^pm + E/4b + s - 1/2 that can pass
through zero as e varies; callers must sidestep such energies (see
DegenerateDenominatorError).

For e < v the square root argument is negative and k^- = conj(k^+);
the basis values then come in conjugate pairs and all evaluation stays
complex end to end.  Barrier-region U values underflow double
precision deep in the tail, so region-3 (and the well's U family)
carry an explicit log_scale: true value = stored value * exp(log_scale).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from . import specfun
from .model import RingParams

__all__ = [
    "BasisEval",
    "DegenerateDenominatorError",
    "Exponents",
    "Regime",
    "assemble_uw",
    "exponents",
    "r_cut",
    "region1_basis",
    "region2_basis",
    "region3_basis",
]


class Regime(Enum):
    REAL_PAIR = "real_pair"
    CONJUGATE_PAIR = "conjugate_pair"


class DegenerateDenominatorError(ArithmeticError):
    """A basis denominator D^pm is numerically zero at this energy.

    The zero is a parametrization artifact of the g-member formulas,
    not a physical degeneracy; energy scans shift the evaluation point
    by 1e-9 * (1 + |e|) and retry.
    """


@dataclass(frozen=True)
class Exponents:
    """Exponent pair of one region, with denominators and classification."""

    k_plus: complex
    k_minus: complex
    d_plus: complex
    d_minus: complex
    discriminant: float
    regime: Regime


def exponents(e_shift_base: float, params: RingParams) -> Exponents:
    """Exponents k^pm for a region with local energy shift e_shift_base.

    e_shift_base is e - v for the inner disk and the outer barrier, e
    for the well.  The square-root argument is organized so the a -> 0
    limit is finite: disc = a^2 (E + a^2/4) + 16 b^2 (s - 1/2)^2.
    """
    a, b, s = params.a, params.b, params.s
    e_sh = e_shift_base
    disc = a * a * (e_sh + 0.25 * a * a) + 16.0 * b * b * (s - 0.5) ** 2
    if disc >= 0.0:
        root: complex = complex(math.sqrt(disc))
        regime = Regime.REAL_PAIR
    else:
        root = complex(0.0, math.sqrt(-disc))
        regime = Regime.CONJUGATE_PAIR
    quarter_b = 1.0 / (4.0 * b)
    k_plus = (e_sh + 0.5 * a * a + root) * quarter_b
    d0 = s - 0.5 - a * a / (8.0 * b)
    d_plus = d0 - root * quarter_b
    if regime is Regime.CONJUGATE_PAIR:
        k_minus = k_plus.conjugate()
        d_minus = d_plus.conjugate()
    else:
        k_minus = (e_sh + 0.5 * a * a - root) * quarter_b
        d_minus = d0 + root * quarter_b
    return Exponents(k_plus, k_minus, d_plus, d_minus, disc, regime)


@dataclass(frozen=True)
class BasisEval:
    """f/g basis values and r-derivatives of one region family at one r.

    In the ConjugatePair regime the minus members are exact conjugates
    of the plus members.  True values are the stored ones times
    exp(log_scale); log_scale is 0 except for U-type families deep in
    scaling territory.
    """

    f_plus: complex
    f_minus: complex
    df_plus: complex
    df_minus: complex
    g_plus: complex
    g_minus: complex
    dg_plus: complex
    dg_minus: complex
    log_scale: float = 0.0


def _pair_arguments(m: int, k: complex) -> tuple[complex, int, complex, int, complex]:
    """(alpha_f, beta_f, alpha_g, beta_g, g_prefactor_for_M_type).

    The two angular branches use different parameter maps; the g
    prefactor applies to the M-type family only (the U-type g members
    carry none).
    """
    if m >= 0:
        return m + 1 - k, m + 1, m + 1 - k, m + 2, k / (m + 1)
    return 1 - k, 1 - m, -k, -m, complex(m)


def _check_denominators(ex: Exponents, e: float) -> None:
    for k, d in ((ex.k_plus, ex.d_plus), (ex.k_minus, ex.d_minus)):
        if abs(d) < 1e-10 * max(1.0, abs(k)):
            raise DegenerateDenominatorError(
                f"basis denominator D={d:.3e} degenerate at e={e!r}; "
                "shift the evaluation energy"
            )


def _m_quadruple(m: int, k: complex, xi: float, dxi_dr: float):
    """M-type (f, df/dr, G, dG/dr) with the g denominator cleared.

    G is the g member times its denominator D; dividing by D recovers
    the literature normalization.  The matching module works with the
    cleared form directly, which is finite through D = 0.
    """
    af, bf, ag, bg, pref = _pair_arguments(m, k)
    f = specfun.kummer_m(af, bf, xi)
    df = af / bf * specfun.kummer_m(af + 1, bf + 1, xi) * dxi_dr
    g = pref * specfun.kummer_m(ag, bg, xi)
    dg = pref * ag / bg * specfun.kummer_m(ag + 1, bg + 1, xi) * dxi_dr
    return f, df, g, dg


def _u_quadruple(m: int, k: complex, xi: float, dxi_dr: float):
    """U-type cleared quadruple as (mantissa, log) pairs."""
    af, bf, ag, bg, _ = _pair_arguments(m, k)
    f = specfun.tricomi_u_scaled(af, bf, xi)
    mdf, ldf = specfun.tricomi_u_scaled(af + 1, bf + 1, xi)
    df = (-af * mdf * dxi_dr, ldf)
    g = specfun.tricomi_u_scaled(ag, bg, xi)
    mdg, ldg = specfun.tricomi_u_scaled(ag + 1, bg + 1, xi)
    dg = (-ag * mdg * dxi_dr, ldg)
    return f, df, g, dg


def _m_family(m: int, k: complex, d: complex, xi: float, dxi_dr: float):
    """Raw M-type (f, df/dr, g, dg/dr) at one exponent."""
    f, df, g, dg = _m_quadruple(m, k, xi, dxi_dr)
    return f, df, g / d, dg / d


def _u_family(m: int, k: complex, d: complex, xi: float, dxi_dr: float):
    """Raw U-type values as (mantissa, log) pairs: (f, df/dr, g, dg/dr)."""
    f, df, (mg, lg), (mdg, ldg) = _u_quadruple(m, k, xi, dxi_dr)
    return f, df, (mg / d, lg), (mdg / d, ldg)


def _combine_scaled(plus, minus, log_shift: float | None) -> BasisEval:
    """Merge scaled plus/minus quadruples onto one common log scale."""
    vals = list(plus) + list(minus)
    if log_shift is None:
        log_shift = max(l for _, l in vals)
    out = [mant * math.exp(l - log_shift) if l - log_shift > -745.0 else 0.0j
           for mant, l in vals]
    return BasisEval(
        f_plus=out[0], df_plus=out[1], g_plus=out[2], dg_plus=out[3],
        f_minus=out[4], df_minus=out[5], g_minus=out[6], dg_minus=out[7],
        log_scale=log_shift,
    )


def _conj_quadruple(q):
    return tuple(x.conjugate() for x in q)


def region1_basis(m: int, e: float, params: RingParams, r: float) -> BasisEval:
    """Regular M-type basis of the inner disk (0 < r <= r_i), E = e - v."""
    ex = exponents(e - params.v, params)
    _check_denominators(ex, e)
    xi = params.b * r * r
    dxi = 2.0 * params.b * r
    fp, dfp, gp, dgp = _m_family(m, ex.k_plus, ex.d_plus, xi, dxi)
    if ex.regime is Regime.CONJUGATE_PAIR:
        fm, dfm, gm, dgm = _conj_quadruple((fp, dfp, gp, dgp))
    else:
        fm, dfm, gm, dgm = _m_family(m, ex.k_minus, ex.d_minus, xi, dxi)
    return BasisEval(fp, fm, dfp, dfm, gp, gm, dgp, dgm)


def region2_basis(
    m: int,
    e: float,
    params: RingParams,
    r: float,
    u_log_shift: float | None = None,
) -> tuple[BasisEval, BasisEval]:
    """Both well bases (r_i <= r <= 1), E = e: (M-type, U-type).

    The U-type member is scale-managed; pass the log_scale of a prior
    evaluation as u_log_shift to keep one consistent family scale
    across radii (required when combining values at different r).
    """
    ex = exponents(e, params)
    _check_denominators(ex, e)
    xi = params.b * r * r
    dxi = 2.0 * params.b * r
    mp = _m_family(m, ex.k_plus, ex.d_plus, xi, dxi)
    up = _u_family(m, ex.k_plus, ex.d_plus, xi, dxi)
    if ex.regime is Regime.CONJUGATE_PAIR:
        mm = _conj_quadruple(mp)
        um = tuple((mant.conjugate(), l) for mant, l in up)
    else:
        mm = _m_family(m, ex.k_minus, ex.d_minus, xi, dxi)
        um = _u_family(m, ex.k_minus, ex.d_minus, xi, dxi)
    basis_m = BasisEval(
        f_plus=mp[0], df_plus=mp[1], g_plus=mp[2], dg_plus=mp[3],
        f_minus=mm[0], df_minus=mm[1], g_minus=mm[2], dg_minus=mm[3],
    )
    basis_u = _combine_scaled(up, um, u_log_shift)
    return basis_m, basis_u


def region3_basis(
    m: int,
    e: float,
    params: RingParams,
    r: float,
    log_shift: float | None = None,
) -> BasisEval:
    """Decaying U-type basis of the outer barrier (r >= 1), E = e - v.

    With log_shift omitted the evaluation self-normalizes and reports
    the shift in BasisEval.log_scale; reuse that shift for every other
    radius of the same state so the family stays one global function.
    """
    ex = exponents(e - params.v, params)
    _check_denominators(ex, e)
    xi = params.b * r * r
    dxi = 2.0 * params.b * r
    up = _u_family(m, ex.k_plus, ex.d_plus, xi, dxi)
    if ex.regime is Regime.CONJUGATE_PAIR:
        um = tuple((mant.conjugate(), l) for mant, l in up)
    else:
        um = _u_family(m, ex.k_minus, ex.d_minus, xi, dxi)
    return _combine_scaled(up, um, log_shift)


def assemble_uw(
    m: int, params: RingParams, f: complex, g: complex, r: float
) -> tuple[complex, complex]:
    """Map basis combinations (f, g) at r to the radial components (u, w).

    u = exp(-b r^2/2) (sqrt(b) r)^{|m|} f,
    w = exp(-b r^2/2) (sqrt(b) r)^{|m+1|} g.

    The coupled-problem convention puts an additional constant
    a / (2 sqrt(b)) on the spin-down combination; include it in g when
    reconstructing a physical spinor (it cancels identically in the
    continuity system, which is why the matching matrix omits it).
    """
    b = params.b
    env = math.exp(-0.5 * b * r * r)
    sq = math.sqrt(b) * r
    u = env * sq ** abs(m) * f
    w = env * sq ** abs(m + 1) * g
    return u, w


def r_cut(params: RingParams, e: float) -> float:
    """Truncation radius beyond which the barrier tail is negligible."""
    if e >= params.v:
        return 6.0
    return min(6.0, max(1.5, 1.0 + 8.0 / math.sqrt(params.v - e)))
