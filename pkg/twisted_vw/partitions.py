"""
Partitions Module - twisted_vw

Builders for every closed-form partition function:

- rank 2 vector bundles on P^2 and on the gerbe P(2,2,2) (Hurwitz class
  number series, built in the variable p = 1/q because they are infinite
  towards negative q-exponents)
- K3 series per gerbe type (trivial, essentially trivial, optimal), the
  SU(r) and SU(r)/Z_r aggregates and the complex-structure free Z'
- tables of twisted invariants and the table <-> series round trip

Every K3 builder returns a series valid strictly below `prec`, with
coefficients certified rational.
"""

import logging
from fractions import Fraction
from typing import Dict, Optional

from sympy import divisors

from . import qseries
from .arithmetics import (
    HALF_RANK,
    K3_RANK,
    gauss_sum_value,
    hurwitz_class_number,
    k3_class_census_bruteforce,
    sigma0,
)
from .errors import InternalInconsistencyError, SeriesPrecisionError
from .qseries import PuiseuxSeries, SeriesContext
from .surface_kind import C1Parity, DetTag
from .utils import RatLike, parse_rat, rat_to_str, require_picard, require_prime_rank
from .vw_base import LOGGER_NAME
from .vw_table import PROVISIONAL, THEOREM, VWTable

logger = logging.getLogger(LOGGER_NAME)

DEFAULT_PRECISION = Fraction(12)

# P^2 series: quarter exponents, rational coefficients, variable p = 1/q
P2_RAMIFICATION = 4


def _require_precision(prec: RatLike) -> Fraction:
    prec = parse_rat(prec)
    if prec <= 0:
        raise SeriesPrecisionError(f"precision must be positive, got {rat_to_str(prec)}")
    return prec


# ---------------------------------------------------------------------------
# contexts and substituted G-series
# ---------------------------------------------------------------------------


def k3_context(r: int, prec: RatLike) -> SeriesContext:
    """D = 2r, cyclotomic order r."""
    require_prime_rank(r)
    return SeriesContext(2 * r, r, _require_precision(prec))


def p2_context(prec: RatLike) -> SeriesContext:
    return SeriesContext(P2_RAMIFICATION, 1, _require_precision(prec), qseries.VARIABLE_INVERSE_Q)


def g_at(
    ctx: SeriesContext,
    root_power: int,
    root_order: int,
    scale: RatLike,
    valid_below: RatLike,
) -> PuiseuxSeries:
    """G(zeta_{root_order}^{root_power} q^scale), valid at least below `valid_below`."""
    scale = parse_rat(scale)
    needed = parse_rat(valid_below) / scale
    base = qseries.g_series(ctx.with_trunc(max(needed, Fraction(0))))
    return qseries.substitute(base, root_power, root_order, scale.numerator, scale.denominator)


def dressed_g(ctx: SeriesContext, r: int, root_power: int, root_order: int, scale: RatLike) -> PuiseuxSeries:
    """q^r * G(zeta^power q^scale), valid below ctx.trunc_order."""
    series = g_at(ctx, root_power, root_order, scale, ctx.trunc_order - r)
    return qseries.shift(series, r)


def _finish(series: PuiseuxSeries, prec: Fraction) -> PuiseuxSeries:
    return qseries.rational_part(qseries.truncate(series, prec))


# ---------------------------------------------------------------------------
# K3: per gerbe type
# ---------------------------------------------------------------------------


def z_ess_trivial(r: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """(1/r) q^r sum_j G(zeta_r^j q^(1/r)): essentially trivial gerbes."""
    ctx = k3_context(r, prec)
    total = qseries.linear_combination(
        (Fraction(1, r), dressed_g(ctx, r, j, r, Fraction(1, r))) for j in range(r)
    )
    return _finish(total, ctx.trunc_order)


def z_optimal_twisted_sign(r: int, m: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """(1/r) q^r G(zeta_r^m q^(1/r)); m = 0 is the untwisted optimal series."""
    ctx = k3_context(r, prec)
    if not 0 <= m < r:
        raise ValueError(f"twist m must lie in 0..{r - 1}, got {m}")
    series = qseries.scale(dressed_g(ctx, r, m, r, Fraction(1, r)), Fraction(1, r))
    series = qseries.truncate(series, ctx.trunc_order)
    if m == 0 or r == 2:
        return qseries.rational_part(series)
    return series


def z_optimal(r: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    return z_optimal_twisted_sign(r, 0, prec)


def z_k3_trivial_gerbe(r: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """sum_{d | r} (d / r^2) q^r sum_{j < d} G(zeta_d^j q^(r/d^2))."""
    ctx = k3_context(r, prec)
    pieces = []
    for d in divisors(r):
        d = int(d)
        scale = Fraction(r, d * d)
        for j in range(d):
            pieces.append((Fraction(d, r * r), dressed_g(ctx, r, j, d, scale)))
    return _finish(qseries.linear_combination(pieces), ctx.trunc_order)


def _surzr_closed_form(ctx: SeriesContext, r: int, picard: int) -> PuiseuxSeries:
    pieces = [
        (Fraction(1, r * r), dressed_g(ctx, r, 0, 1, r)),
        (r ** (K3_RANK - 1), dressed_g(ctx, r, 0, r, Fraction(1, r))),
    ]
    twisted_weight = Fraction(r) ** (picard - 1)
    pieces += [
        (twisted_weight, dressed_g(ctx, r, j, r, Fraction(1, r))) for j in range(1, r)
    ]
    return qseries.linear_combination(pieces)


def z_k3_surzr(r: int, rho: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """
    SU(r)/Z_r partition function of a K3 with Picard number rho.

    The closed form and the sum over gerbe types
    Z_trivial + (r^rho - 1) Z_ess + (r^22 - r^rho) Z_opt are both computed
    and must agree; the closed form is returned.
    """
    require_picard(rho)
    ctx = k3_context(r, prec)
    closed = _finish(_surzr_closed_form(ctx, r, rho), ctx.trunc_order)
    gerbe_sum = qseries.linear_combination([
        (1, z_k3_trivial_gerbe(r, ctx.trunc_order)),
        (r ** rho - 1, z_ess_trivial(r, ctx.trunc_order)),
        (r ** K3_RANK - r ** rho, z_optimal(r, ctx.trunc_order)),
    ])
    comparison = qseries.series_equal(closed, gerbe_sum)
    if not comparison:
        raise InternalInconsistencyError(
            f"gerbe sum and closed form disagree for r={r}, rho={rho}: {comparison.describe()}",
            discrepancy=comparison,
        )
    return closed


def picard_difference(r: int, rho: int, base_rho: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """
    Z(r, rho) - Z(r, base_rho) in closed form:
    (r^(rho-1) - r^(base_rho-1)) q^r sum_{j=1}^{r-1} G(zeta_r^j q^(1/r)).

    For r = 2 this is (2^(rho-1) - 2^(base_rho-1)) q^2 G(-q^(1/2)).
    """
    require_prime_rank(r)
    require_picard(rho)
    require_picard(base_rho)
    ctx = k3_context(r, prec)
    weight = Fraction(r) ** (rho - 1) - Fraction(r) ** (base_rho - 1)
    twisted = qseries.linear_combination(
        (1, dressed_g(ctx, r, j, r, Fraction(1, r))) for j in range(1, r)
    )
    return _finish(qseries.scale(twisted, weight), ctx.trunc_order)


def z_k3_vw_prediction(prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """1/4 q^2 G(q^2) + q^2 (2^21 G(q^(1/2)) + 2^10 G(-q^(1/2)))."""
    ctx = k3_context(2, prec)
    half = Fraction(1, 2)
    return _finish(
        qseries.linear_combination([
            (Fraction(1, 4), dressed_g(ctx, 2, 0, 1, 2)),
            (2 ** 21, dressed_g(ctx, 2, 0, 2, half)),
            (2 ** 10, dressed_g(ctx, 2, 1, 2, half)),
        ]),
        ctx.trunc_order,
    )


def complex_structure_free_closed_form(r: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """(1/r^2) q^r G(q^r) + q^r (r^21 G(q^(1/r)) + r^10 sum_{m>=1} G(zeta^m q^(1/r)))."""
    ctx = k3_context(r, prec)
    pieces = [
        (Fraction(1, r * r), dressed_g(ctx, r, 0, 1, r)),
        (r ** (K3_RANK - 1), dressed_g(ctx, r, 0, r, Fraction(1, r))),
    ]
    pieces += [
        (r ** (HALF_RANK - 1), dressed_g(ctx, r, m, r, Fraction(1, r))) for m in range(1, r)
    ]
    return _finish(qseries.linear_combination(pieces), ctx.trunc_order)


def z_k3_complex_structure_free(r: int, prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """
    Z' summed over every class g in H^2(K3, Z/r), independent of the Picard
    number. Rank 2 goes through the even/odd class census; odd ranks weight
    each twist m by the Gauss sum minus the zero class.
    """
    ctx = k3_context(r, prec)
    prec = ctx.trunc_order
    if r == 2:
        _, n_even, n_odd = k3_class_census_bruteforce()
        assembled = qseries.linear_combination([
            (1, z_k3_trivial_gerbe(2, prec)),
            (n_even, z_even(prec)),
            (n_odd, z_odd(prec)),
        ])
    else:
        pieces = [(1, z_k3_trivial_gerbe(r, prec)), (r ** K3_RANK - 1, z_optimal(r, prec))]
        for m in range(1, r):
            weight = gauss_sum_value(m, r) - 1
            pieces.append((weight, z_optimal_twisted_sign(r, m, prec)))
        assembled = qseries.linear_combination(pieces)
    assembled = qseries.rational_part(assembled)
    closed = complex_structure_free_closed_form(r, prec)
    comparison = qseries.series_equal(assembled, closed)
    if not comparison:
        raise InternalInconsistencyError(
            f"class sum and closed form of Z' disagree for r={r}: {comparison.describe()}",
            discrepancy=comparison,
        )
    return closed


# ---------------------------------------------------------------------------
# K3 rank 2: even / odd classes
# ---------------------------------------------------------------------------


def z_even(prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """1/2 q^2 (G(q^(1/2)) + G(-q^(1/2)))."""
    return qseries.add(z_optimal(2, prec), z_optimal_twisted_sign(2, 1, prec))


def z_odd(prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """1/2 q^2 (G(q^(1/2)) - G(-q^(1/2)))."""
    return qseries.sub(z_optimal(2, prec), z_optimal_twisted_sign(2, 1, prec))


def z_even_prime(prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """Z0 + (2^10 - 1) Z_ess - 2^10 Z_odd."""
    return qseries.linear_combination([
        (1, z_k3_trivial_gerbe(2, prec)),
        (2 ** 10 - 1, z_ess_trivial(2, prec)),
        (-(2 ** 10), z_odd(prec)),
    ])


def z_odd_prime(prec: RatLike = DEFAULT_PRECISION) -> PuiseuxSeries:
    """Z0 + (-2^10 - 1) Z_ess + 2^10 Z_odd."""
    return qseries.linear_combination([
        (1, z_k3_trivial_gerbe(2, prec)),
        (-(2 ** 10) - 1, z_ess_trivial(2, prec)),
        (2 ** 10, z_odd(prec)),
    ])


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def vw_essentially_trivial(r: int, c2_max: int, as_stated: bool = False) -> VWTable:
    """
    Twisted invariants of an essentially trivial gerbe with determinant L, for
    0 <= c2 <= c2_max.

    Rank 2: vw(2k) = chi(Hilb^(4k-3)), vw(2k+1) = chi(Hilb^(4k-1)).

    Odd rank: rows with c2 = 0 or r-1 mod r are read off the series
    (1/r) q^r sum_j G(zeta_r^j q^(1/r)), whose coefficient at q^c2 is
    chi(Hilb^(r(c2-r)+1)). At c2 = rk this is chi(Hilb^(r^2 k - (r^2-1))); at
    c2 = rk + r-1 it is chi(Hilb^(r^2 k - r + 1)), not the r^2 k - 1 listed with
    the residue formulas (the two agree only for r = 2). With `as_stated` the
    middle residues are added as provisional rows: residue 1 by the listed
    chi(Hilb^(r^2 k - (r^2 - r))), residues 2..r-2, which the list elides, by
    the series coefficient.
    """
    require_prime_rank(r)
    if c2_max < 0:
        raise ValueError(f"c2_max must be non-negative, got {c2_max}")
    table = VWTable(rank=r, det_tag=DetTag.GERBE_LINE_BUNDLE)
    for c2 in range(c2_max + 1):
        if r == 2:
            k, residue = divmod(c2, 2)
            index = 4 * k - 3 if residue == 0 else 4 * k - 1
            table.add_row(c2, qseries.hilbert_euler(index))
            continue
        residue = c2 % r
        if residue in (0, r - 1):
            table.add_row(c2, qseries.hilbert_euler(r * (c2 - r) + 1))
        elif as_stated:
            if residue == 1:
                k = (c2 - 1) // r
                index = r * r * k - (r * r - r)
            else:
                index = r * (c2 - r) + 1
            table.add_row(c2, qseries.hilbert_euler(index), provenance=PROVISIONAL)
    return table


def vw_optimal_table(r: int, c2_max: RatLike) -> VWTable:
    """Optimal gerbes: c2 = k/r + (r^2 - 1)/r carries chi(Hilb^k) / r."""
    require_prime_rank(r)
    c2_max = parse_rat(c2_max)
    table = VWTable(rank=r, det_tag=DetTag.TRIVIAL, fractional_c2=True)
    k = 0
    while True:
        c2 = Fraction(k, r) + Fraction(r * r - 1, r)
        if c2 > c2_max:
            break
        table.add_row(c2, qseries.hilbert_euler(k) / r)
        k += 1
    return table


def table_from_series(
    series: PuiseuxSeries,
    rank: int,
    det_tag: DetTag,
    fractional_c2: bool = False,
) -> VWTable:
    table = VWTable(rank=rank, det_tag=det_tag, fractional_c2=fractional_c2)
    for exp, value in qseries.rational_terms(series):
        table.add_row(exp, value)
    return table


def series_from_table(table: VWTable, ctx: SeriesContext, include_provisional: bool = False) -> PuiseuxSeries:
    terms: Dict[Fraction, Fraction] = {}
    for row in table.rows:
        if row.provenance != THEOREM and not include_provisional:
            continue
        terms[row.c2] = row.value
    return qseries.from_terms(ctx, terms)


# ---------------------------------------------------------------------------
# P^2 and P(2,2,2)
# ---------------------------------------------------------------------------


def _hurwitz_series(odd: bool, prefactor: Fraction, prec: RatLike, drop_divisor_term: bool) -> PuiseuxSeries:
    """
    q^prefactor * sum_{n>=1} 3 H(4n-1) q^(1/4 - n)              (odd)
    q^prefactor * sum_{n>=1} 3 (H(4n) - sigma_0(n)/2) q^(-n)     (even)
    written in p = 1/q and kept below p^prec.
    """
    ctx = p2_context(prec)
    offset = prefactor + (Fraction(1, 4) if odd else 0)
    terms: Dict[Fraction, Fraction] = {}
    n = 1
    while n - offset < ctx.trunc_order:
        if odd:
            value = 3 * hurwitz_class_number(4 * n - 1)
        else:
            value = hurwitz_class_number(4 * n)
            if not drop_divisor_term:
                value -= Fraction(sigma0(n), 2)
            value *= 3
        if value:
            terms[n - offset] = value
        n += 1
    return qseries.from_terms(ctx, terms)


def p2_prefactor(c1: int) -> Fraction:
    return Fraction(c1 * c1, 4) + Fraction(3 * c1, 2) + 2


def z_vb_p2(
    c1_parity: C1Parity,
    prec: RatLike = DEFAULT_PRECISION,
    c1: Optional[int] = None,
    drop_divisor_term: bool = False,
) -> PuiseuxSeries:
    """Rank 2 vector bundles on P^2; c1 defaults to the representative 0 or 1."""
    if c1 is None:
        c1 = c1_parity.representative()
    elif c1 % 2 != c1_parity.representative():
        raise ValueError(f"c1 = {c1} does not have parity {c1_parity}")
    return _hurwitz_series(
        c1_parity is C1Parity.ODD, p2_prefactor(c1), prec, drop_divisor_term
    )


def z_vb_p222(
    c1_mod4: int,
    lam: int,
    prec: RatLike = DEFAULT_PRECISION,
    drop_divisor_term: bool = False,
) -> PuiseuxSeries:
    """Rank 2 vector bundles on P(2,2,2); lam indexes the inertia component."""
    if c1_mod4 not in (0, 2):
        raise ValueError(f"c1 on P(2,2,2) is even: c1 mod 4 must be 0 or 2, got {c1_mod4}")
    if lam not in (0, 1):
        raise ValueError(f"inertia component must be 0 or 1, got {lam}")
    if lam == 0:
        prefactor = Fraction(c1_mod4 * c1_mod4, 16) + Fraction(3 * c1_mod4, 4) + 2
        odd = c1_mod4 == 2
    else:
        half = Fraction(c1_mod4, 2) + 1
        prefactor = half * half / 4 + Fraction(3, 2) * half + 2
        odd = c1_mod4 == 0
    return _hurwitz_series(odd, prefactor, prec, drop_divisor_term)


def z_su2_p2(c1: int, prec: RatLike = DEFAULT_PRECISION, drop_divisor_term: bool = True) -> PuiseuxSeries:
    """Z_0(SU(2)) = q^-2 Z_0^vb and Z_1(SU(2)) = q^(-15/4) Z_1^vb."""
    prec = _require_precision(prec)
    if c1 == 0:
        series = z_vb_p2(C1Parity.EVEN, prec, drop_divisor_term=drop_divisor_term)
        return qseries.truncate(qseries.shift(series, 2), prec)
    if c1 == 1:
        series = z_vb_p2(C1Parity.ODD, prec)
        return qseries.truncate(qseries.shift(series, Fraction(15, 4)), prec)
    raise ValueError(f"c1 must be 0 or 1, got {c1}")


def z_su2z2_p2(c1: int, prec: RatLike = DEFAULT_PRECISION, drop_divisor_term: bool = True) -> PuiseuxSeries:
    """
    1/2 (q^-2 Z_{0,0} + q^(-15/4) Z_{0,1})     for c1 = 0
    1/2 (q^-6 Z_{2,1} - q^(-15/4) Z_{2,0})     for c1 = 1
    """
    prec = _require_precision(prec)
    quarter = Fraction(15, 4)
    if c1 == 0:
        first = qseries.shift(z_vb_p222(0, 0, prec, drop_divisor_term), 2)
        second = qseries.shift(z_vb_p222(0, 1, prec), quarter)
        sign = 1
    elif c1 == 1:
        first = qseries.shift(z_vb_p222(2, 1, prec, drop_divisor_term), 6)
        second = qseries.shift(z_vb_p222(2, 0, prec), quarter)
        sign = -1
    else:
        raise ValueError(f"c1 must be 0 or 1, got {c1}")
    combined = qseries.linear_combination([(Fraction(1, 2), first), (Fraction(sign, 2), second)])
    return qseries.truncate(combined, prec)


def f0_holomorphic(prec: RatLike, variable: str = qseries.VARIABLE_Q) -> PuiseuxSeries:
    """sum_{n>=1} 3 H(4n) x^n (the n = 0 term needs H(0), which is not adopted)."""
    ctx = SeriesContext(P2_RAMIFICATION, 1, _require_precision(prec), variable)
    terms = {}
    n = 1
    while n < ctx.trunc_order:
        terms[n] = 3 * hurwitz_class_number(4 * n)
        n += 1
    return qseries.from_terms(ctx, terms)


def f1_holomorphic(prec: RatLike, variable: str = qseries.VARIABLE_Q) -> PuiseuxSeries:
    """sum_{n>=1} 3 H(4n-1) x^(n - 1/4)."""
    ctx = SeriesContext(P2_RAMIFICATION, 1, _require_precision(prec), variable)
    terms = {}
    n = 1
    while n - Fraction(1, 4) < ctx.trunc_order:
        terms[n - Fraction(1, 4)] = 3 * hurwitz_class_number(4 * n - 1)
        n += 1
    return qseries.from_terms(ctx, terms)

