"""
Q-Series Module - twisted_vw

Truncated Puiseux series in q (or in p = 1/q) with exponents in (1/D)Z and
coefficients in a fixed cyclotomic field, plus the eta-quotient builders.

Every series records its guaranteed-valid order: coefficients at exponents
>= trunc_order are unknown and never stored. Storage is sparse (no zero
coefficients), so equality inside the valid region is structural.

Exponents are stored as integer keys k meaning k / ramification.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy import divisor_sigma

from .coefficients import CycNum, cyc_root_of_unity, embed, euler_phi
from .errors import IncompatibleSeriesError, InternalInconsistencyError, SeriesPrecisionError
from .utils import RatLike, exponent_key, parse_rat, rat_to_str
from .vw_base import LOGGER_NAME, TRACE

logger = logging.getLogger(LOGGER_NAME)

VARIABLE_Q = "q"
VARIABLE_INVERSE_Q = "1/q"
_VARIABLES = (VARIABLE_Q, VARIABLE_INVERSE_Q)

Coefficient = Union[int, Fraction, CycNum]


@dataclass(frozen=True)
class SeriesContext:
    """Shared ramification D, cyclotomic order N and truncation order T."""

    ramification: int
    cyc_order: int
    trunc_order: Fraction
    variable: str = VARIABLE_Q

    def __post_init__(self) -> None:
        if not isinstance(self.ramification, int) or self.ramification < 1:
            raise ValueError(f"ramification must be a positive integer, got {self.ramification!r}")
        euler_phi(self.cyc_order)
        if self.variable not in _VARIABLES:
            raise ValueError(f"Unknown series variable: {self.variable!r}")
        object.__setattr__(self, "trunc_order", Fraction(self.trunc_order))

    def with_trunc(self, trunc_order: RatLike) -> "SeriesContext":
        return SeriesContext(self.ramification, self.cyc_order, parse_rat(trunc_order), self.variable)


class PuiseuxSeries:
    """
    An immutable truncated series sum c_k * x^(k/D), x being q or 1/q.

    Build instances through the module functions (from_terms, eta_power, ...);
    the constructor canonicalizes its input by dropping zero coefficients and
    every exponent at or beyond the truncation order.
    """

    __slots__ = ("ramification", "cyc_order", "trunc_order", "variable", "_coeffs")

    def __init__(
        self,
        ramification: int,
        cyc_order: int,
        trunc_order: RatLike,
        coeffs: Optional[Mapping[int, CycNum]] = None,
        variable: str = VARIABLE_Q,
    ):
        SeriesContext(ramification, cyc_order, parse_rat(trunc_order), variable)
        self.ramification = ramification
        self.cyc_order = cyc_order
        self.trunc_order = parse_rat(trunc_order)
        self.variable = variable
        limit = self.trunc_order * ramification
        clean: Dict[int, CycNum] = {}
        for key, value in (coeffs or {}).items():
            if key >= limit or value.is_zero():
                continue
            if value.order != cyc_order:
                value = embed(cyc_order, value)
            clean[key] = value
        self._coeffs = dict(sorted(clean.items()))

    # -- views --------------------------------------------------------------

    @property
    def context(self) -> SeriesContext:
        return SeriesContext(self.ramification, self.cyc_order, self.trunc_order, self.variable)

    @property
    def coeffs(self) -> Dict[int, CycNum]:
        return dict(self._coeffs)

    def keys(self) -> List[int]:
        return list(self._coeffs)

    def terms(self) -> List[Tuple[Fraction, CycNum]]:
        """(exponent, coefficient) pairs in ascending exponent order."""
        return [(Fraction(k, self.ramification), c) for k, c in self._coeffs.items()]

    def valuation(self) -> Fraction:
        """Lowest stored exponent; the truncation order for an empty series."""
        if not self._coeffs:
            return self.trunc_order
        return Fraction(next(iter(self._coeffs)), self.ramification)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, exponent: RatLike) -> CycNum:
        return coefficient(self, exponent)

    # -- operators ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return add(self, other)

    def __neg__(self) -> "PuiseuxSeries":
        return scale(self, -1)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return add(self, scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return mul(self, other)
        if isinstance(other, (int, Fraction, CycNum)):
            return scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (
            self.context == other.context
            and self._coeffs == other._coeffs
        )

    __hash__ = None

    def __repr__(self) -> str:
        shown = []
        for exp, coeff in self.terms()[:6]:
            value = coeff.rational_value()
            text = rat_to_str(value) if value is not None else repr(coeff)
            shown.append(f"{text}*{self.variable}^{rat_to_str(exp)}")
        more = " + ..." if len(self._coeffs) > 6 else ""
        body = " + ".join(shown) or "0"
        return f"PuiseuxSeries({body}{more} + O({self.variable}^{rat_to_str(self.trunc_order)}))"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def from_terms(ctx: SeriesContext, terms: Mapping[RatLike, Coefficient]) -> PuiseuxSeries:
    coeffs: Dict[int, CycNum] = {}
    for exponent, value in terms.items():
        key = exponent_key(parse_rat(exponent), ctx.ramification)
        coeffs[key] = coeffs.get(key, CycNum.zero(ctx.cyc_order)) + embed(ctx.cyc_order, value)
    return PuiseuxSeries(ctx.ramification, ctx.cyc_order, ctx.trunc_order, coeffs, ctx.variable)


def zero(ctx: SeriesContext) -> PuiseuxSeries:
    return from_terms(ctx, {})


def one(ctx: SeriesContext) -> PuiseuxSeries:
    return from_terms(ctx, {0: 1})


def monomial(ctx: SeriesContext, exponent: RatLike, coeff: Coefficient = 1) -> PuiseuxSeries:
    return from_terms(ctx, {exponent: coeff})


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------


def _require_compatible(a: PuiseuxSeries, b: PuiseuxSeries) -> None:
    if a.ramification != b.ramification:
        raise IncompatibleSeriesError(
            f"ramification mismatch: {a.ramification} vs {b.ramification}"
        )
    if a.cyc_order != b.cyc_order:
        raise IncompatibleSeriesError(
            f"cyclotomic order mismatch: {a.cyc_order} vs {b.cyc_order}"
        )
    if a.variable != b.variable:
        raise IncompatibleSeriesError(
            f"series variable mismatch: {a.variable!r} vs {b.variable!r}"
        )


def add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    _require_compatible(a, b)
    coeffs = a.coeffs
    for key, value in b._coeffs.items():
        coeffs[key] = coeffs[key] + value if key in coeffs else value
    trunc = min(a.trunc_order, b.trunc_order)
    return PuiseuxSeries(a.ramification, a.cyc_order, trunc, coeffs, a.variable)


def sub(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return add(a, scale(b, -1))


def linear_combination(
    pairs: Iterable[Tuple[Coefficient, PuiseuxSeries]],
) -> PuiseuxSeries:
    """sum of c_i * f_i over a non-empty iterable of (c_i, f_i)."""
    total: Optional[PuiseuxSeries] = None
    for weight, series in pairs:
        term = scale(series, weight)
        total = term if total is None else add(total, term)
    if total is None:
        raise ValueError("linear_combination needs at least one term")
    return total


def scale(f: PuiseuxSeries, c: Coefficient) -> PuiseuxSeries:
    factor = embed(f.cyc_order, c)
    coeffs = {key: value * factor for key, value in f._coeffs.items()}
    return PuiseuxSeries(f.ramification, f.cyc_order, f.trunc_order, coeffs, f.variable)


def shift(f: PuiseuxSeries, exponent: RatLike) -> PuiseuxSeries:
    """Multiply by x^exponent; the valid region moves with it."""
    exponent = parse_rat(exponent)
    offset = exponent_key(exponent, f.ramification)
    coeffs = {key + offset: value for key, value in f._coeffs.items()}
    return PuiseuxSeries(
        f.ramification, f.cyc_order, f.trunc_order + exponent, coeffs, f.variable
    )


def truncate(f: PuiseuxSeries, trunc_order: RatLike) -> PuiseuxSeries:
    trunc_order = parse_rat(trunc_order)
    if trunc_order > f.trunc_order:
        raise SeriesPrecisionError(
            f"cannot extend a series valid below {rat_to_str(f.trunc_order)} "
            f"to {rat_to_str(trunc_order)}"
        )
    return PuiseuxSeries(f.ramification, f.cyc_order, trunc_order, f._coeffs, f.variable)


def mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    _require_compatible(a, b)
    trunc = min(a.trunc_order + b.valuation(), b.trunc_order + a.valuation())
    limit = trunc * a.ramification
    coeffs: Dict[int, CycNum] = {}
    b_items = list(b._coeffs.items())
    for ka, ca in a._coeffs.items():
        for kb, cb in b_items:
            key = ka + kb
            if key >= limit:
                break
            product = ca * cb
            coeffs[key] = coeffs[key] + product if key in coeffs else product
    logger.log(
        TRACE,
        f"mul: {len(a)} x {len(b)} terms -> {len(coeffs)} below {rat_to_str(trunc)}",
    )
    return PuiseuxSeries(a.ramification, a.cyc_order, trunc, coeffs, a.variable)


def invert(a: PuiseuxSeries) -> PuiseuxSeries:
    """Multiplicative inverse, valid up to trunc - 2 * valuation."""
    if a.is_zero():
        raise SeriesPrecisionError("cannot invert a series with no known nonzero term")
    d = a.ramification
    v_key = a.keys()[0]
    lead_inv = a._coeffs[v_key].inverse()
    # a = lead * x^v * (1 + h) with h supported on positive keys
    unit = {key - v_key: value * lead_inv for key, value in a._coeffs.items()}
    unit_limit = a.trunc_order * d - v_key
    inverse_keys: Dict[int, CycNum] = {0: CycNum.one(a.cyc_order)}
    unit_items = [(k, c) for k, c in unit.items() if k > 0]
    n = 1
    while n < unit_limit:
        total = CycNum.zero(a.cyc_order)
        for k, c in unit_items:
            if k > n:
                break
            prev = inverse_keys.get(n - k)
            if prev is not None:
                total = total - c * prev
        if not total.is_zero():
            inverse_keys[n] = total
        n += 1
    coeffs = {key - v_key: value * lead_inv for key, value in inverse_keys.items()}
    trunc = a.trunc_order - 2 * Fraction(v_key, d)
    return PuiseuxSeries(d, a.cyc_order, trunc, coeffs, a.variable)


def power(f: PuiseuxSeries, exponent: int) -> PuiseuxSeries:
    if exponent < 0:
        return power(invert(f), -exponent)
    result = one(f.context)
    base = f
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result


# ---------------------------------------------------------------------------
# coefficient access
# ---------------------------------------------------------------------------


def coefficient(f: PuiseuxSeries, exponent: RatLike) -> CycNum:
    exponent = parse_rat(exponent)
    if exponent >= f.trunc_order:
        raise SeriesPrecisionError(
            f"coefficient at {rat_to_str(exponent)} is beyond the valid order "
            f"{rat_to_str(f.trunc_order)}"
        )
    scaled = exponent * f.ramification
    if scaled.denominator != 1:
        return CycNum.zero(f.cyc_order)
    return f._coeffs.get(scaled.numerator, CycNum.zero(f.cyc_order))


def rational_coefficient(f: PuiseuxSeries, exponent: RatLike) -> Fraction:
    value = coefficient(f, exponent).rational_value()
    if value is None:
        raise InternalInconsistencyError(
            f"coefficient at {rat_to_str(parse_rat(exponent))} is not rational"
        )
    return value


def rational_terms(f: PuiseuxSeries) -> List[Tuple[Fraction, Fraction]]:
    """(exponent, rational coefficient) pairs; raises on an irrational coefficient."""
    out = []
    for exp, coeff in f.terms():
        value = coeff.rational_value()
        if value is None:
            raise InternalInconsistencyError(
                f"coefficient at {rat_to_str(exp)} did not collapse to a rational",
                discrepancy=(exp, coeff),
            )
        out.append((exp, value))
    return out


def rational_part(f: PuiseuxSeries) -> PuiseuxSeries:
    """Return f after certifying every coefficient is rational."""
    rational_terms(f)
    return f


def with_cyc_order(f: PuiseuxSeries, cyc_order: int) -> PuiseuxSeries:
    """Re-home a rational-valued series over another cyclotomic order."""
    if cyc_order == f.cyc_order:
        return f
    coeffs = {
        exponent_key(exp, f.ramification): CycNum.from_rational(cyc_order, value)
        for exp, value in rational_terms(f)
    }
    return PuiseuxSeries(f.ramification, cyc_order, f.trunc_order, coeffs, f.variable)


# ---------------------------------------------------------------------------
# substitutions
# ---------------------------------------------------------------------------


def substitute(
    f: PuiseuxSeries,
    root_power: int,
    root_order: int,
    scale_num: int,
    scale_den: int,
) -> PuiseuxSeries:
    """
    Image of f under q -> zeta_{root_order}^{root_power} * q^(scale_num/scale_den).

    A term c*q^e becomes c * zeta^(root_power*e) * q^(e*s); root_power*e must
    be an integer, and e*s must fit the ramification of f.
    """
    if scale_num <= 0 or scale_den <= 0:
        raise ValueError(f"substitution scale must be positive, got {scale_num}/{scale_den}")
    n = f.cyc_order
    if root_order != 1 and n % root_order != 0:
        raise IncompatibleSeriesError(
            f"root of unity of order {root_order} does not live in Q(zeta_{n})"
        )
    s = Fraction(scale_num, scale_den)
    d = f.ramification
    lift = n // root_order
    coeffs: Dict[int, CycNum] = {}
    for key, value in f._coeffs.items():
        exp = Fraction(key, d)
        new_exp = exp * s
        scaled = new_exp * d
        if scaled.denominator != 1:
            required = d * scaled.denominator
            raise IncompatibleSeriesError(
                f"exponent {rat_to_str(new_exp)} needs ramification {required}, "
                f"context has {d}"
            )
        zeta_exp = exp * root_power
        if zeta_exp.denominator != 1:
            raise IncompatibleSeriesError(
                f"zeta^{rat_to_str(zeta_exp)} at exponent {rat_to_str(exp)} is not well defined"
            )
        if root_order != 1 and zeta_exp.numerator % root_order:
            value = value * cyc_root_of_unity(n, zeta_exp.numerator * lift)
        coeffs[scaled.numerator] = value
    return PuiseuxSeries(d, n, f.trunc_order * s, coeffs, f.variable)


def t_transform(f: PuiseuxSeries) -> PuiseuxSeries:
    """
    tau -> tau + 1: the coefficient at exponent a/b gains exp(2 pi i a / b).

    The field must contain zeta_b for every denominator b that carries a
    nonzero coefficient. Requiring N divisible by the ramification D instead
    would reject every K3 context (D = 2r, N = r), whose G(-q^(1/r)) terms only
    ever need r-th roots; a term whose denominator does not divide N raises
    IncompatibleSeriesError.
    """
    n = f.cyc_order
    coeffs: Dict[int, CycNum] = {}
    for key, value in f._coeffs.items():
        exp = Fraction(key, f.ramification)
        if n % exp.denominator != 0:
            raise IncompatibleSeriesError(
                f"T needs a root of unity of order {exp.denominator} at exponent "
                f"{rat_to_str(exp)}, cyclotomic order is {n}"
            )
        if exp.denominator != 1:
            value = value * cyc_root_of_unity(n, exp.numerator * (n // exp.denominator))
        coeffs[key] = value
    return PuiseuxSeries(f.ramification, n, f.trunc_order, coeffs, f.variable)


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------


@dataclass
class SeriesComparison:
    equal: bool
    # First discrepant exponent and the two coefficients there (None when equal)
    exponent: Optional[Fraction] = None
    left: Optional[CycNum] = None
    right: Optional[CycNum] = None
    # Order below which the comparison was carried out
    compared_below: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.equal

    def describe(self) -> str:
        if self.equal:
            return f"equal below {rat_to_str(self.compared_below)}"
        return (
            f"first discrepancy at exponent {rat_to_str(self.exponent)}: "
            f"{_coeff_text(self.left)} != {_coeff_text(self.right)}"
        )


def _coeff_text(c: Optional[CycNum]) -> str:
    if c is None:
        return "?"
    value = c.rational_value()
    return rat_to_str(value) if value is not None else repr(c)


def series_equal(a: PuiseuxSeries, b: PuiseuxSeries) -> SeriesComparison:
    _require_compatible(a, b)
    bound = min(a.trunc_order, b.trunc_order)
    limit = bound * a.ramification
    keys = sorted(set(a._coeffs) | set(b._coeffs))
    zero_c = CycNum.zero(a.cyc_order)
    for key in keys:
        if key >= limit:
            break
        left = a._coeffs.get(key, zero_c)
        right = b._coeffs.get(key, zero_c)
        if left != right:
            return SeriesComparison(False, Fraction(key, a.ramification), left, right, bound)
    return SeriesComparison(True, compared_below=bound)


# ---------------------------------------------------------------------------
# eta quotients and Hilbert scheme Euler numbers
# ---------------------------------------------------------------------------


def eta_power(exponent: int, ctx: SeriesContext) -> PuiseuxSeries:
    """eta(q)^exponent = q^(exponent/24) * prod_{k>=1} (1 - q^k)^exponent."""
    if ctx.variable != VARIABLE_Q:
        raise IncompatibleSeriesError("eta quotients are built in the variable q")
    lead = Fraction(exponent, 24)
    if (lead * ctx.ramification).denominator != 1:
        required = (lead * ctx.ramification).denominator * ctx.ramification
        raise IncompatibleSeriesError(
            f"eta^{exponent} starts at q^{rat_to_str(lead)}, needs ramification {required}"
        )
    if ctx.trunc_order <= lead:
        raise SeriesPrecisionError(
            f"truncation order {rat_to_str(ctx.trunc_order)} leaves no term of eta^{exponent} "
            f"(lowest exponent {rat_to_str(lead)})"
        )
    count = _terms_below(ctx.trunc_order - lead)
    # n a_n = -e * sum_{k=1}^{n} sigma_1(k) a_{n-k}
    sigma = [0] + [int(divisor_sigma(k, 1)) for k in range(1, count)]
    a = [Fraction(1)] + [Fraction(0)] * (count - 1)
    for n in range(1, count):
        total = sum(sigma[k] * a[n - k] for k in range(1, n + 1))
        a[n] = Fraction(-exponent * total, n)
    terms = {lead + n: a[n] for n in range(count) if a[n]}
    return from_terms(ctx, terms)


def g_series(ctx: SeriesContext) -> PuiseuxSeries:
    """G(q) = eta(q)^-24 = q^-1 prod (1 - q^k)^-24."""
    return eta_power(-24, ctx)


def _terms_below(bound: Fraction) -> int:
    """Number of integers n >= 0 with n < bound."""
    if bound <= 0:
        return 0
    return -((-bound.numerator) // bound.denominator)


_HILBERT_LOCK = threading.Lock()
_HILBERT_EULER: List[int] = [1]


def _partition_counts(count: int) -> List[int]:
    p = [1] + [0] * (count - 1)
    for part in range(1, count):
        for n in range(part, count):
            p[n] += p[n - part]
    return p


def _truncated_product(a: List[int], b: List[int], count: int) -> List[int]:
    out = [0] * count
    for i, x in enumerate(a[:count]):
        if x == 0:
            continue
        for j in range(min(len(b), count - i)):
            out[i + j] += x * b[j]
    return out


def _hilbert_euler_numbers(count: int) -> List[int]:
    """chi(Hilb^k(K3)) for k < count, via (sum p(n) q^n)^24."""
    with _HILBERT_LOCK:
        if len(_HILBERT_EULER) >= count:
            return _HILBERT_EULER[:count]
        partitions = _partition_counts(count)
        result = [1] + [0] * (count - 1)
        base = partitions
        e = 24
        while e:
            if e & 1:
                result = _truncated_product(result, base, count)
            e >>= 1
            if e:
                base = _truncated_product(base, base, count)
        _HILBERT_EULER[:] = result
        logger.log(TRACE, f"hilbert euler numbers cached up to k={count - 1}")
        return list(result)


def hilbert_euler(k: int) -> Fraction:
    """chi(Hilb^k(S)) for a K3 surface S; zero for k < 0 (empty scheme)."""
    if k < 0:
        return Fraction(0)
    return Fraction(_hilbert_euler_numbers(k + 1)[k])


def hilbert_euler_gf(ctx: SeriesContext) -> PuiseuxSeries:
    """sum_k chi(Hilb^k) q^k = prod (1 - q^k)^-24, built without the eta recurrence."""
    if ctx.trunc_order <= 0:
        raise SeriesPrecisionError("the Hilbert scheme generating function needs trunc_order > 0")
    count = _terms_below(ctx.trunc_order)
    values = _hilbert_euler_numbers(count)
    return from_terms(ctx, {k: values[k] for k in range(count)})


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _coeff_to_json(c: CycNum):
    value = c.rational_value()
    if value is not None:
        return rat_to_str(value)
    return c.to_json()


def _coeff_from_json(raw, cyc_order: int) -> CycNum:
    if isinstance(raw, dict):
        return CycNum.from_json(raw)
    return CycNum.from_rational(cyc_order, parse_rat(raw))


def to_json(f: PuiseuxSeries) -> dict:
    return {
        "ramification": f.ramification,
        "cyc_order": f.cyc_order,
        "variable": f.variable,
        "trunc_order": rat_to_str(f.trunc_order),
        "terms": [
            {"exp": rat_to_str(exp), "coeff": _coeff_to_json(coeff)}
            for exp, coeff in f.terms()
        ],
    }


def from_json(data: dict) -> PuiseuxSeries:
    ctx = SeriesContext(
        int(data["ramification"]),
        int(data["cyc_order"]),
        parse_rat(data["trunc_order"]),
        data.get("variable", VARIABLE_Q),
    )
    terms = {
        parse_rat(term["exp"]): _coeff_from_json(term["coeff"], ctx.cyc_order)
        for term in data.get("terms", [])
    }
    return from_terms(ctx, terms)


def csv_rows(f: PuiseuxSeries) -> List[Tuple[str, str]]:
    try:
        pairs = rational_terms(f)
    except InternalInconsistencyError as e:
        raise IncompatibleSeriesError(f"CSV output needs rational coefficients: {e}") from e
    return [(rat_to_str(exp), rat_to_str(value)) for exp, value in pairs]
