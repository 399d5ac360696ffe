import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Tuple

from . import arithmetics, partitions, qseries, sduality
from .check_report import CheckResult, all_passed, failed, passed
from .coefficients import CycNum, euler_phi
from .qseries import PuiseuxSeries, SeriesContext
from .utils import rat_to_str
from .vw_base import VWBase

PROPERTY_CASES = 1000
PROPERTY_SEED = 20240601
HURWITZ_ORACLE_LIMIT = 200
GERBE_SUM_PICARDS = (0, 1, 11, 20, 22)


def corrupted_k3_rules() -> Tuple[sduality.STransformRule, ...]:
    """K3 rules with the G(q^2) scalar halved, for exercising the failure path."""
    return tuple(
        sduality.STransformRule(rule.source, rule.scalar * Fraction(1, 2), rule.weight_shift, rule.target)
        if rule.source == sduality.G_Q2
        else rule
        for rule in sduality.K3_S_RULES
    )


def random_series(rng: random.Random, ctx: SeriesContext, terms: int = 6) -> PuiseuxSeries:
    """A sparse series with small rational (or cyclotomic) coefficients."""
    low = -ctx.ramification
    high = int(ctx.trunc_order * ctx.ramification)
    coeffs = {}
    for _ in range(terms):
        key = rng.randrange(low, high)
        coords = tuple(
            Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            for _ in range(euler_phi(ctx.cyc_order))
        )
        coeffs[key] = CycNum(ctx.cyc_order, coords)
    return PuiseuxSeries(ctx.ramification, ctx.cyc_order, ctx.trunc_order, coeffs, ctx.variable)


class VerificationCheck(VWBase):
    def __init__(self, check_id: str, func: Callable[[], CheckResult]) -> None:
        super().__init__()
        self.check_id = check_id
        self._func = func

    def run(self) -> CheckResult:
        self._debug_log("starting")
        try:
            result = self._func()
        except Exception as e:
            self.logger.exception(f"check '{self.check_id}' raised")
            return failed(self.check_id, f"{type(e).__name__}: {e}")
        if not isinstance(result, CheckResult):
            result = passed(self.check_id, "ok") if result else failed(self.check_id, "returned false")
        self._trace_log(f"finished: {result.status}")
        return result


class VerificationAgent(VWBase):
    """
    Runs every consistency check of the package and reports them in
    declaration order, optionally on a thread pool.
    """

    def __init__(
        self,
        precision=partitions.DEFAULT_PRECISION,
        picard: int = 11,
        workers: Optional[int] = None,
        k3_rules: Optional[Iterable[sduality.STransformRule]] = None,
        full_lattice_enumeration: bool = False,
        odd_rank: int = 3,
        property_cases: int = PROPERTY_CASES,
    ) -> None:
        super().__init__()
        self.precision = Fraction(precision)
        self.picard = picard
        self.workers = workers
        self.k3_rules = tuple(k3_rules) if k3_rules is not None else None
        self.full_lattice_enumeration = full_lattice_enumeration
        self.odd_rank = odd_rank
        self.property_cases = property_cases
        self.checks: List[VerificationCheck] = self._declare_checks()

    def _declare_checks(self) -> List[VerificationCheck]:
        prec = self.precision
        odd_prec = min(prec, Fraction(9))
        picards = sorted(set(GERBE_SUM_PICARDS) | {self.picard})
        declared = [
            ("series_ring_laws", self.check_ring_laws),
            ("eta_cross_checks", self.check_eta),
            ("cyclotomic_collapse_r2", lambda: sduality.verify_cyclotomic_collapse(2, prec)),
            (
                f"cyclotomic_collapse_r{self.odd_rank}",
                lambda: sduality.verify_cyclotomic_collapse(self.odd_rank, odd_prec),
            ),
        ]
        declared += [
            (f"k3_gerbe_sum_r2_rho{rho}", (lambda rho=rho: sduality.verify_k3_gerbe_sum(2, rho, prec)))
            for rho in picards
        ]
        declared += [
            (
                f"k3_gerbe_sum_r{self.odd_rank}_rho{rho}",
                (lambda rho=rho: sduality.verify_k3_gerbe_sum(self.odd_rank, rho, odd_prec)),
            )
            for rho in picards
        ]
        declared += [
            (
                f"k3_picard_independence_r2_rho{rho}",
                (lambda rho=rho: sduality.verify_picard_independence(2, rho, prec)),
            )
            for rho in picards
            if rho != 11
        ]
        declared += [
            ("k3_complex_structure_free_r2", lambda: sduality.verify_complex_structure_free(2, prec)),
            (
                f"k3_complex_structure_free_r{self.odd_rank}",
                lambda: sduality.verify_complex_structure_free(self.odd_rank, odd_prec),
            ),
            ("k3_su2_sduality", lambda: sduality.verify_su2_k3_sduality(prec, self.k3_rules)),
            ("k3_even_odd_sduality", lambda: sduality.verify_even_odd_transforms(prec, self.k3_rules)),
            ("k3_s_matrix_involution", self.check_k3_involution),
            ("p2_sduality", sduality.verify_p2_sduality),
            ("hurwitz_two_oracles", self.check_hurwitz_oracles),
            ("k3_lattice_form", self.check_lattice),
            ("k3_class_census", self.check_census),
            ("gauss_sums", self.check_gauss_sums),
            ("reference_expansions", sduality.verify_reference_expansions),
        ]
        return [VerificationCheck(check_id, func) for check_id, func in declared]

    # -- checks implemented here --------------------------------------------

    def check_ring_laws(self) -> CheckResult:
        rng = random.Random(PROPERTY_SEED)
        ctx = SeriesContext(6, 3, 4)
        for case in range(self.property_cases):
            a, b, c = (random_series(rng, ctx) for _ in range(3))
            left = (a + b) * c
            right = a * c + b * c
            comparison = qseries.series_equal(left, right)
            if not comparison:
                return failed("series_ring_laws", f"case {case}: distributivity {comparison.describe()}")
            if not qseries.series_equal(a * b, b * a):
                return failed("series_ring_laws", f"case {case}: multiplication is not commutative")
            if qseries.from_json(qseries.to_json(a)) != a:
                return failed("series_ring_laws", f"case {case}: JSON round trip changed the series")
            image = qseries.substitute(a * b, 6, 3, 2, 1)
            product = qseries.substitute(a, 6, 3, 2, 1) * qseries.substitute(b, 6, 3, 2, 1)
            comparison = qseries.series_equal(image, product)
            if not comparison:
                return failed("series_ring_laws", f"case {case}: substitution {comparison.describe()}")
        return passed("series_ring_laws", f"{self.property_cases} seeded cases")

    def check_eta(self) -> CheckResult:
        ctx = SeriesContext(1, 1, self.precision)
        g = qseries.eta_power(-24, ctx)
        inverse = qseries.invert(qseries.eta_power(24, ctx.with_trunc(self.precision + 2)))
        comparison = qseries.series_equal(g, inverse)
        if not comparison:
            return failed("eta_cross_checks", f"eta^-24 vs 1/eta^24: {comparison.describe()}")
        shifted = qseries.shift(g, 1)
        comparison = qseries.series_equal(shifted, qseries.hilbert_euler_gf(ctx))
        if not comparison:
            return failed("eta_cross_checks", f"q G(q) vs Hilbert scheme series: {comparison.describe()}")
        product = qseries.eta_power(-24, ctx) * qseries.eta_power(24, ctx.with_trunc(self.precision + 2))
        comparison = qseries.series_equal(product, qseries.one(ctx))
        if not comparison:
            return failed("eta_cross_checks", f"eta^-24 * eta^24: {comparison.describe()}")
        return passed("eta_cross_checks", f"three constructions agree {comparison.describe()}")

    def check_k3_involution(self) -> CheckResult:
        basis = sduality.BasisSet.K3_RANK2
        if not sduality.rules_square_to_identity(basis, self.k3_rules):
            return failed("k3_s_matrix_involution", "the K3 S matrix does not square to the identity")
        sample = sduality.basis_vector(basis, (1, 2, 3))
        twice = sduality.t_transform_basis(sduality.t_transform_basis(sample))
        if twice != sample:
            return failed("k3_s_matrix_involution", "T^2 is not the identity on the K3 basis")
        return passed("k3_s_matrix_involution", "S^2 = 1 and T^2 = 1 on the K3 basis")

    def check_hurwitz_oracles(self) -> CheckResult:
        for delta in range(1, HURWITZ_ORACLE_LIMIT + 1):
            first = arithmetics.hurwitz_class_number(delta)
            second = arithmetics.hurwitz_class_number_by_reduction(delta)
            if first != second:
                return failed(
                    "hurwitz_two_oracles",
                    f"H({delta}): {rat_to_str(first)} by enumeration, {rat_to_str(second)} by reduction",
                )
        return passed("hurwitz_two_oracles", f"agree for all discriminants up to {HURWITZ_ORACLE_LIMIT}")

    def check_lattice(self) -> CheckResult:
        checks = arithmetics.lattice_checks()
        if checks["determinant"] != -1 or not checks["even"] or checks["signature"] != (3, 19):
            return failed("k3_lattice_form", f"unexpected lattice invariants {checks}")
        return passed("k3_lattice_form", "even, unimodular (det -1), signature (3, 19)")

    def check_census(self) -> CheckResult:
        census = arithmetics.gerbe_census(self.picard, 2)
        counted = arithmetics.k3_class_census_bruteforce()
        expected = (1, census.n_even, census.n_odd)
        if counted != expected:
            return failed("k3_class_census", f"block convolution gives {counted}, closed forms {expected}")
        detail = f"n_even={census.n_even}, n_odd={census.n_odd}"
        if self.full_lattice_enumeration:
            full = arithmetics.k3_class_census_full(self.workers)
            if full != expected:
                return failed("k3_class_census", f"full enumeration gives {full}, closed forms {expected}")
            detail += "; full enumeration agrees"
        return passed("k3_class_census", detail)

    def check_gauss_sums(self) -> CheckResult:
        cases = [(m, r) for r in (2, 3, 5) for m in range(1, r)]
        for m, r in cases:
            if not arithmetics.gauss_sum_check(m, r):
                value = arithmetics.gauss_sum_value(m, r)
                return failed("gauss_sums", f"m={m}, r={r}: sum is {value!r}")
        return passed("gauss_sums", f"{len(cases)} cases equal epsilon(m)^22 r^11")

    # -- running --------------------------------------------------------------

    def run(self) -> List[CheckResult]:
        self.logger.info(f"🔍 running {len(self.checks)} checks at precision {rat_to_str(self.precision)}")
        if self.workers and self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda check: check.run(), self.checks))
        else:
            results = [check.run() for check in self.checks]
        for result in results:
            if result.passed:
                self.logger.info(f"\t✅ {result.check_id}: {result.detail}")
            else:
                self.logger.error(f"\t❌ {result.check_id}: {result.detail}")
        if all_passed(results):
            self.logger.info("✅ all checks passed")
        return results
