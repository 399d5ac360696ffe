"""
Command Handler - vw_console

Dispatches the series, table, census and verify commands to twisted_vw and
writes their results as JSON, CSV or Jinja2-rendered text. Every command
returns a process exit code: 0 on success, 1 when a verification fails or an
internal cross-check disagrees, 2 on invalid input.
"""

import os
import sys
from typing import IO, Callable, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader, select_autoescape

from twisted_vw import arithmetics, partitions, qseries
from twisted_vw.check_report import CheckResult, all_passed
from twisted_vw.errors import InternalInconsistencyError
from twisted_vw.qseries import PuiseuxSeries
from twisted_vw.surface_kind import C1Parity, OutputFormat, SurfaceKind
from twisted_vw.utils import rat_to_str
from twisted_vw.verification_agent import VerificationAgent, corrupted_k3_rules
from twisted_vw.vw_base import VWBase
from twisted_vw.vw_table import VWTable

from . import emitters
from .vw_config import Config, InvalidConfigError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

SERIES_SURFACES = {
    "p2-vb": SurfaceKind.P2,
    "p2-su": SurfaceKind.P2,
    "p2-su-z2": SurfaceKind.P2,
    "p222-vb": SurfaceKind.P222,
    "k3-su": SurfaceKind.K3,
    "k3-surzr": SurfaceKind.K3,
    "k3-prediction": SurfaceKind.K3,
    "k3-ess": SurfaceKind.K3,
    "k3-opt": SurfaceKind.K3,
    "k3-free": SurfaceKind.K3,
}
TABLE_KINDS = ("ess", "opt")


def _require_rank_two(config: Config, selector: str) -> None:
    if config.rank != 2:
        raise InvalidConfigError(f"'{selector}' is only defined for rank 2, got rank {config.rank}")


class CommandHandler(VWBase):
    """Runs one command against a validated Config."""

    def __init__(self, config: Config, stdout: Optional[IO[str]] = None) -> None:
        super().__init__()
        self.config = config
        self.command: Optional[str] = None
        self.stdout = stdout if stdout is not None else sys.stdout

        template_dir = os.path.join(os.path.dirname(__file__), "templates")
        self.jinja_env = Environment(
            loader=FileSystemLoader(template_dir),
            autoescape=select_autoescape(["html", "xml"]),
            keep_trailing_newline=True,
        )
        self.jinja_env.filters["rat"] = rat_to_str

        self._series_builders: Dict[str, Callable[[], PuiseuxSeries]] = {
            "p2-vb": self._p2_vb,
            "p2-su": lambda: partitions.z_su2_p2(self._p2_c1(), self.config.precision),
            "p2-su-z2": lambda: partitions.z_su2z2_p2(self._p2_c1(), self.config.precision),
            "p222-vb": lambda: partitions.z_vb_p222(
                self.config.c1, self.config.inertia, self.config.precision, self.config.drop_divisor_term
            ),
            "k3-su": lambda: partitions.z_k3_trivial_gerbe(self.config.rank, self.config.precision),
            "k3-surzr": lambda: partitions.z_k3_surzr(
                self.config.rank, self.config.picard, self.config.precision
            ),
            "k3-prediction": lambda: partitions.z_k3_vw_prediction(self.config.precision),
            "k3-ess": lambda: partitions.z_ess_trivial(self.config.rank, self.config.precision),
            "k3-opt": lambda: partitions.z_optimal(self.config.rank, self.config.precision),
            "k3-free": lambda: partitions.z_k3_complex_structure_free(
                self.config.rank, self.config.precision
            ),
        }

    # -- dispatch -------------------------------------------------------------

    def handle(self, command: str, argument: Optional[str] = None, inject_fault: bool = False) -> int:
        self.command = command if argument is None else f"{command} {argument}"
        self._debug_log("dispatching")
        try:
            if command == "series":
                return self.cmd_series(argument)
            if command == "table":
                return self.cmd_table(argument)
            if command == "census":
                return self.cmd_census()
            if command == "verify":
                return self.cmd_verify(inject_fault=inject_fault)
            raise InvalidConfigError(f"Unknown command: {command!r}")
        except InternalInconsistencyError as e:
            self.logger.error(f"❌ internal cross-check failed: {e}")
            return EXIT_FAILED
        except ValueError as e:
            self.logger.error(f"❌ {e}")
            return EXIT_INVALID

    def _render(self, template: str, **context) -> None:
        self.stdout.write(self.jinja_env.get_template(template).render(config=self.config, **context))

    # -- series ---------------------------------------------------------------

    def _p2_c1(self) -> int:
        if self.config.c1 not in (0, 1):
            raise InvalidConfigError(f"c1 must be 0 or 1 for SU(2) series on P^2, got {self.config.c1}")
        return self.config.c1

    def _p2_vb(self) -> PuiseuxSeries:
        parity = C1Parity.ODD if self.config.c1 % 2 else C1Parity.EVEN
        return partitions.z_vb_p2(
            parity, self.config.precision, c1=self.config.c1, drop_divisor_term=self.config.drop_divisor_term
        )

    def build_series(self, selector: str) -> PuiseuxSeries:
        if selector not in self._series_builders:
            raise InvalidConfigError(
                f"Unknown series selector {selector!r}; choose one of {', '.join(SERIES_SURFACES)}"
            )
        if SERIES_SURFACES[selector] is not SurfaceKind.K3 or selector == "k3-prediction":
            _require_rank_two(self.config, selector)
        return self._series_builders[selector]()

    def cmd_series(self, selector: str) -> int:
        series = self.build_series(selector)
        self.logger.info(f"📈 {selector}: {len(series)} terms below {rat_to_str(series.trunc_order)}")
        fmt = self.config.format
        if fmt is OutputFormat.TEXT:
            self._render("series.txt.j2", name=selector, series=series, terms=qseries.rational_terms(series))
        else:
            emitters.write_series(selector, series, str(fmt), self.stdout)
        return EXIT_OK

    # -- tables ---------------------------------------------------------------

    def build_table(self, kind: str) -> VWTable:
        if kind == "ess":
            c2_max = self.config.c2_max.numerator // self.config.c2_max.denominator
            return partitions.vw_essentially_trivial(
                self.config.rank, c2_max, as_stated=self.config.as_stated_higher_rank
            )
        if kind == "opt":
            return partitions.vw_optimal_table(self.config.rank, self.config.c2_max)
        raise InvalidConfigError(f"Unknown table kind {kind!r}; choose one of {', '.join(TABLE_KINDS)}")

    def cmd_table(self, kind: str) -> int:
        table = self.build_table(kind)
        fmt = self.config.format
        if fmt is OutputFormat.TEXT:
            self._render("table.txt.j2", kind=kind, table=table)
        else:
            emitters.write_table(table, str(fmt), self.stdout)
        return EXIT_OK

    # -- census ---------------------------------------------------------------

    def build_census(self) -> dict:
        r, rho = self.config.rank, self.config.picard
        census = arithmetics.gerbe_census(rho, r).to_dict()
        # the wire format names the zero class n_zero
        payload = {("n_zero" if key == "n_zero_class" else key): value for key, value in census.items()}
        if r == 2:
            _, n_even, n_odd = arithmetics.k3_class_census_bruteforce()
            if (n_even, n_odd) != (payload["n_even"], payload["n_odd"]):
                raise InternalInconsistencyError(
                    f"block convolution gives n_even={n_even}, n_odd={n_odd}; "
                    f"closed forms give {payload['n_even']}, {payload['n_odd']}"
                )
            if self.config.full_lattice_enumeration:
                full = arithmetics.k3_class_census_full(self.config.workers)
                if full[1:] != (n_even, n_odd):
                    raise InternalInconsistencyError(f"full enumeration gives {full[1:]}")
                payload["full_enumeration"] = True
        gauss_checks = []
        for m in range(1, r):
            value = arithmetics.gauss_sum_value(m, r)
            exact = value.rational_value()
            gauss_checks.append(
                {
                    "m": m,
                    "value": rat_to_str(exact) if exact is not None else repr(value),
                    "pass": arithmetics.gauss_sum_check(m, r),
                }
            )
        payload["gauss_checks"] = gauss_checks
        return payload

    def cmd_census(self) -> int:
        payload = self.build_census()
        ok = all(check["pass"] for check in payload["gauss_checks"])
        fmt = self.config.format
        if fmt is OutputFormat.TEXT:
            self._render("census.txt.j2", census=payload)
        elif fmt is OutputFormat.CSV:
            flat = {k: v for k, v in payload.items() if k != "gauss_checks"}
            for check in payload["gauss_checks"]:
                flat[f"gauss_m{check['m']}"] = check["value"]
                flat[f"gauss_m{check['m']}_pass"] = check["pass"]
            emitters.write_mapping(flat, "csv", self.stdout)
        else:
            emitters.write_mapping(payload, "json", self.stdout)
        return EXIT_OK if ok else EXIT_FAILED

    # -- verify ---------------------------------------------------------------

    def run_checks(self, inject_fault: bool = False) -> List[CheckResult]:
        agent = VerificationAgent(
            precision=self.config.precision,
            picard=self.config.picard,
            workers=self.config.workers,
            k3_rules=corrupted_k3_rules() if inject_fault else None,
            full_lattice_enumeration=self.config.full_lattice_enumeration,
        )
        return agent.run()

    def cmd_verify(self, inject_fault: bool = False) -> int:
        results = self.run_checks(inject_fault)
        fmt = self.config.format
        if fmt is OutputFormat.TEXT:
            self._render("verify.txt.j2", results=results, ok=all_passed(results))
        else:
            emitters.write_report(results, str(fmt), self.stdout)
        return EXIT_OK if all_passed(results) else EXIT_FAILED
