from dataclasses import asdict, dataclass
from typing import List

PASS = "pass"
FAIL = "fail"


@dataclass
class CheckResult:
    # Stable identifier, e.g. "k3_su2_sduality"
    check_id: str
    # "pass" or "fail"
    status: str
    # Human readable summary, or the first discrepancy on failure
    detail: str

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return asdict(self)


def passed(check_id: str, detail: str) -> CheckResult:
    return CheckResult(check_id, PASS, detail)


def failed(check_id: str, detail: str) -> CheckResult:
    return CheckResult(check_id, FAIL, detail)


def all_passed(results: List[CheckResult]) -> bool:
    return all(result.passed for result in results)
