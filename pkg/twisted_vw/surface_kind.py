from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import InvalidGerbeDataError
from .utils import require_picard, require_prime_rank


def _normalize(raw: str) -> str:
    return raw.strip().lower().replace(" ", "").replace("_", "").replace("-", "")


class SurfaceKind(Enum):
    P2 = "P2"
    P222 = "P222"
    K3 = "K3"

    @classmethod
    def from_string(cls, raw: str) -> "SurfaceKind":
        """Accept 'p2', 'P(2,2,2)', 'p222', 'k3' and similar spellings."""
        if not isinstance(raw, str):
            raise ValueError(f"Invalid surface: {raw!r}")
        norm = _normalize(raw).replace("(", "").replace(")", "").replace(",", "")
        if norm in ("p2", "projectiveplane"):
            return cls.P2
        if norm in ("p222", "gerbep2"):
            return cls.P222
        if norm == "k3":
            return cls.K3
        raise ValueError(f"Unknown surface kind: {raw!r}")

    def __str__(self):
        return self.value


class DetTag(Enum):
    TRIVIAL = "trivial"
    GERBE_LINE_BUNDLE = "gerbe-line-bundle"

    @classmethod
    def from_string(cls, raw: str) -> "DetTag":
        if not isinstance(raw, str):
            raise ValueError(f"Invalid determinant tag: {raw!r}")
        norm = _normalize(raw)
        if norm in ("trivial", "o", "structuresheaf"):
            return cls.TRIVIAL
        if norm in ("gerbelinebundle", "gerbe", "linebundle", "l"):
            return cls.GERBE_LINE_BUNDLE
        raise ValueError(f"Unknown determinant tag: {raw!r}")

    def __str__(self):
        return self.value


class C1Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def from_string(cls, raw: str) -> "C1Parity":
        if not isinstance(raw, str):
            raise ValueError(f"Invalid c1 parity: {raw!r}")
        norm = _normalize(raw)
        if norm in ("even", "0"):
            return cls.EVEN
        if norm in ("odd", "1"):
            return cls.ODD
        raise ValueError(f"Unknown c1 parity: {raw!r}")

    def representative(self) -> int:
        """The c1 in {0, 1} that fixes the prefactor exponent."""
        return 0 if self is C1Parity.EVEN else 1

    def __str__(self):
        return self.value


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"

    @classmethod
    def from_string(cls, raw: str) -> "OutputFormat":
        if not isinstance(raw, str):
            raise ValueError(f"Invalid output format: {raw!r}")
        norm = _normalize(raw)
        for member in cls:
            if member.value == norm:
                return member
        raise ValueError(f"Unknown output format: {raw!r}")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SurfaceSpec:
    kind: SurfaceKind
    rank: int = 2
    # K3 only
    picard: Optional[int] = None

    def __post_init__(self) -> None:
        require_prime_rank(self.rank)
        if self.kind is SurfaceKind.K3:
            if self.picard is None:
                raise InvalidGerbeDataError("a K3 surface needs a Picard number")
            require_picard(self.picard)
        elif self.picard is not None:
            raise InvalidGerbeDataError(f"a Picard number only applies to K3, not {self.kind}")
