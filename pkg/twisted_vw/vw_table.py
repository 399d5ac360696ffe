"""Tabulated twisted Vafa-Witten invariants: rows of (rank, det_tag, c2, value)."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .surface_kind import DetTag
from .utils import parse_rat, rat_to_str

THEOREM = "theorem"
PROVISIONAL = "provisional"


@dataclass(frozen=True)
class VWRow:
    rank: int
    det_tag: DetTag
    c2: Fraction
    value: Fraction
    # "theorem" for proved formulas, "provisional" for the as-stated middle residues
    provenance: str = THEOREM

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "det_tag": str(self.det_tag),
            "c2": rat_to_str(self.c2),
            "value": rat_to_str(self.value),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VWRow":
        return cls(
            rank=int(data["rank"]),
            det_tag=DetTag.from_string(data["det_tag"]),
            c2=parse_rat(data["c2"]),
            value=parse_rat(data["value"]),
            provenance=data.get("provenance", THEOREM),
        )


@dataclass
class VWTable:
    rank: int
    det_tag: DetTag
    # Optimal-gerbe tables have c2 in (1/rank)Z; all others integral c2
    fractional_c2: bool = False
    rows: List[VWRow] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        seen = set()
        for row in self.rows:
            if row.rank != self.rank or row.det_tag != self.det_tag:
                raise ValueError(
                    f"row {row} does not belong to a rank {self.rank} {self.det_tag} table"
                )
            if row.c2 in seen:
                raise ValueError(f"duplicate c2 = {rat_to_str(row.c2)} in table")
            seen.add(row.c2)
            step = Fraction(1, self.rank) if self.fractional_c2 else Fraction(1)
            if (row.c2 / step).denominator != 1:
                raise ValueError(
                    f"c2 = {rat_to_str(row.c2)} is not a multiple of {rat_to_str(step)}"
                )

    def add_row(self, c2, value, provenance: str = THEOREM) -> None:
        row = VWRow(self.rank, self.det_tag, parse_rat(c2), parse_rat(value), provenance)
        self.rows.append(row)
        try:
            self.validate()
        except ValueError:
            self.rows.pop()
            raise

    def value_at(self, c2) -> Optional[Fraction]:
        c2 = parse_rat(c2)
        for row in self.rows:
            if row.c2 == c2:
                return row.value
        return None

    def sorted_rows(self) -> List[VWRow]:
        return sorted(self.rows, key=lambda row: row.c2)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "det_tag": str(self.det_tag),
            "fractional_c2": self.fractional_c2,
            "rows": [row.to_dict() for row in self.sorted_rows()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "VWTable":
        return cls(
            rank=int(data["rank"]),
            det_tag=DetTag.from_string(data["det_tag"]),
            fractional_c2=bool(data.get("fractional_c2", False)),
            rows=[VWRow.from_dict(row) for row in data.get("rows", [])],
        )

    def csv_rows(self) -> List[Tuple[str, str, str, str]]:
        return [
            (str(row.rank), str(row.det_tag), rat_to_str(row.c2), rat_to_str(row.value))
            for row in self.sorted_rows()
        ]
