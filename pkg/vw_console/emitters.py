"""JSON and CSV writers for series, tables, censuses and check reports."""

import csv
import json
from typing import IO, Iterable, List, Sequence

from twisted_vw import qseries
from twisted_vw.check_report import CheckResult
from twisted_vw.qseries import PuiseuxSeries
from twisted_vw.vw_table import VWTable

SERIES_HEADER = ("exponent", "coefficient")
TABLE_HEADER = ("rank", "det_tag", "c2", "value")
REPORT_HEADER = ("check_id", "status", "detail")


def emit_json(payload, stream: IO[str]) -> None:
    json.dump(payload, stream, indent=2, ensure_ascii=False)
    stream.write("\n")


def emit_csv(header: Sequence[str], rows: Iterable[Sequence], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def series_payload(name: str, series: PuiseuxSeries) -> dict:
    payload = {"series": name}
    payload.update(qseries.to_json(series))
    return payload


def write_series(name: str, series: PuiseuxSeries, fmt: str, stream: IO[str]) -> None:
    if fmt == "csv":
        emit_csv(SERIES_HEADER, qseries.csv_rows(series), stream)
    else:
        emit_json(series_payload(name, series), stream)


def write_table(table: VWTable, fmt: str, stream: IO[str]) -> None:
    if fmt == "csv":
        emit_csv(TABLE_HEADER, table.csv_rows(), stream)
    else:
        emit_json(table.to_json(), stream)


def write_mapping(payload: dict, fmt: str, stream: IO[str]) -> None:
    if fmt == "csv":
        emit_csv(("key", "value"), ((k, v) for k, v in payload.items()), stream)
    else:
        emit_json(payload, stream)


def write_report(results: List[CheckResult], fmt: str, stream: IO[str]) -> None:
    if fmt == "csv":
        emit_csv(REPORT_HEADER, ((r.check_id, r.status, r.detail) for r in results), stream)
    else:
        emit_json([r.to_dict() for r in results], stream)
