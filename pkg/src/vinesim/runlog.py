"""Run-log persistence: one CSV row per simulation step or event.

Floats are written with repr so a read-back log compares equal at full
double precision; the first line pins the format version.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, TextIO

LOG_VERSION_LINE = "# vinesim-log/1"
LOG_HEADER = ("t", "mode", "pressure_kPa", "body_length_m", "tip_x", "tip_y",
              "tip_heading", "attachment_status", "buckled", "event")


class RunLogError(ValueError):
    """Raised for malformed log files; the message carries the row number."""


@dataclass(frozen=True)
class LogRow:
    t: float
    mode: str
    pressure_kpa: float
    body_length_m: float
    tip_x: float
    tip_y: float
    tip_heading: float
    attachment_status: str
    buckled: bool
    event: str = ""

    def as_fields(self) -> tuple[str, ...]:
        return (repr(self.t), self.mode, repr(self.pressure_kpa),
                repr(self.body_length_m), repr(self.tip_x), repr(self.tip_y),
                repr(self.tip_heading), self.attachment_status,
                "true" if self.buckled else "false", self.event)


def write_run_log(rows: Iterable[LogRow], stream: TextIO) -> None:
    stream.write(LOG_VERSION_LINE + "\n")
    stream.write(",".join(LOG_HEADER) + "\n")
    for row in rows:
        stream.write(",".join(row.as_fields()) + "\n")


def run_log_text(rows: Iterable[LogRow]) -> str:
    buffer = io.StringIO()
    write_run_log(rows, buffer)
    return buffer.getvalue()


def _parse_float(field: str, line_no: int, name: str) -> float:
    try:
        return float(field)
    except ValueError as error:
        raise RunLogError(f"row {line_no}: bad {name} value {field!r}") from error


def read_run_log(stream: TextIO) -> list[LogRow]:
    lines = stream.read().splitlines()
    if not lines or lines[0] != LOG_VERSION_LINE:
        raise RunLogError("row 1: missing or unsupported log version line")
    if len(lines) < 2 or tuple(lines[1].split(",")) != LOG_HEADER:
        raise RunLogError("row 2: bad header")
    rows: list[LogRow] = []
    for line_no, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != len(LOG_HEADER):
            raise RunLogError(
                f"row {line_no}: expected {len(LOG_HEADER)} fields, "
                f"got {len(fields)}")
        if fields[8] not in ("true", "false"):
            raise RunLogError(f"row {line_no}: bad buckled value {fields[8]!r}")
        rows.append(LogRow(
            t=_parse_float(fields[0], line_no, "t"),
            mode=fields[1],
            pressure_kpa=_parse_float(fields[2], line_no, "pressure_kPa"),
            body_length_m=_parse_float(fields[3], line_no, "body_length_m"),
            tip_x=_parse_float(fields[4], line_no, "tip_x"),
            tip_y=_parse_float(fields[5], line_no, "tip_y"),
            tip_heading=_parse_float(fields[6], line_no, "tip_heading"),
            attachment_status=fields[7],
            buckled=fields[8] == "true",
            event=fields[9],
        ))
    return rows
