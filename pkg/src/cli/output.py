"""CSV and JSON writers for run results."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from src.diagnostics.collector import Snapshot

SNAPSHOT_COLUMNS = (
    "t",
    "mass",
    "energy",
    "bd_energy",
    "diss_expansion",
    "diss_shear",
    "rho_sup",
    "r_field_sup",
    "wlp_u",
    "wlp_v",
    "moment_alpha",
    "log_entropy",
    "ru_l2",
    "rv_l2",
    "v_sup",
    "picard_iters",
    "gamma_last",
    "admissible_flag",
    "bd_dissipation",
    "diss_integral",
    "energy_residual",
    "moment_zeta",
    "ru_r_l2",
    "u_sup",
)

SWEEP_COLUMNS = ("delta", "gamma", "K", "p_star", "p_max", "admissible")


def format_number(value: float) -> str:
    return format(float(value), ".17g")


def snapshot_row(snap: Snapshot) -> list[str]:
    report = snap.report
    values = [
        snap.t,
        report.mass,
        report.energy,
        report.bd_energy,
        report.dissipation_expansion,
        report.dissipation_shear,
        report.rho_sup,
        report.r_field_sup,
        report.wlp_u,
        report.wlp_v,
        report.moment_alpha,
        report.log_entropy,
        report.ru_l2,
        report.rv_l2,
        report.v_sup,
    ]
    row = [format_number(value) for value in values]
    row += [str(snap.picard_iters), format_number(snap.gamma_last), "1" if snap.admissible else "0"]
    row += [
        format_number(value)
        for value in (
            report.bd_dissipation,
            snap.diss_integral,
            snap.energy_residual,
            report.moment_zeta,
            report.ru_r_l2,
            report.u_sup,
        )
    ]
    return row


class SnapshotWriter:
    """Streams snapshot rows so a failed run still leaves its prefix on disk."""

    def __init__(self, stream: IO[str]) -> None:
        self._writer = csv.writer(stream, lineterminator="\n")
        self._stream = stream
        self.rows = 0
        self._writer.writerow(SNAPSHOT_COLUMNS)

    def __call__(self, snap: Snapshot) -> None:
        self._writer.writerow(snapshot_row(snap))
        self._stream.flush()
        self.rows += 1


def write_rows(stream: IO[str], header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [
                format_number(item) if isinstance(item, float) else _text(item)
                for item in row
            ]
        )


def _text(item: object) -> str:
    if isinstance(item, bool):
        return "true" if item else "false"
    return str(item)


def _json_safe(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Mapping):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def write_summary(path: str | Path, summary: Mapping[str, object]) -> None:
    """Write ``summary`` as JSON; non-finite numbers become ``null``."""

    Path(path).write_text(
        json.dumps(_json_safe(summary), indent=2, allow_nan=False) + "\n", encoding="utf-8"
    )
