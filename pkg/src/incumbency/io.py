"""Config files, schedule files and CSV/JSON rendering for the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .equilibrium import InfoSchedule
from .errors import ModelError

BUILTIN_SCHEDULES = ("panel_a", "panel_b")


def read_config(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` file. Blank lines and ``#`` comments are skipped.

    Keys use the long flag names with underscores, e.g. ``sigma_Q2 = 1.5``.
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ModelError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ModelError(f"{path}:{lineno}: empty key")
        values[key.replace("-", "_")] = value
    return values


def load_schedule(source: str) -> InfoSchedule:
    """Load a schedule from a CSV path or one of the built-in names.

    The CSV needs the header ``e,sigma_s2,beta`` and one row per e = 1..E.
    """
    if source in BUILTIN_SCHEDULES:
        text = resources.files("incumbency").joinpath(f"schedules/{source}.csv").read_text()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ModelError(f"cannot read schedule {source!r}: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"e", "sigma_s2", "beta"} <= set(reader.fieldnames):
        raise ModelError("schedule CSV needs columns e, sigma_s2, beta")
    try:
        rows = [(int(r["e"]), float(r["sigma_s2"]), float(r["beta"])) for r in reader]
    except (TypeError, ValueError) as exc:
        raise ModelError(f"malformed schedule row: {exc}") from exc
    return InfoSchedule.from_rows(rows)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Mapping):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_csv(columns: Sequence[str], rows: Iterable[Mapping[str, Any]], delimiter: str = ",") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render_json(document: Mapping[str, Any]) -> str:
    # repr-based float output is the shortest string that round-trips exactly.
    return json.dumps(_jsonable(document), indent=2) + "\n"


def render_text(record: Mapping[str, Any]) -> str:
    return "".join(f"{k}={_cell(v)}\n" for k, v in record.items())
