from __future__ import annotations

import csv
import io
import json
import math
import numbers
import os
import sys
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from tabulate import tabulate

from lmg_fidelity.models.constants import JSON_SCHEMA_VERSION
from lmg_fidelity.models.enums import OutputFormat


def fmt_value(v: Any) -> str:
    """Shortest round-trip text for numbers; NaN as ``nan``, booleans lowercase."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Enum):
        return str(v.value)
    if isinstance(v, numbers.Integral):
        return str(int(v))
    if isinstance(v, float) or hasattr(v, "__float__"):
        x = float(v)
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, numbers.Integral):
        return int(v)
    if isinstance(v, Mapping):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) or hasattr(v, "__float__"):
        x = float(v)
        return x if math.isfinite(x) else None
    return str(v)


def format_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt_value(v) for v in row])
    return buf.getvalue()


def format_json(command: str, payload: Mapping[str, Any]) -> str:
    body: Dict[str, Any] = {"schema": JSON_SCHEMA_VERSION, "command": command}
    body.update(payload)
    return json.dumps(_jsonable(body), indent=2) + "\n"


def format_table(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    cells = [[fmt_value(v) for v in row] for row in rows]
    return tabulate(cells, headers=list(columns), tablefmt="psql", disable_numparse=True) + "\n"


def records(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> List[Dict[str, Any]]:
    return [dict(zip(columns, row)) for row in rows]


def render(
    fmt: OutputFormat,
    command: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    meta: Optional[Mapping[str, Any]] = None,
    summary: Optional[Tuple[str, Mapping[str, Any]]] = None,
) -> str:
    """Render result rows plus an optional named summary record.

    JSON carries ``meta`` and stores the summary under its name; CSV and
    table output append the summary as a one-row table after a blank line.
    """
    if fmt is OutputFormat.JSON:
        payload: Dict[str, Any] = dict(meta or {})
        payload["rows"] = records(columns, rows)
        if summary is not None:
            payload[summary[0]] = dict(summary[1])
        return format_json(command, payload)
    emit = format_csv if fmt is OutputFormat.CSV else format_table
    parts = [emit(columns, rows)]
    if summary is not None:
        parts.append(emit(list(summary[1].keys()), [list(summary[1].values())]))
    return "\n".join(parts)


def write_output(text: str, path: Optional[Path] = None) -> None:
    """Write to stdout, or atomically to ``path`` (temp file, then rename)."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


__all__ = ["fmt_value", "format_csv", "format_json", "format_table", "records", "render", "write_output"]
