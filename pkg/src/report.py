import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from genericpath import exists

from dynamics import TimeSeries
from enums import OutputFormat
from exceptions import OutputError
from fanoutils import to_decimal
from sweep import SweepGrid

Cell = Union[float, int, str, None]


@dataclass
class Table:
    headers: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any] = field(default_factory=dict)

    def extend(self, other: 'Table') -> None:
        if other.headers != self.headers:
            raise ValueError(f'Cannot join tables with headers {self.headers} and {other.headers}')
        self.rows.extend(other.rows)


def _cell(value: Cell) -> str:
    if isinstance(value, (bool, int)) or value is None:
        return str(value)
    if isinstance(value, (int, float)):
        return to_decimal(value)
    return str(value)


def _json_cell(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else str(value)
    return value


def metadata_line(metadata: dict[str, Any]) -> str:
    return '# ' + ','.join(f'{key}={_cell(value)}' for key, value in metadata.items())


def format_csv(table: Table) -> str:
    buffer = io.StringIO()
    buffer.write(metadata_line(table.metadata) + '\n')
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(table.headers)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def format_json(table: Table) -> str:
    report: dict[str, Any] = {}
    report['metadata'] = {k: _json_cell(v) for k, v in table.metadata.items()}
    report['columns'] = table.headers
    report['rows'] = [[_json_cell(v) for v in row] for row in table.rows]
    return json.dumps(report, indent=4)


def format_table(table: Table, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.Json:
        return format_json(table)
    return format_csv(table)


def write_text(path: str, text: str) -> None:
    try:
        basedir: str = os.path.dirname(os.path.abspath(path=path))
        if not exists(basedir):
            os.makedirs(basedir)

        with open(path, encoding='utf-8', mode='w', newline='') as f:
            f.write(text)
    except OSError as ex:
        raise OutputError(f'cannot write {path}: {ex}')

    logging.info(f'Wrote {path}')


def write_table(table: Table, path: Optional[str], fmt: OutputFormat = OutputFormat.Csv) -> str:
    """Render the table and write it to path, or to stdout when path is None."""
    text = format_table(table, fmt)
    if path is None:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')
    else:
        write_text(path, text)
    return text


def record_table(record: dict[str, Cell], metadata: Optional[dict[str, Any]] = None) -> Table:
    return Table(headers=list(record), rows=[list(record.values())], metadata=metadata or {})


def grid_table(grid: SweepGrid, metadata: Optional[dict[str, Any]] = None) -> Table:
    meta: dict[str, Any] = dict(grid.base.as_dict())
    meta.update(metadata or {})
    return Table(headers=grid.headers, rows=[list(row) for row in grid.rows()], metadata=meta)


def series_table(series: TimeSeries, extra_columns: Optional[dict[str, float]] = None,
                 metadata: Optional[dict[str, Any]] = None) -> Table:
    """One row per sample: t, the state components, then constant extra columns."""
    extra = extra_columns or {}
    headers = ['t', 'rho_gg', 'rho_aa', 'rho_bb', 're_ab', 'im_ab'] + list(extra)
    rows: list[list[Any]] = []
    for t, state in zip(series.times, series.states):
        rows.append([float(t), state.rho_gg, state.rho_aa, state.rho_bb, state.re_ab, state.im_ab]
                    + list(extra.values()))

    meta: dict[str, Any] = dict(series.params.as_dict()) if series.params is not None else {}
    meta.update({k: v for k, v in series.metadata.items() if isinstance(v, (int, float, str))})
    meta.update(metadata or {})
    return Table(headers=headers, rows=rows, metadata=meta)
