"""Deterministic CSV and JSON rendering."""
import csv
import io
import json
from typing import Any, Iterable, Sequence

from runpatterns.schemas.distribution import Pmf
from runpatterns.schemas.output import CommandOutput, OutputRecord, TableResult


def format_float(value: float) -> str:
    """Shortest round-trip form; integral values lose the trailing '.0'."""
    text = repr(float(value) + 0.0)
    return text[:-2] if text.endswith(".0") else text


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def pmf_records(pmf: Pmf) -> list[OutputRecord]:
    return [OutputRecord(index=m, value=prob) for m, prob in zip(pmf.outcomes(), pmf.probs)]


def moment_records(values: Sequence[float]) -> list[OutputRecord]:
    return [OutputRecord(index=j, value=value) for j, value in enumerate(values)]


def records_csv(records: Sequence[OutputRecord], header: Sequence[str]) -> str:
    return csv_text(header, ((r.index, format_float(r.value)) for r in records))


def table_csv(table: TableResult) -> str:
    """Outcome rows by p columns, each p followed by its 7-decimal display column."""
    header = ["m"]
    for column in table.columns:
        label = format_float(column.p)
        header += [label, f"{label}_display"]

    def cells(values: list[float]) -> list[str]:
        out = []
        for value in values:
            out += [format_float(value), f"{value:.7f}"]
        return out

    rows = []
    for i, m in enumerate(table.outcomes):
        rows.append([str(m)] + cells([column.values[i] for column in table.columns]))
    rows.append([table.mean_label] + cells([column.mean for column in table.columns]))
    return csv_text(header, rows)


def json_text(output: CommandOutput) -> str:
    return json.dumps(output.model_dump(mode="json"))
