"""Exact-string codec and JSON/CSV writers.

Numbers are never emitted as floats: every value is the canonical string of a
Qr2 (``"p/q"`` or ``"p/q + c/d*sqrt(2)"``), which parses back to the same value.
"""
import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Optional, TextIO

from core.exact_ring import Mat2, PqrsCoeffs, Qr2
from shared.types import OutputFormat


def exact(value: Qr2 | int | Any) -> str:
    return str(Qr2.coerce(value))


def parse_exact(text: str) -> Qr2:
    return Qr2.parse(text)


def matrix_fields(matrix: Mat2, prefix: str = "m") -> dict[str, str]:
    """Flatten to m11, m12, m21, m22."""
    return {
        f"{prefix}{i}{j}": exact(matrix.entry(i, j))
        for i in (1, 2)
        for j in (1, 2)
    }


def parse_matrix_fields(row: dict[str, str], prefix: str = "m") -> Mat2:
    return Mat2.from_rows([
        [parse_exact(row[f"{prefix}11"]), parse_exact(row[f"{prefix}12"])],
        [parse_exact(row[f"{prefix}21"]), parse_exact(row[f"{prefix}22"])],
    ])


def pqrs_fields(coeffs: PqrsCoeffs) -> dict[str, str]:
    return {name: exact(value) for name, value in coeffs.as_dict().items()}


def document(subcommand: str, params: dict[str, Any], rows: list[dict[str, Any]]) -> dict[str, Any]:
    """{"meta": {"subcommand", "params"}, "rows": [...]}."""
    return {
        "meta": {"subcommand": subcommand, "params": _plain(params)},
        "rows": rows,
    }


def _plain(params: dict[str, Any]) -> dict[str, Any]:
    out = {}
    for key, value in params.items():
        if isinstance(value, (str, int, bool)) or value is None:
            out[key] = value
        elif hasattr(value, "value"):
            out[key] = value.value
        else:
            out[key] = str(value)
    return out


def to_json(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2)


def to_csv(rows: Iterable[dict[str, Any]]) -> str:
    rows = list(rows)
    buffer = io.StringIO()
    if not rows:
        return ""
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def render(doc: dict[str, Any], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.CSV:
        return to_csv(doc["rows"])
    return to_json(doc) + "\n"


def emit(doc: dict[str, Any], fmt: OutputFormat, output: Optional[Path], stream: TextIO) -> None:
    """Write to ``output`` when given, otherwise to ``stream``."""
    text = render(doc, fmt)
    if output is not None:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text)
    else:
        stream.write(text)
