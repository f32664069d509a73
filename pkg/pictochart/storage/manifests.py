"""Manifiestos de lotes y CSV de resultados."""

import csv
import io
from pathlib import Path
from typing import Iterable

from pydantic import ValidationError

from pictochart.core.errors import MissingFile, SchemaError
from pictochart.schemas.batch import BatchManifest, BatchResult, BatchRow

RESULT_COLUMNS = (
    "path",
    "chart_type",
    "f1",
    "precision",
    "recall",
    "seed",
    "status",
    "points_per_band",
    "band_edges",
    "weights",
    "blur_sigma",
    "epsilon",
)


def read_manifest(path: str | Path) -> BatchManifest:
    """
    Lee un manifiesto CSV con cabecera `image_path,spec_path[,chart_type]`.
    Las rutas relativas se resuelven contra la carpeta del manifiesto.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"No existe el manifiesto {path}")
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return BatchManifest()

    reader = csv.DictReader(io.StringIO(text))
    if not {"image_path", "spec_path"} <= set(reader.fieldnames or ()):
        raise SchemaError("El manifiesto necesita las columnas image_path y spec_path")

    rows = []
    for line, record in enumerate(reader, start=2):
        chart_type = (record.get("chart_type") or "").strip() or None
        try:
            row = BatchRow(
                image_path=str(path.parent / record["image_path"].strip()),
                spec_path=str(path.parent / record["spec_path"].strip()),
                chart_type=chart_type,
            )
        except (ValidationError, AttributeError) as exc:
            raise SchemaError(f"Fila {line} del manifiesto inválida: {exc}") from exc
        rows.append(row)
    return BatchManifest(rows=tuple(rows))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ";".join(repr(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return value.value
    return str(value)


def results_to_csv(results: Iterable[BatchResult]) -> str:
    """CSV UTF-8 con cabecera; los flotantes van con `repr` para reproducir bit a bit."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for result in results:
        writer.writerow([_cell(getattr(result, column)) for column in RESULT_COLUMNS])
    return buffer.getvalue()
