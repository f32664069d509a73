"""
Evaluación por lotes.

Cada fila del manifiesto se evalúa en un hilo aparte, con a lo sumo
`parallelism` filas en curso. La semilla de la fila i es `seed ^ i`, de modo
que el resultado no depende del grado de paralelismo.
"""

import asyncio
from collections import defaultdict
from pathlib import Path
from statistics import fmean
from typing import Dict, List, Optional

from pydantic import ValidationError

from pictochart.core.config import BLUR_SIGMA
from pictochart.core.errors import (
    DimensionMismatch,
    MissingFile,
    NoAlphaChannel,
    PictochartError,
    SchemaError,
    SpecValueError,
)
from pictochart.core.logger import MyLogger
from pictochart.schemas.batch import BatchManifest, BatchResult, BatchRow, RunConfig
from pictochart.schemas.chart import ChartSpec
from pictochart.schemas.fidelity import SamplingConfig
from pictochart.services.chart_model import parse_spec
from pictochart.services.fidelity import resolve_region_weights, score_chart
from pictochart.storage.images import read_rgba

logger = MyLogger().get_logger()

STATUS_OK = "ok"
STATUS_MISSING = "missing"
STATUS_SPEC_ERROR = "spec_error"
STATUS_UNSUPPORTED = "unsupported_image"
STATUS_ERROR = "error"


def _load_spec(row: BatchRow) -> ChartSpec:
    path = Path(row.spec_path)
    if not path.is_file():
        raise MissingFile(f"No existe la especificación {path}")
    spec = parse_spec(path.read_text(encoding="utf-8"))
    if row.chart_type is not None and row.chart_type != spec.chart_type:
        try:
            spec = ChartSpec.model_validate({**spec.model_dump(), "chart_type": row.chart_type})
        except ValidationError as exc:
            raise SpecValueError(str(exc)) from exc
    return spec


def score_row(index: int, row: BatchRow, run_cfg: RunConfig) -> BatchResult:
    """
    Evalúa una fila del manifiesto; nunca lanza, los fallos quedan en `status`.
    """
    seed = run_cfg.seed ^ index
    base = dict(
        path=row.image_path,
        chart_type=row.chart_type,
        seed=seed,
        points_per_band=run_cfg.points_per_band,
        blur_sigma=BLUR_SIGMA,
        epsilon=run_cfg.epsilon,
        band_edges=tuple(run_cfg.band_edges or ()),
        weights=tuple(run_cfg.weights or ()),
    )
    try:
        spec = _load_spec(row)
        base["chart_type"] = spec.chart_type
        rw = resolve_region_weights(run_cfg.band_edges, run_cfg.weights, spec)
        image = read_rgba(row.image_path)
        cfg = SamplingConfig(points_per_band=run_cfg.points_per_band, rng_seed=seed, epsilon=run_cfg.epsilon)
        report, _ = score_chart(image, spec, rw, cfg)
    except MissingFile as exc:
        logger.warning("Fila %d: %s", index, exc.detail)
        return BatchResult(status=STATUS_MISSING, **base)
    except NoAlphaChannel as exc:
        logger.warning("Fila %d: %s", index, exc.detail)
        return BatchResult(status=STATUS_UNSUPPORTED, **base)
    except (SchemaError, SpecValueError, DimensionMismatch) as exc:
        logger.warning("Fila %d: %s", index, exc.detail)
        return BatchResult(status=STATUS_SPEC_ERROR, **base)
    except PictochartError as exc:
        logger.warning("Fila %d: %s", index, exc.detail)
        return BatchResult(status=STATUS_ERROR, **base)
    except Exception:
        logger.exception("Fila %d: error inesperado", index)
        return BatchResult(status=STATUS_ERROR, **base)

    base.update(band_edges=report.band_edges, weights=report.weights)
    return BatchResult(
        f1=report.f1,
        precision=report.weighted_precision,
        recall=report.weighted_recall,
        status=STATUS_OK,
        **base,
    )


async def run_batch(
    manifest: BatchManifest,
    run_cfg: RunConfig,
    parallelism: Optional[int] = None,
) -> List[BatchResult]:
    """
    Evalúa todas las filas del manifiesto.

    Returns:
        List[BatchResult]: un resultado por fila, en el orden del manifiesto.
    """
    semaphore = asyncio.Semaphore(parallelism or run_cfg.parallelism)

    async def worker(index: int, row: BatchRow) -> BatchResult:
        async with semaphore:
            return await asyncio.to_thread(score_row, index, row, run_cfg)

    results = await asyncio.gather(*(worker(i, row) for i, row in enumerate(manifest.rows)))
    logger.info("Lote evaluado: %d filas, %d correctas", len(results), sum(r.status == STATUS_OK for r in results))
    return list(results)


def mean_f1_by_type(results: List[BatchResult]) -> Dict[str, float]:
    """F1 medio por tipo de gráfico sobre las filas correctas, ordenado por tipo."""
    groups: Dict[str, List[float]] = defaultdict(list)
    for result in results:
        if result.status == STATUS_OK:
            groups[result.chart_type.value].append(result.f1)
    return {chart_type: fmean(values) for chart_type, values in sorted(groups.items())}
