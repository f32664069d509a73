"""
Métrica F1 ponderada de fidelidad de datos.

Este módulo contiene la lógica para:
- Preprocesar la imagen generada (desenfoque del alfa, cajas envolventes en barras)
- Muestrear puntos uniformes dentro de una región
- Calcular precisión, recall y F1 ponderados por bandas de distancia
- Calcular lo mismo de forma exhaustiva, como oráculo

Cada banda i aporta su conteo n_i con peso w_i y pertenencia graduada
c_i = (w_i - w_ultima) / (w_0 - w_ultima); la razón es Σ w_i·c_i·n_i / Σ w_i·n_i.
Para la precisión n_i es el primer plano que cae en la banda i del campo del
esqueleto; para el recall, la banda 0 del esqueleto que cae en la banda i del
campo del primer plano. Lo que queda más allá del último borde no suma nada.
"""

from typing import List, Optional, Tuple

import numpy as np
from scipy.ndimage import gaussian_filter

from pictochart.core.config import BLUR_SIGMA, BLUR_TRUNCATE, EXHAUSTIVE_MAX_PX
from pictochart.core.errors import DimensionMismatch, NoAlphaChannel, SizeLimit
from pictochart.core.logger import MyLogger
from pictochart.models.field import DistanceField, ForegroundDerivation, ForegroundMask, RegionMasks
from pictochart.models.raster import RasterImage
from pictochart.schemas.chart import ChartSpec, ChartType, NormalizedSpec
from pictochart.schemas.fidelity import (
    BandTally,
    FidelityMethod,
    FidelityReport,
    RegionWeights,
    SamplingConfig,
)
from pictochart.services.chart_model import bar_slots, column_mask, normalize
from pictochart.services.distance_field import (
    band_partition,
    build_distance_field,
    default_region_weights,
    foreground_field,
)

logger = MyLogger().get_logger()

PointSet = np.ndarray  # (n, 2) enteros: fila, columna


def preprocess_chart(
    image: RasterImage | np.ndarray,
    chart_type: ChartType,
    nspec: NormalizedSpec,
    blur_sigma: float = BLUR_SIGMA,
) -> ForegroundMask:
    """
    Obtiene el primer plano de un gráfico pictórico ya recortado (RGBA).

    Se desenfoca el canal alfa (gaussiana truncada en 3 sigma) y es primer
    plano todo píxel con alfa desenfocado > 0. En barras, el área efectiva de
    cada barra es la caja envolvente de los píxeles no transparentes dentro
    de su ranura de columnas.

    Raises:
        NoAlphaChannel: la imagen no tiene canal alfa.
        DimensionMismatch: la imagen no mide lo mismo que el lienzo.
    """
    pixels = image.pixels if isinstance(image, RasterImage) else np.asarray(image)
    if pixels.ndim != 3 or pixels.shape[2] != 4:
        raise NoAlphaChannel()
    width, height = nspec.canvas
    if pixels.shape[:2] != (height, width):
        raise DimensionMismatch(
            f"La imagen mide {pixels.shape[1]}x{pixels.shape[0]} y el lienzo {width}x{height}"
        )

    alpha = pixels[..., 3].astype(np.float64) / 255.0
    blurred = gaussian_filter(alpha, sigma=blur_sigma, truncate=BLUR_TRUNCATE, mode="constant", cval=0.0)
    foreground = blurred > 0

    if chart_type != ChartType.BAR:
        return ForegroundMask(mask=foreground, derivation=ForegroundDerivation.ALPHA_THRESHOLD)

    for slot in bar_slots(nspec):
        cols = np.flatnonzero(column_mask(width, slot))
        if cols.size == 0:
            continue
        ys, xs = np.nonzero(foreground[:, cols])
        if ys.size == 0:
            continue
        foreground[ys.min():ys.max() + 1, cols[xs.min()]:cols[xs.max()] + 1] = True
    return ForegroundMask(mask=foreground, derivation=ForegroundDerivation.BAR_BOUNDING_BOX)


def sample_band_points(region: np.ndarray, n: int, rng: np.random.Generator) -> PointSet:
    """
    Muestrea `n` celdas verdaderas de `region`, uniformes y con reemplazo.

    Una región vacía devuelve un conjunto vacío, no un error.
    """
    cells = np.flatnonzero(region)
    if cells.size == 0 or n <= 0:
        return np.empty((0, 2), dtype=np.intp)
    picks = cells[rng.integers(0, cells.size, size=n)]
    rows, cols = np.unravel_index(picks, region.shape)
    return np.stack([rows, cols], axis=1)


def _check_dims(mask: ForegroundMask, field: DistanceField) -> None:
    if mask.shape != field.shape:
        raise DimensionMismatch(f"Máscara {mask.shape} y campo {field.shape} no coinciden")


def _f1(precision: float, recall: float, epsilon: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / ((precision + recall) + epsilon)


def _weighted_ratio(counts: List[float], rw: RegionWeights) -> float:
    """Σ w_i·c_i·n_i / Σ w_i·n_i, con c_i la pertenencia graduada de la banda i."""
    counts = np.asarray(counts, dtype=np.float64)
    weights = np.asarray(rw.weights)
    total = float(weights @ counts)
    if total <= 0:
        return 0.0
    return min(1.0, float((weights * np.asarray(rw.credits)) @ counts) / total)


def _sampled_tally(
    source: np.ndarray,
    bands: RegionMasks,
    rw: RegionWeights,
    points_per_band: int,
    rng: np.random.Generator,
) -> Tuple[List[BandTally], float]:
    tallies, estimates = [], []
    for band in range(len(bands)):
        region = bands[band]
        points = sample_band_points(region, points_per_band, rng)
        hits = int(source[points[:, 0], points[:, 1]].sum())
        size = int(region.sum())
        tallies.append(BandTally(
            band_id=band, hits=hits, samples=len(points), region_px=size, weight=rw.weights[band],
        ))
        estimates.append(size * hits / len(points) if len(points) else 0.0)
    return tallies, _weighted_ratio(estimates, rw)


def _exhaustive_tally(
    source: np.ndarray,
    bands: RegionMasks,
    rw: RegionWeights,
) -> Tuple[List[BandTally], float]:
    tallies, counts = [], []
    for band in range(len(bands)):
        region = bands[band]
        hits = int((source & region).sum())
        size = int(region.sum())
        tallies.append(BandTally(band_id=band, hits=hits, samples=size, region_px=size, weight=rw.weights[band]))
        counts.append(float(hits))
    return tallies, _weighted_ratio(counts, rw)


def _empty_report(rw, method, epsilon, **echo) -> FidelityReport:
    tallies = tuple(BandTally(band_id=b, hits=0, samples=0, weight=w) for b, w in enumerate(rw.weights))
    return FidelityReport(
        weighted_precision=0.0,
        weighted_recall=0.0,
        f1=0.0,
        per_band=tallies,
        recall_per_band=tallies,
        method=method,
        band_edges=rw.band_edges,
        weights=rw.weights,
        epsilon=epsilon,
        **echo,
    )


def weighted_f1(
    mask: ForegroundMask,
    field: DistanceField,
    rw: RegionWeights,
    cfg: SamplingConfig = SamplingConfig(),
    blur_sigma: Optional[float] = None,
) -> FidelityReport:
    """
    F1 ponderado por muestreo.

    Muestreo estratificado: en cada banda del campo objetivo se sortean
    `points_per_band` puntos y se cuenta cuántos caen en el primer plano
    (precisión); en cada banda del campo del primer plano, cuántos caen en la
    banda 0 del objetivo (recall). Una banda vacía no sortea nada. Todos los
    sorteos salen, en ese orden, de un único generador.

    Returns:
        FidelityReport: determinista para una misma semilla.
    """
    _check_dims(mask, field)
    echo = dict(
        seed=cfg.rng_seed,
        chart_type=field.chart_type,
        points_per_band=cfg.points_per_band,
        blur_sigma=blur_sigma,
    )
    if not mask.mask.any():
        logger.debug("Primer plano vacío: F1 = 0")
        return _empty_report(rw, FidelityMethod.SAMPLED, cfg.epsilon, **echo)

    rng = np.random.default_rng(cfg.rng_seed)
    target_bands = band_partition(field, rw)
    per_band, precision = _sampled_tally(mask.mask, target_bands, rw, cfg.points_per_band, rng)
    fg_bands = band_partition(foreground_field(mask.mask), rw)
    recall_per_band, recall = _sampled_tally(target_bands[0], fg_bands, rw, cfg.points_per_band, rng)

    return FidelityReport(
        weighted_precision=precision,
        weighted_recall=recall,
        f1=_f1(precision, recall, cfg.epsilon),
        per_band=tuple(per_band),
        recall_per_band=tuple(recall_per_band),
        method=FidelityMethod.SAMPLED,
        band_edges=rw.band_edges,
        weights=rw.weights,
        epsilon=cfg.epsilon,
        **echo,
    )


def exhaustive_f1(
    mask: ForegroundMask,
    field: DistanceField,
    rw: RegionWeights,
    epsilon: float = SamplingConfig().epsilon,
    blur_sigma: Optional[float] = None,
) -> FidelityReport:
    """
    Oráculo: las mismas fórmulas enumerando todos los píxeles, sin semilla.

    Raises:
        SizeLimit: el ráster supera 1024x1024.
    """
    _check_dims(mask, field)
    height, width = field.shape
    if height > EXHAUSTIVE_MAX_PX or width > EXHAUSTIVE_MAX_PX:
        raise SizeLimit(f"El oráculo exhaustivo admite hasta {EXHAUSTIVE_MAX_PX}px por lado")
    echo = dict(chart_type=field.chart_type, blur_sigma=blur_sigma)
    if not mask.mask.any():
        return _empty_report(rw, FidelityMethod.EXHAUSTIVE, epsilon, **echo)

    target_bands = band_partition(field, rw)
    per_band, precision = _exhaustive_tally(mask.mask, target_bands, rw)
    fg_bands = band_partition(foreground_field(mask.mask), rw)
    recall_per_band, recall = _exhaustive_tally(target_bands[0], fg_bands, rw)

    return FidelityReport(
        weighted_precision=precision,
        weighted_recall=recall,
        f1=_f1(precision, recall, epsilon),
        per_band=tuple(per_band),
        recall_per_band=tuple(recall_per_band),
        method=FidelityMethod.EXHAUSTIVE,
        band_edges=rw.band_edges,
        weights=rw.weights,
        epsilon=epsilon,
        **echo,
    )


def score_chart(
    image: RasterImage | np.ndarray,
    spec: ChartSpec,
    rw: Optional[RegionWeights] = None,
    cfg: SamplingConfig = SamplingConfig(),
    exhaustive: bool = False,
    blur_sigma: float = BLUR_SIGMA,
) -> Tuple[FidelityReport, DistanceField]:
    """
    Evalúa una imagen generada contra su especificación.

    Returns:
        Tuple[FidelityReport, DistanceField]: reporte y campo objetivo usado.
    """
    nspec = normalize(spec)
    mask = preprocess_chart(image, spec.chart_type, nspec, blur_sigma=blur_sigma)
    field = build_distance_field(nspec)
    rw = rw or default_region_weights(spec.chart_type, spec.canvas)
    if exhaustive:
        report = exhaustive_f1(mask, field, rw, cfg.epsilon, blur_sigma=blur_sigma)
    else:
        report = weighted_f1(mask, field, rw, cfg, blur_sigma=blur_sigma)
    logger.debug("F1=%.4f (P=%.4f, R=%.4f)", report.f1, report.weighted_precision, report.weighted_recall)
    return report, field


def resolve_region_weights(
    band_edges: Optional[Tuple[float, ...]],
    weights: Optional[Tuple[float, ...]],
    spec: ChartSpec,
) -> RegionWeights:
    """Bandas explícitas si se dieron; si no, las de por defecto escaladas al lienzo de `spec`."""
    if band_edges is None and weights is None:
        return default_region_weights(spec.chart_type, spec.canvas)
    return RegionWeights(band_edges=tuple(band_edges), weights=tuple(weights))
