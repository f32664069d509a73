"""
Campos de distancia a lo largo de la dimensión que codifica el dato.

- Línea: distancia vertical a la polilínea dentro de su rango en x.
- Barras: distancia vertical al tope de la barra dentro de su banda de columnas.
- Torta: distancia euclídea a los radios que separan los sectores.

Los campos se parten en bandas anidadas con un peso cada una.
"""

from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from scipy.ndimage import distance_transform_edt

from pictochart.core.config import (
    DEFAULT_BAND_EDGES,
    DEFAULT_BAND_WEIGHTS,
    FIELD_DUMP_CLAMP_PX,
    FIELD_DUMP_SCALE,
    REFERENCE_RESOLUTION,
)
from pictochart.core.errors import DimensionMismatch
from pictochart.core.logger import MyLogger
from pictochart.models.field import DistanceField, RegionMasks
from pictochart.schemas.chart import ChartType, NormalizedSpec
from pictochart.schemas.fidelity import RegionWeights
from pictochart.services.chart_model import bar_bands, column_mask
from pictochart.services.skeleton import pie_boundary_point
from pictochart.storage.images import write_gray16

logger = MyLogger().get_logger()


def _grid(width: int, height: int) -> Tuple[np.ndarray, np.ndarray]:
    ys, xs = np.mgrid[0:height, 0:width]
    return xs.astype(np.float64), ys.astype(np.float64)


def _outside_cap(width: int, height: int) -> float:
    # mayor que cualquier distancia dentro del lienzo y que el último borde escalado
    return float(width + height)


def _line_field(nspec: NormalizedSpec, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    vx = np.array([v[0] for v in nspec.vertices])
    vy = np.array([v[1] for v in nspec.vertices])
    if len(vx) == 1:
        return np.hypot(xs - vx[0], ys - vy[0])

    curve = np.interp(xs[0], vx, vy)
    inside = (xs[0] >= vx[0]) & (xs[0] <= vx[-1])
    vertical = np.abs(ys - curve[None, :])
    to_first = np.hypot(xs - vx[0], ys - vy[0])
    to_last = np.hypot(xs - vx[-1], ys - vy[-1])
    outside = np.where(xs < vx[0], to_first, to_last)
    return np.where(inside[None, :], vertical, outside)


def _bar_field(nspec: NormalizedSpec, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    height, width = xs.shape
    distances = np.full((height, width), _outside_cap(width, height))
    for bar, band in zip(nspec.bars, bar_bands(nspec)):
        cols = column_mask(width, band)
        top = nspec.baseline_y - bar.bar_height_px
        distances[:, cols] = np.abs(ys[:, cols] - top)
    return distances


def _pie_boundary_angles(nspec: NormalizedSpec) -> np.ndarray:
    angles = []
    for piece in nspec.pie.slices:
        angles.extend([piece.start_angle_rad, piece.end_angle_rad])
    return np.unique(np.round(np.mod(angles, 2 * np.pi), 12))


def _segment_distance(px, py, center, end) -> np.ndarray:
    cx, cy = center
    dx, dy = end[0] - cx, end[1] - cy
    length_sq = dx * dx + dy * dy
    t = np.clip(((px - cx) * dx + (py - cy) * dy) / length_sq, 0.0, 1.0)
    return np.hypot(px - (cx + t * dx), py - (cy + t * dy))


def _pie_field(nspec: NormalizedSpec, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    pie = nspec.pie
    cx, cy = pie.center
    radius = pie.radius_px
    rho = np.hypot(xs - cx, ys - cy)
    outside = rho > radius

    # fuera del disco: proyección radial sobre el borde más el exceso radial
    scale = np.where(outside, radius / np.where(rho > 0, rho, 1.0), 1.0)
    px = cx + (xs - cx) * scale
    py = cy + (ys - cy) * scale

    distances = np.full(xs.shape, np.inf)
    for angle in _pie_boundary_angles(nspec):
        end = pie_boundary_point(pie.center, radius, float(angle))
        distances = np.minimum(distances, _segment_distance(px, py, pie.center, end))
    return distances + np.where(outside, rho - radius, 0.0)


def build_distance_field(nspec: NormalizedSpec, dims: Optional[Tuple[int, int]] = None) -> DistanceField:
    """
    Campo de distancias al conjunto objetivo del tipo de gráfico.

    Args:
        nspec (NormalizedSpec): geometría normalizada.
        dims (Optional[Tuple[int, int]]): (ancho, alto) del ráster de evaluación;
            debe coincidir con el lienzo de `nspec`.

    Returns:
        DistanceField: distancias finitas, cero exactamente sobre el objetivo.
    """
    width, height = nspec.canvas
    if dims is not None and tuple(dims) != (width, height):
        raise DimensionMismatch(f"El ráster {dims} no coincide con el lienzo {nspec.canvas}")
    xs, ys = _grid(width, height)

    if nspec.chart_type == ChartType.LINE:
        distances = _line_field(nspec, xs, ys)
    elif nspec.chart_type == ChartType.BAR:
        distances = _bar_field(nspec, xs, ys)
    else:
        distances = _pie_field(nspec, xs, ys)
    return DistanceField(distances=distances, chart_type=nspec.chart_type)


def foreground_field(mask: np.ndarray) -> DistanceField:
    """Distancia euclídea de cada píxel al primer plano (cero dentro de él)."""
    height, width = mask.shape
    if not mask.any():
        return DistanceField(distances=np.full(mask.shape, _outside_cap(width, height)))
    return DistanceField(distances=distance_transform_edt(~mask))


def default_region_weights(chart_type: ChartType, canvas: Tuple[int, int] = (512, 512)) -> RegionWeights:
    """
    Bandas por defecto: bordes [8, 24, 64] px y pesos [1.0, 0.5, 0.2, 0.05]
    a 512x512, con los bordes escalados al lado menor del lienzo.

    Las tres familias comparten la estructura; cambia sólo el campo del que
    se mide la distancia (polilínea, tope de barra o radios de la torta).
    """
    factor = min(canvas) / REFERENCE_RESOLUTION
    logger.debug("Bandas por defecto para %s escaladas x%.3f", ChartType(chart_type).value, factor)
    return RegionWeights(
        band_edges=tuple(edge * factor for edge in DEFAULT_BAND_EDGES),
        weights=DEFAULT_BAND_WEIGHTS,
    )


def band_partition(field: DistanceField, rw: RegionWeights) -> RegionMasks:
    """
    Asigna cada píxel a la banda i tal que band_edges[i-1] <= d < band_edges[i];
    la última banda recoge todo lo que está más allá del último borde.
    """
    band_ids = np.searchsorted(np.asarray(rw.band_edges), field.distances, side="right")
    masks = np.stack([band_ids == band for band in range(rw.band_count)])
    return RegionMasks(masks=masks)


def dump_field_png(field: DistanceField, path: str | Path) -> None:
    """Vuelca el campo como PNG gris de 16 bits: distancia recortada a 255 px, x256."""
    scaled = np.minimum(field.distances, FIELD_DUMP_CLAMP_PX) * FIELD_DUMP_SCALE
    write_gray16(path, np.rint(scaled).astype(np.uint16))
