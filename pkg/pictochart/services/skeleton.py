"""
Servicios del esqueleto de control.

Un esqueleto codifica sólo la dimensión que lleva el dato:
- barras: una línea vertical por barra, desde la base hasta la altura
- línea: una polilínea por todos los vértices
- torta: dos radios por sector (inicio en rojo, fin en verde), en sentido horario
"""

import math
from typing import Iterable, Tuple

import numpy as np
from skimage.draw import line as bresenham_line

from pictochart.core.config import (
    BAR_LINE_COLOR,
    SLICE_END_COLOR,
    SLICE_START_COLOR,
    TREND_LINE_COLOR,
)
from pictochart.core.logger import MyLogger
from pictochart.models.raster import RasterImage
from pictochart.schemas.chart import ChartType, NormalizedSpec
from pictochart.schemas.skeleton import (
    Background,
    IndexSet,
    RasterConfig,
    SkeletonGeometry,
    Stroke,
    StrokeRole,
)

logger = MyLogger().get_logger()

SUPERSAMPLING = 4


def pie_boundary_point(center: Tuple[float, float], radius: float, angle: float) -> Tuple[float, float]:
    """Punto del borde del disco a `angle` radianes, horario desde las 12 en punto."""
    cx, cy = center
    return (cx + radius * math.sin(angle), cy - radius * math.cos(angle))


def build_skeleton_geometry(nspec: NormalizedSpec) -> SkeletonGeometry:
    """
    Construye las primitivas del esqueleto para un gráfico normalizado.

    Returns:
        SkeletonGeometry: un trazo por barra, una polilínea o dos radios por sector.
    """
    if nspec.chart_type == ChartType.BAR:
        base = nspec.baseline_y
        strokes = tuple(
            Stroke(
                polyline=((bar.x_center_px, base), (bar.x_center_px, base - bar.bar_height_px)),
                color=BAR_LINE_COLOR,
                role=StrokeRole.BAR_LINE,
            )
            for bar in nspec.bars
        )
    elif nspec.chart_type == ChartType.LINE:
        strokes = (Stroke(polyline=nspec.vertices, color=TREND_LINE_COLOR, role=StrokeRole.TREND_LINE),)
    else:
        pie = nspec.pie
        strokes = []
        for piece in pie.slices:
            strokes.append(Stroke(
                polyline=(pie.center, pie_boundary_point(pie.center, pie.radius_px, piece.start_angle_rad)),
                color=SLICE_START_COLOR,
                role=StrokeRole.SLICE_START,
            ))
            strokes.append(Stroke(
                polyline=(pie.center, pie_boundary_point(pie.center, pie.radius_px, piece.end_angle_rad)),
                color=SLICE_END_COLOR,
                role=StrokeRole.SLICE_END,
            ))
        strokes = tuple(strokes)

    return SkeletonGeometry(chart_type=nspec.chart_type, canvas=nspec.canvas, primitives=strokes)


def _to_pixel(value: float) -> int:
    return int(math.floor(value + 0.5))


def _stroke_pixels(
    polyline: Iterable[Tuple[float, float]],
    stroke_px: int,
    width: int,
    height: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Filas y columnas cubiertas por un trazo sin suavizado.

    Cada segmento se recorre con Bresenham; el recorrido es semiabierto
    (excluye el primer vértice de la polilínea) y cada píxel se ensancha
    `stroke_px` píxeles sólo a lo ancho del segmento (en columnas si el tramo
    es más alto que ancho, en filas si no). El trazo no se alarga en sus
    extremos.
    """
    points = [(_to_pixel(y), _to_pixel(x)) for x, y in polyline]
    if len(set(points)) < 2:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)

    offsets = np.arange(stroke_px) - stroke_px // 2
    rows, cols = [], []
    for index, ((r0, c0), (r1, c1)) in enumerate(zip(points, points[1:])):
        rr, cc = bresenham_line(r0, c0, r1, c1)
        if index == 0:
            # el primer vértice queda fuera: una barra de altura h cubre h filas
            rr, cc = rr[1:], cc[1:]
        if abs(r1 - r0) >= abs(c1 - c0):
            rows.append(np.repeat(rr, stroke_px))
            cols.append((cc[:, None] + offsets).ravel())
        else:
            rows.append((rr[:, None] + offsets).ravel())
            cols.append(np.repeat(cc, stroke_px))

    rr = np.concatenate(rows)
    cc = np.concatenate(cols)
    inside = (rr >= 0) & (rr < height) & (cc >= 0) & (cc < width)
    return rr[inside], cc[inside]


def _blank(width: int, height: int, bg: Background) -> np.ndarray:
    pixels = np.zeros((height, width, 4), dtype=np.uint8)
    if bg == Background.WHITE:
        pixels[...] = 255
    return pixels


def _rasterize_supersampled(geom: SkeletonGeometry, cfg: RasterConfig) -> RasterImage:
    """Suavizado: se dibuja a 4x y se promedia la cobertura por píxel."""
    width, height = geom.canvas
    s = SUPERSAMPLING
    coverage = np.zeros((height * s, width * s), dtype=bool)
    colors = np.zeros((height * s, width * s, 3), dtype=np.float64)
    for stroke in geom.primitives:
        scaled = [((x + 0.5) * s - 0.5, (y + 0.5) * s - 0.5) for x, y in stroke.polyline]
        rr, cc = _stroke_pixels(scaled, cfg.stroke_px * s, width * s, height * s)
        coverage[rr, cc] = True
        colors[rr, cc] = stroke.color

    cov = coverage.reshape(height, s, width, s).mean(axis=(1, 3))
    color_sum = colors.reshape(height, s, width, s, 3).sum(axis=(1, 3))
    counts = coverage.reshape(height, s, width, s).sum(axis=(1, 3))[..., None]
    mean_color = np.divide(color_sum, counts, out=np.zeros_like(color_sum), where=counts > 0)

    pixels = _blank(width, height, cfg.bg).astype(np.float64)
    if cfg.bg == Background.WHITE:
        pixels[..., :3] = cov[..., None] * mean_color + (1 - cov[..., None]) * 255
    else:
        pixels[..., :3] = mean_color
        pixels[..., 3] = cov * 255
    return RasterImage(np.rint(pixels).astype(np.uint8))


def rasterize_skeleton(geom: SkeletonGeometry, cfg: RasterConfig = RasterConfig()) -> RasterImage:
    """
    Rasteriza el esqueleto en una imagen RGBA del tamaño del lienzo.

    Sin suavizado (por defecto) cada píxel es fondo o color de trazo, así
    el primer plano se identifica sin ambigüedad. Los trazos se pintan en
    orden; los posteriores sobrescriben a los anteriores.
    """
    if cfg.antialias:
        return _rasterize_supersampled(geom, cfg)

    width, height = geom.canvas
    pixels = _blank(width, height, cfg.bg)
    for stroke in geom.primitives:
        rr, cc = _stroke_pixels(stroke.polyline, cfg.stroke_px, width, height)
        pixels[rr, cc, :3] = stroke.color
        pixels[rr, cc, 3] = 255
    logger.debug("Esqueleto %s rasterizado con %d trazos", geom.chart_type.value, len(geom.primitives))
    return RasterImage(pixels)


def skeleton_token_indices(raster: RasterImage, latent_dims: Tuple[int, int]) -> IndexSet:
    """
    Índices de tokens latentes cubiertos por el primer plano del esqueleto.

    Cada píxel (y, x) cae en la celda (y * filas // alto, x * columnas // ancho);
    una celda se incluye si recibe al menos un píxel coloreado. Los índices
    se aplanan en orden fila mayor.
    """
    rows, cols = latent_dims
    ys, xs = np.nonzero(raster.foreground())
    cell_rows = ys * rows // raster.height
    cell_cols = xs * cols // raster.width
    flat = np.unique(cell_rows * cols + cell_cols)
    return IndexSet(indices=tuple(int(i) for i in flat), grid_dims=(rows, cols))
