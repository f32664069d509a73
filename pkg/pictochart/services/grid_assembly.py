"""
Ensamblado por grillas de una imagen de referencia.

Este módulo contiene la lógica para:
- Dividir la imagen en K franjas horizontales
- Calcular el SSIM entre franjas (luma, ventana gaussiana σ=1.5)
- Ordenar las franjas por editabilidad (SSIM medio descendente)
- Replicar o quitar franjas hasta alcanzar una altura objetivo
"""

import math
from itertools import combinations
from typing import List, Sequence

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from pictochart.core.config import (
    SSIM_DATA_RANGE,
    SSIM_K1,
    SSIM_K2,
    SSIM_SIGMA,
    SSIM_TRUNCATE,
)
from pictochart.core.errors import DimensionMismatch, TargetTooSmall, TooSmall
from pictochart.core.logger import MyLogger
from pictochart.models.assembly import AssemblyResult
from pictochart.models.raster import RasterImage
from pictochart.schemas.assembly import AssemblyOp, GridPlan, Remove, Replicate

logger = MyLogger().get_logger()

_LUMA = np.array([0.299, 0.587, 0.114])


def luma(image: RasterImage | np.ndarray) -> np.ndarray:
    """Gris Rec.601 premultiplicado por alfa; un arreglo 2D se toma como luma ya calculada."""
    pixels = image.pixels if isinstance(image, RasterImage) else np.asarray(image)
    if pixels.ndim == 2:
        return pixels.astype(np.float64)
    rgba = pixels.astype(np.float64)
    return (rgba[..., :3] @ _LUMA) * rgba[..., 3] / 255.0


def _window_radius() -> int:
    return int(SSIM_TRUNCATE * SSIM_SIGMA + 0.5)


def ssim(a: RasterImage | np.ndarray, b: RasterImage | np.ndarray) -> float:
    """
    SSIM con ventana gaussiana de 11x11 (σ=1.5) y covarianza poblacional.

    El promedio excluye un borde del radio de la ventana, salvo en franjas
    de 10 px o menos.

    Raises:
        DimensionMismatch: las dos entradas no miden lo mismo.
    """
    x, y = luma(a), luma(b)
    if x.shape != y.shape:
        raise DimensionMismatch(f"SSIM sobre formas distintas: {x.shape} y {y.shape}")

    def blur(values: np.ndarray) -> np.ndarray:
        return gaussian_filter(values, sigma=SSIM_SIGMA, truncate=SSIM_TRUNCATE, mode="reflect")

    c1 = (SSIM_K1 * SSIM_DATA_RANGE) ** 2
    c2 = (SSIM_K2 * SSIM_DATA_RANGE) ** 2
    ux, uy = blur(x), blur(y)
    vx = blur(x * x) - ux * ux
    vy = blur(y * y) - uy * uy
    vxy = blur(x * y) - ux * uy
    ssim_map = ((2 * ux * uy + c1) * (2 * vxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2))

    pad = _window_radius()
    if min(ssim_map.shape) > 2 * pad:
        ssim_map = ssim_map[pad:-pad, pad:-pad]
    return float(ssim_map.mean(dtype=np.float64))


def split_grids(image: RasterImage, k: int) -> List[RasterImage]:
    """
    Divide la imagen en `k` franjas horizontales.

    Todas miden ⌊H/k⌋ salvo la última, que se lleva el resto.

    Raises:
        TooSmall: la imagen tiene menos de `k` filas.
    """
    if k < 1 or image.height < k:
        raise TooSmall(f"No se pueden sacar {k} grillas de {image.height} filas")
    step = image.height // k
    bounds = [i * step for i in range(k)] + [image.height]
    return [RasterImage(image.pixels[top:bottom]) for top, bottom in zip(bounds, bounds[1:])]


def editability_ranking(grids: Sequence[RasterImage]) -> GridPlan:
    """
    Ordena las franjas por SSIM medio contra las demás (descendente, empates por id).

    Las franjas de distinta altura se comparan sobre sus filas superiores comunes.

    Raises:
        TooSmall: hay menos de dos franjas.
    """
    k = len(grids)
    if k < 2:
        raise TooSmall("El ranking necesita al menos dos grillas")
    common = min(grid.height for grid in grids)
    lumas = [luma(grid)[:common] for grid in grids]

    scores = np.zeros((k, k))
    for i, j in combinations(range(k), 2):
        scores[i, j] = scores[j, i] = ssim(lumas[i], lumas[j])
    mean_ssim = scores.sum(axis=1) / (k - 1)
    ranking = sorted(range(k), key=lambda g: (-mean_ssim[g], g))
    logger.debug("SSIM medio por grilla: %s", np.round(mean_ssim, 4).tolist())
    return GridPlan(
        k=k,
        grid_height_px=grids[0].height,
        ranking=tuple(ranking),
        mean_ssim=tuple(float(v) for v in mean_ssim),
    )


def plan_grids(image: RasterImage, k: int) -> GridPlan:
    return editability_ranking(split_grids(image, k))


def _resize_height(pixels: np.ndarray, height: int) -> np.ndarray:
    resized = Image.fromarray(np.ascontiguousarray(pixels)).resize(
        (pixels.shape[1], height), Image.Resampling.BILINEAR
    )
    return np.asarray(resized, dtype=np.uint8)


def assemble_to_height(image: RasterImage, plan: GridPlan, target_height_px: int) -> AssemblyResult:
    """
    Lleva la imagen a `target_height_px` editando sólo la dimensión vertical.

    - Crecer: copias de la grilla mejor rankeada, contiguas a ella, hasta
      alcanzar o pasar el objetivo.
    - Achicar: se quitan grillas desde el final del ranking (nunca la
      primera) hasta quedar en o por debajo del objetivo.
    - Diferencias menores a media grilla: sólo redimensionado.

    Al final un redimensionado bilineal fija la altura exacta.

    Raises:
        DimensionMismatch: el plan no corresponde a la imagen.
        TargetTooSmall: el objetivo es menor que una grilla.
    """
    grids = split_grids(image, plan.k)
    if grids[0].height != plan.grid_height_px:
        raise DimensionMismatch("El plan de grillas no corresponde a esta imagen")
    if target_height_px < plan.grid_height_px:
        raise TargetTooSmall(
            f"La altura objetivo {target_height_px} es menor que una grilla ({plan.grid_height_px}px)"
        )
    if target_height_px == image.height:
        return AssemblyResult(image=image, ops_log=(), achieved_height_px=image.height)

    ops: List[AssemblyOp] = []
    order = list(range(plan.k))
    diff = target_height_px - image.height
    if abs(diff) >= plan.grid_height_px / 2:
        if diff > 0:
            top = plan.top
            count = math.ceil(diff / grids[top].height)
            position = order.index(top)
            order[position + 1:position + 1] = [top] * count
            ops.append(Replicate(grid_id=top, count=count))
        else:
            height = image.height
            for grid_id in reversed(plan.ranking[1:]):
                if height <= target_height_px:
                    break
                order.remove(grid_id)
                height -= grids[grid_id].height
                ops.append(Remove(grid_id=grid_id))

    pixels = np.concatenate([grids[g].pixels for g in order], axis=0)
    resized_from = None
    if pixels.shape[0] != target_height_px:
        resized_from = pixels.shape[0]
        pixels = _resize_height(pixels, target_height_px)
    logger.debug("Ensamblado %d -> %d px con %d operaciones", image.height, target_height_px, len(ops))
    return AssemblyResult(
        image=RasterImage(pixels),
        ops_log=tuple(ops),
        achieved_height_px=pixels.shape[0],
        resized_from_px=resized_from,
    )
