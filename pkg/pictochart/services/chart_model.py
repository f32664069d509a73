"""
Servicios del modelo de gráficos.

Este módulo contiene la lógica para:
- Validar documentos JSON de especificación (`parse_spec`)
- Llevar los valores de la serie a geometría de lienzo (`normalize`)
- Calcular las ranuras y bandas de columna de cada barra
"""

import json
import math
from typing import List, Tuple

import numpy as np
from pydantic import ValidationError

from pictochart.core.config import BAR_WIDTH_RATIO, RATIO_DECIMALS
from pictochart.core.errors import SchemaError, SpecValueError
from pictochart.core.logger import MyLogger
from pictochart.schemas.chart import (
    BarAnchor,
    ChartSpec,
    ChartType,
    NormalizedSpec,
    PieGeometry,
    PieSlice,
)

logger = MyLogger().get_logger()

# Errores de pydantic que indican un valor inválido y no un documento mal formado
_VALUE_ERROR_TYPES = {"value_error", "greater_than_equal", "greater_than", "finite_number"}


def parse_spec(text: str) -> ChartSpec:
    """
    Valida un documento JSON de especificación.

    Args:
        text (str): documento con las claves chart_type, series, canvas y plot_margin_px.

    Returns:
        ChartSpec: especificación validada.

    Raises:
        SchemaError: JSON mal formado o campos faltantes, extra o mal tipados.
        SpecValueError: valores negativos o no finitos, serie vacía o torta de suma cero.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"JSON mal formado: {exc.msg} (línea {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise SchemaError("La especificación debe ser un objeto JSON")

    try:
        return ChartSpec.model_validate(data)
    except ValidationError as exc:
        errors = exc.errors()
        detail = "; ".join(f"{'.'.join(map(str, e['loc'])) or 'spec'}: {e['msg']}" for e in errors)
        if all(e["type"] in _VALUE_ERROR_TYPES for e in errors):
            raise SpecValueError(detail) from exc
        raise SchemaError(detail) from exc


def _ratios(values: Tuple[float, ...]) -> List[float]:
    top = max(values)
    return [round(value / top, RATIO_DECIMALS) for value in values]


def normalize(spec: ChartSpec) -> NormalizedSpec:
    """
    Lleva una especificación a geometría en píxeles.

    Sólo se codifican proporciones, por lo que escalar toda la serie por una
    constante positiva produce la misma geometría.
    """
    width, height = spec.canvas
    margin = spec.plot_margin_px
    box = (float(margin), float(margin), float(width - margin), float(height - margin))
    plot_width = box[2] - box[0]
    plot_height = box[3] - box[1]
    values = spec.values
    count = len(values)
    common = dict(chart_type=spec.chart_type, canvas=spec.canvas, plot_margin_px=margin, plot_box=box)

    if spec.chart_type == ChartType.BAR:
        slot = plot_width / count
        bars = tuple(
            BarAnchor(x_center_px=box[0] + (i + 0.5) * slot, bar_height_px=ratio * plot_height)
            for i, ratio in enumerate(_ratios(values))
        )
        return NormalizedSpec(**common, bars=bars)

    if spec.chart_type == ChartType.LINE:
        if count == 1:
            xs = [box[0] + plot_width / 2]
        else:
            xs = [box[0] + i * plot_width / (count - 1) for i in range(count)]
        vertices = tuple(
            (x, box[3] - ratio * plot_height) for x, ratio in zip(xs, _ratios(values))
        )
        return NormalizedSpec(**common, vertices=vertices)

    # Torta: los ángulos salen de fracciones acumuladas, así el fin de un
    # sector es exactamente el inicio del siguiente y el último cierra en 2π.
    total = math.fsum(values)
    fractions = [round(math.fsum(values[:k]) / total, RATIO_DECIMALS) for k in range(count)] + [1.0]
    angles = [fraction * 2 * math.pi for fraction in fractions]
    slices = tuple(
        PieSlice(start_angle_rad=angles[k], end_angle_rad=angles[k + 1]) for k in range(count)
    )
    pie = PieGeometry(
        center=(box[0] + plot_width / 2, box[1] + plot_height / 2),
        radius_px=min(plot_width, plot_height) / 2,
        slices=slices,
    )
    logger.debug("Torta normalizada con %d sectores", count)
    return NormalizedSpec(**common, pie=pie)


def bar_slots(nspec: NormalizedSpec) -> List[Tuple[float, float]]:
    """Ranuras [izquierda, derecha) de cada barra a lo ancho del área de trazado."""
    if nspec.bars is None:
        return []
    slot = nspec.plot_width / len(nspec.bars)
    left = nspec.plot_box[0]
    return [(left + i * slot, left + (i + 1) * slot) for i in range(len(nspec.bars))]


def bar_bands(nspec: NormalizedSpec) -> List[Tuple[float, float]]:
    """Bandas [izquierda, derecha) ocupadas por cada barra: el 70% central de su ranura."""
    if nspec.bars is None:
        return []
    half = BAR_WIDTH_RATIO * nspec.plot_width / len(nspec.bars) / 2
    return [(bar.x_center_px - half, bar.x_center_px + half) for bar in nspec.bars]


def column_mask(width: int, bounds: Tuple[float, float]) -> np.ndarray:
    """Columnas de píxel cuyo centro cae en [izquierda, derecha)."""
    cols = np.arange(width, dtype=np.float64)
    return (cols >= bounds[0]) & (cols < bounds[1])
