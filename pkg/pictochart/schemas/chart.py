"""
Esquemas de la especificación de gráficos.

Contiene `ChartSpec` (documento de entrada validado) y `NormalizedSpec`
(geometría en píxeles derivada de la especificación):
- ChartSpec: tipo de gráfico, serie de datos y lienzo
- NormalizedSpec: anclas por tipo (barras, vértices de línea o sectores de torta)
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, field_validator, model_validator

from pictochart.core.config import DEFAULT_CANVAS, DEFAULT_MARGIN_PX, MIN_CANVAS_PX


class ChartType(str, Enum):
    BAR = "bar"
    LINE = "line"
    PIE = "pie"


class ChartSpec(BaseModel):
    """
    Especificación declarativa de un gráfico de una sola serie.

    Atributos:
        chart_type (ChartType): bar, line o pie.
        series (Tuple[Tuple[str, float], ...]): pares (etiqueta, valor), valores finitos >= 0.
        canvas (Tuple[int, int]): ancho y alto del lienzo en píxeles.
        plot_margin_px (int): margen alrededor del área de trazado.
    """
    chart_type: ChartType = Field(..., description="Tipo de gráfico: bar, line o pie")
    series: Tuple[Tuple[str, FiniteFloat], ...] = Field(..., description="Pares [etiqueta, valor]")
    canvas: Tuple[int, int] = Field(default=DEFAULT_CANVAS, description="[ancho, alto] en píxeles")
    plot_margin_px: int = Field(default=DEFAULT_MARGIN_PX, ge=0, description="Margen del área de trazado")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("series")
    @classmethod
    def validar_serie(cls, series):
        if not series:
            raise ValueError("La serie no puede estar vacía")
        for label, value in series:
            if value < 0:
                raise ValueError(f"Valor negativo en la serie: {label!r}={value}")
        if not any(value > 0 for _, value in series):
            raise ValueError("La serie necesita al menos un valor positivo (torta de suma cero)")
        return series

    @field_validator("canvas")
    @classmethod
    def validar_lienzo(cls, canvas):
        width, height = canvas
        if width < MIN_CANVAS_PX or height < MIN_CANVAS_PX:
            raise ValueError(f"El lienzo debe medir al menos {MIN_CANVAS_PX} px por lado")
        return canvas

    @model_validator(mode="after")
    def validar_margen(self):
        if 2 * self.plot_margin_px >= min(self.canvas):
            raise ValueError("El margen debe ser menor que la mitad del lado menor del lienzo")
        return self

    @property
    def values(self) -> Tuple[float, ...]:
        return tuple(value for _, value in self.series)


class BarAnchor(BaseModel):
    x_center_px: float
    bar_height_px: float

    model_config = ConfigDict(frozen=True)


class PieSlice(BaseModel):
    """Ángulos en radianes, horarios desde las 12 en punto."""
    start_angle_rad: float
    end_angle_rad: float

    model_config = ConfigDict(frozen=True)

    @property
    def span(self) -> float:
        return self.end_angle_rad - self.start_angle_rad


class PieGeometry(BaseModel):
    center: Tuple[float, float]
    radius_px: float
    slices: Tuple[PieSlice, ...]

    model_config = ConfigDict(frozen=True)


class NormalizedSpec(BaseModel):
    """
    Geometría normalizada de un gráfico.

    Sólo uno de `bars`, `vertices` o `pie` está presente según `chart_type`.
    `plot_box` es (izquierda, arriba, derecha, abajo) en coordenadas continuas;
    la línea base de las barras es `plot_box[3]`.
    """
    chart_type: ChartType
    canvas: Tuple[int, int]
    plot_margin_px: int
    plot_box: Tuple[float, float, float, float]
    bars: Optional[Tuple[BarAnchor, ...]] = None
    vertices: Optional[Tuple[Tuple[float, float], ...]] = None
    pie: Optional[PieGeometry] = None

    model_config = ConfigDict(frozen=True)

    @property
    def plot_width(self) -> float:
        return self.plot_box[2] - self.plot_box[0]

    @property
    def plot_height(self) -> float:
        return self.plot_box[3] - self.plot_box[1]

    @property
    def baseline_y(self) -> float:
        return self.plot_box[3]
