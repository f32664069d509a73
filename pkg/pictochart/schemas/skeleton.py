from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pictochart.core.config import DEFAULT_STROKE_PX
from pictochart.schemas.chart import ChartType


class StrokeRole(str, Enum):
    BAR_LINE = "bar_line"
    TREND_LINE = "trend_line"
    SLICE_START = "slice_start"
    SLICE_END = "slice_end"


class Stroke(BaseModel):
    polyline: Tuple[Tuple[float, float], ...] = Field(..., min_length=1, description="Puntos (x, y) en píxeles")
    color: Tuple[int, int, int]
    role: StrokeRole

    model_config = ConfigDict(frozen=True)


class SkeletonGeometry(BaseModel):
    """Primitivas vectoriales del esqueleto de un gráfico."""
    chart_type: ChartType
    canvas: Tuple[int, int]
    primitives: Tuple[Stroke, ...]

    model_config = ConfigDict(frozen=True)

    def by_role(self, role: StrokeRole) -> Tuple[Stroke, ...]:
        return tuple(stroke for stroke in self.primitives if stroke.role == role)


class Background(str, Enum):
    TRANSPARENT = "transparent"
    WHITE = "white"


class RasterConfig(BaseModel):
    stroke_px: int = Field(default=DEFAULT_STROKE_PX, ge=1, description="Grosor del trazo en píxeles")
    bg: Background = Field(default=Background.TRANSPARENT)
    antialias: bool = Field(default=False, description="Suavizado por supermuestreo 4x")

    model_config = ConfigDict(frozen=True)


class IndexSet(BaseModel):
    """
    Índices (fila mayor) de celdas de una grilla de tokens.

    Atributos:
        indices (Tuple[int, ...]): ordenados y sin repetir.
        grid_dims (Tuple[int, int]): (filas, columnas) de la grilla.
    """
    indices: Tuple[int, ...]
    grid_dims: Tuple[int, int]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validar_indices(self):
        rows, cols = self.grid_dims
        if rows < 1 or cols < 1:
            raise ValueError("La grilla debe tener al menos una fila y una columna")
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("Los índices deben estar ordenados y sin repetir")
        if self.indices and (self.indices[0] < 0 or self.indices[-1] >= rows * cols):
            raise ValueError("Índice fuera de la grilla")
        return self

    @property
    def size(self) -> int:
        return self.grid_dims[0] * self.grid_dims[1]

    def __len__(self) -> int:
        return len(self.indices)
