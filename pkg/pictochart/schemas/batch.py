"""
Esquemas de la superficie por lotes.

- BatchRow / BatchManifest: filas (imagen, especificación, tipo opcional)
- RunConfig: configuración de una corrida; por defecto replica los valores de cada módulo
- BatchResult: una fila del CSV de salida
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pictochart.core.config import (
    DEFAULT_BETA,
    DEFAULT_GRID_COUNT,
    DEFAULT_LATENT_DIMS,
    DEFAULT_SEED,
    DEFAULT_STROKE_PX,
    DEFAULT_WORKERS,
    EPSILON,
    MIN_POINTS_PER_BAND,
    POINTS_PER_BAND,
)
from pictochart.schemas.attention import MaskNormalization
from pictochart.schemas.chart import ChartType
from pictochart.schemas.skeleton import Background


class BatchRow(BaseModel):
    image_path: str = Field(..., min_length=1)
    spec_path: str = Field(..., min_length=1)
    chart_type: Optional[ChartType] = None

    model_config = ConfigDict(frozen=True)


class BatchManifest(BaseModel):
    rows: Tuple[BatchRow, ...] = ()

    model_config = ConfigDict(frozen=True)


class RunConfig(BaseModel):
    """
    Configuración de una corrida de la CLI.

    `band_edges` y `weights` en None significan "valores por defecto del
    tipo de gráfico, escalados a la resolución del lienzo".
    """
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    points_per_band: int = Field(default=POINTS_PER_BAND, ge=MIN_POINTS_PER_BAND)
    band_edges: Optional[List[float]] = None
    weights: Optional[List[float]] = None
    epsilon: float = Field(default=EPSILON, gt=0)
    stroke_px: int = Field(default=DEFAULT_STROKE_PX, ge=1)
    bg: Background = Background.TRANSPARENT
    beta: float = Field(default=DEFAULT_BETA, ge=0, le=1)
    mask_normalization: MaskNormalization = MaskNormalization.MAX_NORM
    k: int = Field(default=DEFAULT_GRID_COUNT, ge=1)
    latent_dims: Tuple[int, int] = DEFAULT_LATENT_DIMS
    parallelism: int = Field(default=DEFAULT_WORKERS, ge=1)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def validar_bandas(self):
        if (self.band_edges is None) != (self.weights is None):
            raise ValueError("band_edges y weights se configuran juntos")
        return self


class BatchResult(BaseModel):
    path: str
    chart_type: Optional[ChartType] = None
    f1: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    seed: int
    status: str = "ok"
    band_edges: Tuple[float, ...] = ()
    weights: Tuple[float, ...] = ()
    points_per_band: int
    blur_sigma: float
    epsilon: float

    model_config = ConfigDict(frozen=True)
