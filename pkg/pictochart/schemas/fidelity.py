"""
Esquemas de la métrica de fidelidad de datos.

- RegionWeights: bordes de banda de distancia y un peso por banda
- SamplingConfig: puntos por banda, semilla y epsilon
- FidelityReport: precisión/recall/F1 ponderados con el eco de la configuración
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pictochart.core.config import DEFAULT_SEED, EPSILON, MIN_POINTS_PER_BAND, POINTS_PER_BAND
from pictochart.schemas.chart import ChartType


class RegionWeights(BaseModel):
    """
    Atributos:
        band_edges (Tuple[float, ...]): umbrales de distancia estrictamente crecientes (px).
        weights (Tuple[float, ...]): un peso positivo por banda más uno para "más allá del último borde".
    """
    band_edges: Tuple[float, ...] = Field(..., min_length=1)
    weights: Tuple[float, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validar_bandas(self):
        edges = self.band_edges
        if edges[0] <= 0:
            raise ValueError("El primer borde de banda debe ser positivo")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("Los bordes de banda deben ser estrictamente crecientes")
        if len(self.weights) != len(edges) + 1:
            raise ValueError("Se necesita un peso por banda más uno para la región exterior")
        if any(w <= 0 for w in self.weights):
            raise ValueError("Todos los pesos deben ser positivos")
        return self

    @property
    def band_count(self) -> int:
        return len(self.weights)

    @property
    def credits(self) -> Tuple[float, ...]:
        """
        Pertenencia graduada a S por banda: (w_i - w_ultima) / (w_0 - w_ultima),
        recortada a [0, 1]. Vale 1 en la banda 0 y 0 más allá del último borde.
        Con w_0 == w_ultima sólo la banda 0 cuenta.
        """
        first, last = self.weights[0], self.weights[-1]
        if first == last:
            return (1.0,) + (0.0,) * (len(self.weights) - 1)
        return tuple(min(1.0, max(0.0, (w - last) / (first - last))) for w in self.weights)

    def scaled(self, factor: float) -> "RegionWeights":
        return RegionWeights(band_edges=tuple(e * factor for e in self.band_edges), weights=self.weights)


class SamplingConfig(BaseModel):
    points_per_band: int = Field(default=POINTS_PER_BAND, ge=MIN_POINTS_PER_BAND)
    rng_seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    epsilon: float = Field(default=EPSILON, gt=0)

    model_config = ConfigDict(frozen=True)


class FidelityMethod(str, Enum):
    SAMPLED = "sampled"
    EXHAUSTIVE = "exhaustive"


class BandTally(BaseModel):
    """
    Conteo de una banda: `samples` puntos sorteados en la banda (todos sus
    píxeles en modo exhaustivo), `hits` de ellos dentro del conjunto fuente.
    `region_px` es el tamaño de la banda; `region_px * hits / samples` estima
    cuántos píxeles del conjunto fuente caen en ella.
    """
    band_id: int
    hits: int = Field(..., ge=0)
    samples: int = Field(..., ge=0)
    region_px: int = Field(default=0, ge=0)
    weight: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validar_conteo(self):
        if self.hits > self.samples:
            raise ValueError("hits no puede superar samples")
        return self


class FidelityReport(BaseModel):
    """
    Resultado de la métrica F1 ponderada.

    `per_band` describe los estratos de precisión (bandas del campo objetivo);
    `recall_per_band` los de recall (bandas del campo del primer plano).
    El resto de campos repite la configuración para poder reproducir el puntaje.
    """
    weighted_precision: float = Field(..., ge=0, le=1)
    weighted_recall: float = Field(..., ge=0, le=1)
    f1: float = Field(..., ge=0, le=1)
    per_band: Tuple[BandTally, ...]
    recall_per_band: Tuple[BandTally, ...] = ()
    method: FidelityMethod
    seed: Optional[int] = None
    chart_type: Optional[ChartType] = None
    band_edges: Tuple[float, ...]
    weights: Tuple[float, ...]
    epsilon: float
    points_per_band: Optional[int] = None
    blur_sigma: Optional[float] = None

    model_config = ConfigDict(frozen=True)
