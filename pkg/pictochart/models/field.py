from dataclasses import dataclass
from enum import Enum

import numpy as np

from pictochart.models.raster import frozen_array
from pictochart.schemas.chart import ChartType


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Distancias no negativas (px) por píxel; `chart_type` None para campos de primer plano."""
    distances: np.ndarray
    chart_type: ChartType | None = None

    def __post_init__(self):
        distances = frozen_array(self.distances, np.float64)
        if distances.ndim != 2:
            raise ValueError("El campo de distancias debe ser 2D")
        if not np.all(np.isfinite(distances)) or np.any(distances < 0):
            raise ValueError("Las distancias deben ser finitas y no negativas")
        object.__setattr__(self, "distances", distances)

    @property
    def shape(self) -> tuple[int, int]:
        return self.distances.shape


@dataclass(frozen=True, eq=False)
class RegionMasks:
    """Una máscara booleana por banda; las bandas particionan el ráster."""
    masks: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "masks", frozen_array(self.masks, bool))

    def __len__(self) -> int:
        return self.masks.shape[0]

    def __getitem__(self, band: int) -> np.ndarray:
        return self.masks[band]

    def counts(self) -> list[int]:
        return [int(mask.sum()) for mask in self.masks]


class ForegroundDerivation(str, Enum):
    ALPHA_THRESHOLD = "alpha_threshold"
    BAR_BOUNDING_BOX = "bar_bounding_box"


@dataclass(frozen=True, eq=False)
class ForegroundMask:
    mask: np.ndarray
    derivation: ForegroundDerivation = ForegroundDerivation.ALPHA_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "mask", frozen_array(self.mask, bool))

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape
