from dataclasses import dataclass
from typing import Tuple

from pictochart.models.raster import RasterImage
from pictochart.schemas.assembly import AssemblyOp


@dataclass(frozen=True)
class AssemblyResult:
    """
    Imagen ensamblada y registro de operaciones.

    `resized_from_px` es la altura previa al redimensionado final, o None si
    no hizo falta redimensionar.
    """
    image: RasterImage
    ops_log: Tuple[AssemblyOp, ...]
    achieved_height_px: int
    resized_from_px: int | None = None
