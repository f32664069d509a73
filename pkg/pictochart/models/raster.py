from dataclasses import dataclass

import numpy as np


def frozen_array(values, dtype=None) -> np.ndarray:
    """Copia `values` como arreglo de sólo lectura."""
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Imagen RGBA de 8 bits por canal, forma (alto, ancho, 4)."""
    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 4:
            raise ValueError("RasterImage espera una grilla RGBA (alto, ancho, 4)")
        object.__setattr__(self, "pixels", frozen_array(self.pixels, np.uint8))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def alpha(self) -> np.ndarray:
        return self.pixels[..., 3]

    def foreground(self) -> np.ndarray:
        """Píxeles coloreados: alfa positivo y RGB distinto de blanco puro."""
        rgb = self.pixels[..., :3]
        return (self.alpha > 0) & ~np.all(rgb == 255, axis=-1)

    def __eq__(self, other):
        return isinstance(other, RasterImage) and np.array_equal(self.pixels, other.pixels)

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()
