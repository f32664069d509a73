from dataclasses import dataclass

import numpy as np

from pictochart.models.raster import frozen_array


@dataclass(frozen=True, eq=False)
class AttentionBlock:
    """
    Consultas y claves de un bloque de atención multimodal.

    Atributos:
        q_s: consultas del esqueleto, N_S x d_k.
        k_x: claves latentes, N_X x d_k.
        q_x: consultas latentes, N_X x d_k.
        k_r: claves de la referencia (sujeto), N_R x d_k.
    """
    q_s: np.ndarray
    k_x: np.ndarray
    q_x: np.ndarray
    k_r: np.ndarray

    def __post_init__(self):
        for name in ("q_s", "k_x", "q_x", "k_r"):
            matrix = frozen_array(getattr(self, name), np.float64)
            if matrix.ndim != 2:
                raise ValueError(f"{name} debe ser una matriz")
            object.__setattr__(self, name, matrix)
        widths = {m.shape[1] for m in (self.q_s, self.k_x, self.q_x, self.k_r)}
        if len(widths) != 1:
            raise ValueError("Todas las matrices deben compartir d_k")
        if self.q_x.shape[0] != self.k_x.shape[0]:
            raise ValueError("q_x y k_x deben tener N_X filas")

    @property
    def d_k(self) -> int:
        return self.q_s.shape[1]

    @property
    def n_s(self) -> int:
        return self.q_s.shape[0]

    @property
    def n_x(self) -> int:
        return self.k_x.shape[0]

    @property
    def n_r(self) -> int:
        return self.k_r.shape[0]


@dataclass(frozen=True, eq=False)
class GatedWeights:
    """Máscara espacial M (N_X) y atención al sujeto compuerta y renormalizada (N_X x N_R)."""
    mask: np.ndarray
    w_gated: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mask", frozen_array(self.mask, np.float64))
        object.__setattr__(self, "w_gated", frozen_array(self.w_gated, np.float64))
