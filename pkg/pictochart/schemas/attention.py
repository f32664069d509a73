from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from pictochart.core.config import DEFAULT_BETA
from pictochart.schemas.skeleton import IndexSet


class MaskNormalization(str, Enum):
    MAX_NORM = "max_norm"
    CLAMP_ONE = "clamp_one"


class GateMode(str, Enum):
    PROBABILITIES = "probabilities"
    LOGIT_BIAS = "logit_bias"


class GateConfig(BaseModel):
    """
    Atributos:
        beta (float): expresividad del sujeto fuera de la máscara, en [0, 1].
        index_set (IndexSet): tokens del esqueleto cubiertos por trazos (I_S).
        mask_normalization (MaskNormalization): cómo llevar M a [0, 1].
    """
    beta: float = Field(default=DEFAULT_BETA, ge=0, le=1)
    index_set: IndexSet
    mask_normalization: MaskNormalization = MaskNormalization.MAX_NORM

    model_config = ConfigDict(frozen=True)
