from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GridPlan(BaseModel):
    """
    Ranking de editabilidad de las grillas horizontales de una imagen.

    Atributos:
        k (int): cantidad de grillas.
        grid_height_px (int): altura nominal de cada grilla (división entera).
        ranking (Tuple[int, ...]): ids de grilla por SSIM medio descendente.
        mean_ssim (Tuple[float, ...]): SSIM medio de cada grilla contra las demás.
    """
    k: int = Field(..., ge=1)
    grid_height_px: int = Field(..., ge=1)
    ranking: Tuple[int, ...]
    mean_ssim: Tuple[float, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validar_ranking(self):
        if sorted(self.ranking) != list(range(self.k)):
            raise ValueError("El ranking debe ser una permutación de 0..K-1")
        if len(self.mean_ssim) != self.k:
            raise ValueError("Se necesita un SSIM medio por grilla")
        return self

    @property
    def top(self) -> int:
        return self.ranking[0]


class Replicate(BaseModel):
    op: Literal["replicate"] = "replicate"
    grid_id: int
    count: int = Field(..., ge=1)

    model_config = ConfigDict(frozen=True)


class Remove(BaseModel):
    op: Literal["remove"] = "remove"
    grid_id: int

    model_config = ConfigDict(frozen=True)


AssemblyOp = Annotated[Union[Replicate, Remove], Field(discriminator="op")]


class AssemblyLog(BaseModel):
    """Registro serializable de un ensamblado: plan, operaciones y alturas."""
    plan: GridPlan
    source_height_px: int
    ops_log: List[AssemblyOp]
    achieved_height_px: int
    resized_from_px: Optional[int] = None
