"""
Atención con compuerta espacial (cálculo numérico independiente).

Flujo completo:
    W_{S→X} = softmax(Q_S K_Xᵀ / √d_k)
    M_j     = Σ_{i ∈ I_S} W_{S→X}[i, j], normalizado a [0, 1]
    W'      = (M + β(1 − M)) ⊙ W_{X→R}
    W_gated = renormalización por filas de W'

La compuerta multiplica cada fila por un escalar, así que para β > 0 la
renormalización devuelve exactamente W_{X→R}; sólo con β = 0 las filas con
M_j = 0 cambian (pasan a uniformes).
"""

from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from pictochart.core.errors import DimensionMismatch, NonFiniteInput
from pictochart.core.logger import MyLogger
from pictochart.models.attention import AttentionBlock, GatedWeights
from pictochart.schemas.attention import GateConfig, GateMode, MaskNormalization

logger = MyLogger().get_logger()


def _require_finite(**matrices: np.ndarray) -> None:
    for name, matrix in matrices.items():
        if not np.all(np.isfinite(matrix)):
            raise NonFiniteInput(f"{name} contiene NaN o infinitos")


def _scaled_logits(queries: np.ndarray, keys: np.ndarray, d_k: int) -> np.ndarray:
    return queries @ keys.T / np.sqrt(d_k)


def skeleton_to_latent_attention(block: AttentionBlock) -> np.ndarray:
    """Probabilidad de que el token latente j se alinee con el token de esqueleto i (N_S x N_X)."""
    _require_finite(q_s=block.q_s, k_x=block.k_x)
    return softmax(_scaled_logits(block.q_s, block.k_x, block.d_k), axis=1)


def subject_attention(block: AttentionBlock) -> np.ndarray:
    """Atención de los tokens latentes a los de la referencia, W_{X→R} (N_X x N_R)."""
    _require_finite(q_x=block.q_x, k_r=block.k_r)
    return softmax(_scaled_logits(block.q_x, block.k_r, block.d_k), axis=1)


def spatial_mask(w_sx: np.ndarray, cfg: GateConfig) -> np.ndarray:
    """
    Agrega la atención de los tokens del esqueleto en I_S sobre cada token latente.

    Un I_S vacío da M = 0. La suma cruda puede superar 1, por eso se normaliza
    según `cfg.mask_normalization`.

    Raises:
        DimensionMismatch: algún índice de I_S no es una fila de W_{S→X}.
    """
    w_sx = np.asarray(w_sx, dtype=np.float64)
    _require_finite(w_sx=w_sx)
    indices = np.asarray(cfg.index_set.indices, dtype=np.intp)
    if indices.size == 0:
        return np.zeros(w_sx.shape[1])
    if indices[-1] >= w_sx.shape[0]:
        raise DimensionMismatch(f"Índice {indices[-1]} fuera de N_S={w_sx.shape[0]}")

    raw = w_sx[indices].sum(axis=0)
    if cfg.mask_normalization == MaskNormalization.CLAMP_ONE:
        return np.minimum(raw, 1.0)
    peak = raw.max()
    return raw / peak if peak > 0 else raw


def _gate_factor(mask: np.ndarray, beta: float) -> np.ndarray:
    # M + β(1 − M) escrito para que β = 1 dé exactamente 1
    return beta + (1.0 - beta) * mask


def gate_subject_attention(w_xr: np.ndarray, mask: np.ndarray, beta: float) -> np.ndarray:
    """W' = (M + β(1 − M)) ⊙ W, con M difundido sobre la dimensión de la referencia."""
    w_xr = np.asarray(w_xr, dtype=np.float64)
    mask = np.asarray(mask, dtype=np.float64)
    _require_finite(w_xr=w_xr, mask=mask)
    if mask.shape != (w_xr.shape[0],):
        raise DimensionMismatch(f"M tiene forma {mask.shape} y W_{{X→R}} {w_xr.shape[0]} filas")
    return _gate_factor(mask, beta)[:, None] * w_xr


def renormalize(w_gated: np.ndarray) -> np.ndarray:
    """Divide cada fila por su suma; las filas nulas pasan a uniformes (1/N_R)."""
    w_gated = np.asarray(w_gated, dtype=np.float64)
    totals = w_gated.sum(axis=1, keepdims=True)
    uniform = np.full_like(w_gated, 1.0 / w_gated.shape[1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(totals > 0, w_gated / totals, uniform)


def gate_subject_logits(logits: np.ndarray, mask: np.ndarray, beta: float) -> np.ndarray:
    """
    Variante previa al softmax: suma log(M + β(1 − M)) a los logits del sujeto.

    Las filas con compuerta nula quedan uniformes.
    """
    logits = np.asarray(logits, dtype=np.float64)
    factor = _gate_factor(np.asarray(mask, dtype=np.float64), beta)
    with np.errstate(divide="ignore"):
        bias = np.log(factor)
    gated = softmax(np.where(factor[:, None] > 0, logits + bias[:, None], 0.0), axis=1)
    return np.where(factor[:, None] > 0, gated, 1.0 / logits.shape[1])


def spatially_gated_attention(
    block: AttentionBlock,
    cfg: GateConfig,
    mode: GateMode = GateMode.PROBABILITIES,
) -> GatedWeights:
    """
    Ejecuta el flujo completo sobre un bloque de atención.

    Returns:
        GatedWeights: máscara M y atención al sujeto renormalizada.
    """
    mask = spatial_mask(skeleton_to_latent_attention(block), cfg)
    if mode == GateMode.LOGIT_BIAS:
        _require_finite(q_x=block.q_x, k_r=block.k_r)
        w_gated = gate_subject_logits(_scaled_logits(block.q_x, block.k_r, block.d_k), mask, cfg.beta)
    else:
        w_gated = renormalize(gate_subject_attention(subject_attention(block), mask, cfg.beta))
    logger.debug("Compuerta aplicada: N_X=%d, N_R=%d, |I_S|=%d", block.n_x, block.n_r, len(cfg.index_set))
    return GatedWeights(mask=mask, w_gated=w_gated)


def beta_sweep(block: AttentionBlock, cfg: GateConfig, betas: Sequence[float]) -> List[Tuple[float, float]]:
    """
    Masa total de atención al sujeto antes de renormalizar, para cada β.

    La masa es no decreciente en β y vale N_X cuando β = 1.
    """
    mask = spatial_mask(skeleton_to_latent_attention(block), cfg)
    w_xr = subject_attention(block)
    return [(float(beta), float(gate_subject_attention(w_xr, mask, beta).sum())) for beta in betas]
