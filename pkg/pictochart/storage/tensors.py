"""
Archivos de tensores para la compuerta de atención.

Formato binario (little-endian):
    uint32 ndim | ndim x uint32 dims | float32 datos en orden fila mayor

Un paquete JSON describe un bloque de atención completo; cada matriz puede
ir en línea (lista de listas) o como ruta a un archivo binario relativa al
paquete:

    {"q_s": [[...]], "k_x": "k_x.bin", "q_x": ..., "k_r": ...,
     "index_set": [0, 3, 4], "grid_dims": [2, 4]}
"""

import json
import struct
from pathlib import Path
from typing import Tuple

import numpy as np

from pictochart.core.errors import MissingFile, SchemaError, StorageError
from pictochart.models.attention import AttentionBlock
from pictochart.schemas.skeleton import IndexSet

_MATRICES = ("q_s", "k_x", "q_x", "k_r")


def write_tensor(path: str | Path, array: np.ndarray) -> None:
    array = np.asarray(array, dtype="<f4")
    header = struct.pack(f"<I{array.ndim}I", array.ndim, *array.shape)
    try:
        Path(path).write_bytes(header + np.ascontiguousarray(array).tobytes())
    except OSError as exc:
        raise StorageError(f"No se pudo escribir {path}: {exc}") from exc


def read_tensor(path: str | Path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"No existe el tensor {path}")
    raw = path.read_bytes()
    try:
        (ndim,) = struct.unpack_from("<I", raw, 0)
        dims = struct.unpack_from(f"<{ndim}I", raw, 4)
    except struct.error as exc:
        raise SchemaError(f"Cabecera de tensor inválida en {path}") from exc
    offset = 4 + 4 * ndim
    expected = int(np.prod(dims, dtype=np.int64)) * 4
    if len(raw) - offset != expected:
        raise SchemaError(f"El tensor {path} declara {dims} pero trae {len(raw) - offset} bytes")
    return np.frombuffer(raw, dtype="<f4", offset=offset).reshape(dims).astype(np.float64)


def write_tensor_json(path: str | Path, array: np.ndarray) -> None:
    array = np.asarray(array, dtype=np.float64)
    document = {"shape": list(array.shape), "data": array.tolist()}
    try:
        Path(path).write_text(json.dumps(document), encoding="utf-8")
    except OSError as exc:
        raise StorageError(f"No se pudo escribir {path}: {exc}") from exc


def _matrix(value, base: Path, name: str) -> np.ndarray:
    if isinstance(value, str):
        return read_tensor(base / value)
    if isinstance(value, list):
        return np.asarray(value, dtype=np.float64)
    raise SchemaError(f"'{name}' debe ser una lista de listas o una ruta a un tensor")


def load_gate_bundle(path: str | Path) -> Tuple[AttentionBlock, IndexSet]:
    """
    Carga un paquete JSON con las matrices Q/K y el conjunto I_S.

    Returns:
        Tuple[AttentionBlock, IndexSet]: bloque de atención e índices de tokens del esqueleto.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"No existe el paquete {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"JSON mal formado en {path}: {exc.msg}") from exc

    missing = [name for name in (*_MATRICES, "index_set") if name not in document]
    if missing:
        raise SchemaError(f"Faltan campos en el paquete: {', '.join(missing)}")

    matrices = {name: _matrix(document[name], path.parent, name) for name in _MATRICES}
    try:
        block = AttentionBlock(**matrices)
        n_s = block.n_s
        grid_dims = tuple(document.get("grid_dims", (n_s, 1)))
        index_set = IndexSet(indices=tuple(sorted(set(document["index_set"]))), grid_dims=grid_dims)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return block, index_set
