"""Lectura y escritura de PNG con Pillow."""

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from pictochart.core.errors import MissingFile, NoAlphaChannel, StorageError


def _has_alpha(image: Image.Image) -> bool:
    return "A" in image.getbands() or (image.mode == "P" and "transparency" in image.info)


def read_rgba(path: str | Path) -> np.ndarray:
    """
    Lee una imagen como arreglo RGBA uint8 (alto, ancho, 4).

    Raises:
        MissingFile: el archivo no existe.
        NoAlphaChannel: la imagen no trae canal alfa (no se hace matting aquí).
        StorageError: el archivo no es una imagen legible.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"No existe la imagen {path}")
    try:
        with Image.open(path) as image:
            if not _has_alpha(image):
                raise NoAlphaChannel()
            return np.asarray(image.convert("RGBA"), dtype=np.uint8).copy()
    except (UnidentifiedImageError, OSError) as exc:
        raise StorageError(f"No se pudo leer la imagen {path}: {exc}") from exc


def write_rgba(path: str | Path, pixels: np.ndarray) -> None:
    try:
        Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8)).save(path, format="PNG")
    except OSError as exc:
        raise StorageError(f"No se pudo escribir {path}: {exc}") from exc


def write_gray16(path: str | Path, values: np.ndarray) -> None:
    """PNG en escala de grises de 16 bits."""
    try:
        Image.fromarray(np.ascontiguousarray(values, dtype=np.uint16)).save(path, format="PNG")
    except OSError as exc:
        raise StorageError(f"No se pudo escribir {path}: {exc}") from exc
