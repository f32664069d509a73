"""
Errores de dominio de pictochart.

Cada error lleva el código de salida que la CLI devuelve al capturarlo,
del mismo modo que una API asocia un status HTTP a cada fallo.
"""

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USER_INPUT = 2
EXIT_IO = 3
EXIT_UNSUPPORTED_IMAGE = 4


class PictochartError(Exception):
    """Error base; `exit_code` es el código que usa la CLI."""

    exit_code = EXIT_USER_INPUT

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class SchemaError(PictochartError, ValueError):
    """El documento JSON no respeta el esquema (campos faltantes, extra o mal tipados)."""


class SpecValueError(PictochartError, ValueError):
    """La especificación viola un invariante (valor negativo, serie vacía, torta de suma cero)."""


class DimensionMismatch(PictochartError, ValueError):
    """Las dimensiones de dos entradas no son compatibles."""


class NoAlphaChannel(PictochartError, ValueError):
    """La imagen no trae canal alfa; el fondo debe quitarse antes de evaluarla."""
    exit_code = EXIT_UNSUPPORTED_IMAGE

    def __init__(self, detail: str = (
        "La imagen no tiene canal alfa: quite el fondo (matting) antes de evaluarla"
    )):
        super().__init__(detail)


class SizeLimit(PictochartError, ValueError):
    """El oráculo exhaustivo sólo acepta rásteres de hasta 1024x1024."""


class NonFiniteInput(PictochartError, ValueError):
    """Las matrices de atención contienen NaN o infinitos."""


class TooSmall(PictochartError, ValueError):
    """La imagen tiene menos filas que grillas pedidas."""


class TargetTooSmall(PictochartError, ValueError):
    """La altura objetivo es menor que una grilla."""


class StorageError(PictochartError, OSError):
    exit_code = EXIT_IO


class MissingFile(StorageError):
    """El archivo pedido no existe."""
