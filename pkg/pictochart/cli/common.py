"""
Utilidades compartidas por los comandos de la CLI.

`handle_errors` cumple el papel que en una API tienen los manejadores de
excepciones: traduce los errores de dominio al código de salida acordado
y deja el diagnóstico en stderr.
"""

import functools
from pathlib import Path
from typing import Callable, Optional, Tuple

import click
from pydantic import ValidationError

from pictochart.core.errors import (
    EXIT_IO,
    EXIT_UNEXPECTED,
    EXIT_USER_INPUT,
    MissingFile,
    PictochartError,
)
from pictochart.core.logger import MyLogger
from pictochart.schemas.chart import ChartSpec
from pictochart.services.chart_model import parse_spec

logger = MyLogger().get_logger()


def handle_errors(command: Callable) -> Callable:
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except PictochartError as exc:
            click.echo(f"Error: {exc.detail}", err=True)
            raise SystemExit(exc.exit_code) from exc
        except ValidationError as exc:
            click.echo(f"Error: {exc}", err=True)
            raise SystemExit(EXIT_USER_INPUT) from exc
        except OSError as exc:
            click.echo(f"Error de E/S: {exc}", err=True)
            raise SystemExit(EXIT_IO) from exc
        except Exception as exc:
            logger.exception("Error inesperado")
            click.echo(f"Error inesperado: {exc}", err=True)
            raise SystemExit(EXIT_UNEXPECTED) from exc

    return wrapper


def config_option(command: Callable) -> Callable:
    return click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="Archivo YAML con la configuración de la corrida.",
    )(command)


def parse_float_list(ctx, param, value: Optional[str]) -> Optional[Tuple[float, ...]]:
    """Convierte "8,24,64" en (8.0, 24.0, 64.0)."""
    if value is None:
        return None
    try:
        return tuple(float(item) for item in value.split(",") if item.strip())
    except ValueError:
        raise click.BadParameter(f"Se esperaba una lista de números separados por comas: {value!r}")


def parse_dims(ctx, param, value: Optional[str]) -> Optional[Tuple[int, int]]:
    """Convierte "32x32" en (32, 32)."""
    if value is None:
        return None
    try:
        rows, cols = (int(item) for item in value.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"Se esperaba FILASxCOLUMNAS: {value!r}")
    if rows < 1 or cols < 1:
        raise click.BadParameter("Las dimensiones deben ser positivas")
    return rows, cols


def read_spec(path: str | Path) -> ChartSpec:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"No existe la especificación {path}")
    return parse_spec(path.read_text(encoding="utf-8"))
