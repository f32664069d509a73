from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import ValidationError

from pictochart.core.errors import MissingFile, SchemaError
from pictochart.schemas.batch import RunConfig


def load_run_config(path: Optional[str | Path] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Construye la configuración de una corrida.

    Prioridad: opciones explícitas de la CLI > archivo YAML > valores por defecto.
    Las opciones en None se ignoran.
    """
    values: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise MissingFile(f"No existe el archivo de configuración {path}")
        try:
            loaded = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise SchemaError(f"YAML inválido en {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise SchemaError("La configuración YAML debe ser un mapa")
        values.update(loaded)

    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        return RunConfig.model_validate(values)
    except ValidationError as exc:
        raise SchemaError(f"Configuración inválida: {exc}") from exc
