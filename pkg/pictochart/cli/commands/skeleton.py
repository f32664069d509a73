from pathlib import Path

import click

from pictochart.cli.common import config_option, handle_errors, parse_dims, read_spec
from pictochart.core.errors import StorageError
from pictochart.core.logger import MyLogger
from pictochart.schemas.skeleton import Background, RasterConfig
from pictochart.services.chart_model import normalize
from pictochart.services.skeleton import build_skeleton_geometry, rasterize_skeleton, skeleton_token_indices
from pictochart.storage.images import write_rgba
from pictochart.storage.run_config import load_run_config

logger = MyLogger().get_logger()


@click.command(help="Dibuja el esqueleto de un gráfico como PNG RGBA.")
@click.argument("spec_path", type=click.Path(dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False), help="PNG de salida.")
@click.option("--stroke-px", type=click.IntRange(min=1), default=None, help="Grosor del trazo (px).")
@click.option("--bg", type=click.Choice([b.value for b in Background]), default=None, help="Fondo del lienzo.")
@click.option("--antialias", is_flag=True, help="Suavizado por supermuestreo.")
@click.option("--latent-dims", callback=parse_dims, default=None, help="Grilla latente FILASxCOLUMNAS para I_S.")
@click.option("--indices", "indices_path", type=click.Path(dir_okay=False), default=None,
              help="JSON de salida con los índices de tokens cubiertos (I_S).")
@config_option
@handle_errors
def skeleton(spec_path, out_path, stroke_px, bg, antialias, latent_dims, indices_path, config_path):
    """
    Valida la especificación, construye la geometría y la rasteriza.

    - Con `--indices` escribe además el conjunto I_S sobre la grilla latente
      (`--latent-dims`, o la de la configuración).
    """
    run_cfg = load_run_config(config_path, {"stroke_px": stroke_px, "bg": bg, "latent_dims": latent_dims})
    nspec = normalize(read_spec(spec_path))
    raster = rasterize_skeleton(
        build_skeleton_geometry(nspec),
        RasterConfig(stroke_px=run_cfg.stroke_px, bg=run_cfg.bg, antialias=antialias),
    )
    write_rgba(out_path, raster.pixels)
    logger.info("Esqueleto escrito en %s", out_path)

    if indices_path:
        index_set = skeleton_token_indices(raster, run_cfg.latent_dims)
        try:
            Path(indices_path).write_text(index_set.model_dump_json(indent=2), encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"No se pudo escribir {indices_path}: {exc}") from exc
        logger.info("I_S (%d tokens) escrito en %s", len(index_set), indices_path)
