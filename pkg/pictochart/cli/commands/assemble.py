from pathlib import Path

import click

from pictochart.cli.common import config_option, handle_errors
from pictochart.core.errors import StorageError
from pictochart.core.logger import MyLogger
from pictochart.models.raster import RasterImage
from pictochart.schemas.assembly import AssemblyLog
from pictochart.services.grid_assembly import assemble_to_height, plan_grids
from pictochart.storage.images import read_rgba, write_rgba
from pictochart.storage.run_config import load_run_config

logger = MyLogger().get_logger()


@click.command(help="Ajusta la altura de una referencia replicando o quitando grillas horizontales.")
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False), help="PNG RGBA de referencia.")
@click.option("--target-height", required=True, type=click.IntRange(min=1), help="Altura objetivo (px).")
@click.option("--k", type=click.IntRange(min=2), default=None, help="Cantidad de grillas (5).")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False), help="PNG de salida.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None,
              help="JSON con el plan de grillas y las operaciones; por defecto stdout.")
@config_option
@handle_errors
def assemble(input_path, target_height, k, out_path, log_path, config_path):
    """
    Divide en K grillas, las ordena por SSIM medio y ensambla a la altura pedida.
    """
    run_cfg = load_run_config(config_path, {"k": k})
    image = RasterImage(read_rgba(input_path))
    plan = plan_grids(image, run_cfg.k)
    result = assemble_to_height(image, plan, target_height)
    write_rgba(out_path, result.image.pixels)
    logger.info("Imagen ensamblada (%d px) escrita en %s", result.achieved_height_px, out_path)

    log = AssemblyLog(
        plan=plan,
        source_height_px=image.height,
        ops_log=list(result.ops_log),
        achieved_height_px=result.achieved_height_px,
        resized_from_px=result.resized_from_px,
    ).model_dump_json(indent=2)
    if log_path:
        try:
            Path(log_path).write_text(log, encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"No se pudo escribir {log_path}: {exc}") from exc
    else:
        click.echo(log)
