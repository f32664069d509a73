import asyncio
from pathlib import Path

import click

from pictochart.cli.common import config_option, handle_errors, parse_float_list
from pictochart.core.errors import EXIT_USER_INPUT, StorageError
from pictochart.core.logger import MyLogger
from pictochart.schemas.fidelity import RegionWeights
from pictochart.services.batch import STATUS_OK, mean_f1_by_type, run_batch
from pictochart.storage.manifests import read_manifest, results_to_csv
from pictochart.storage.run_config import load_run_config

logger = MyLogger().get_logger()


@click.command(help="Evalúa todas las filas de un manifiesto CSV y emite un CSV de resultados.")
@click.argument("manifest_path", type=click.Path(dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="CSV de salida; por defecto stdout.")
@click.option("--parallelism", type=click.IntRange(min=1), default=None, help="Filas evaluadas a la vez.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Semilla base; la fila i usa seed ^ i.")
@click.option("--points-per-band", type=click.IntRange(min=100), default=None, help="Puntos por banda.")
@click.option("--band-edges", callback=parse_float_list, default=None, help="Bordes de banda, p.ej. 8,24,64.")
@click.option("--weights", callback=parse_float_list, default=None, help="Pesos por banda.")
@config_option
@handle_errors
def batch(manifest_path, out_path, parallelism, seed, points_per_band, band_edges, weights, config_path):
    """
    Una fila de salida por fila del manifiesto, en el mismo orden.

    - Los fallos por fila quedan en la columna `status` (missing, spec_error,
      unsupported_image, error).
    - El resumen `mean_f1[<tipo>]=<valor>` va a stderr.
    - Sale con 2 si todas las filas fallaron.
    """
    run_cfg = load_run_config(config_path, {
        "parallelism": parallelism,
        "seed": seed,
        "points_per_band": points_per_band,
        "band_edges": band_edges,
        "weights": weights,
    })
    if run_cfg.band_edges is not None:
        RegionWeights(band_edges=tuple(run_cfg.band_edges), weights=tuple(run_cfg.weights))

    manifest = read_manifest(manifest_path)
    results = asyncio.run(run_batch(manifest, run_cfg))
    table = results_to_csv(results)

    if out_path:
        try:
            Path(out_path).write_text(table, encoding="utf-8", newline="")
        except OSError as exc:
            raise StorageError(f"No se pudo escribir {out_path}: {exc}") from exc
        logger.info("Resultados escritos en %s", out_path)
    else:
        click.echo(table, nl=False)

    for chart_type, value in mean_f1_by_type(results).items():
        click.echo(f"mean_f1[{chart_type}]={value!r}", err=True)

    if results and not any(result.status == STATUS_OK for result in results):
        click.echo("Error: ninguna fila pudo evaluarse", err=True)
        raise SystemExit(EXIT_USER_INPUT)
