import click

from pictochart.cli.common import config_option, handle_errors, parse_float_list, read_spec
from pictochart.core.logger import MyLogger
from pictochart.schemas.fidelity import SamplingConfig
from pictochart.services.distance_field import dump_field_png
from pictochart.services.fidelity import resolve_region_weights, score_chart
from pictochart.storage.images import read_rgba
from pictochart.storage.run_config import load_run_config

logger = MyLogger().get_logger()


@click.command(help="Evalúa la fidelidad de datos de un gráfico pictórico RGBA contra su especificación.")
@click.argument("image_path", type=click.Path(dir_okay=False))
@click.argument("spec_path", type=click.Path(dir_okay=False))
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Semilla del muestreo (por defecto 0).")
@click.option("--points-per-band", type=click.IntRange(min=100), default=None, help="Puntos por banda.")
@click.option("--band-edges", callback=parse_float_list, default=None, help="Bordes de banda, p.ej. 8,24,64.")
@click.option("--weights", callback=parse_float_list, default=None, help="Pesos por banda, p.ej. 1,0.5,0.2,0.05.")
@click.option("--epsilon", type=float, default=None, help="Epsilon del F1.")
@click.option("--exhaustive", is_flag=True, help="Usa el oráculo exhaustivo en vez del muestreo.")
@click.option("--debug-field", "debug_field", type=click.Path(dir_okay=False), default=None,
              help="Vuelca el campo de distancias objetivo como PNG de 16 bits.")
@config_option
@handle_errors
def score(image_path, spec_path, seed, points_per_band, band_edges, weights, epsilon, exhaustive, debug_field,
          config_path):
    """
    Imprime en stdout el FidelityReport en JSON.

    - La imagen debe traer canal alfa; sin él la salida es 4.
    - El reporte repite bandas, pesos, semilla y σ para poder reproducirlo.
    """
    run_cfg = load_run_config(config_path, {
        "seed": seed,
        "points_per_band": points_per_band,
        "band_edges": band_edges,
        "weights": weights,
        "epsilon": epsilon,
    })
    spec = read_spec(spec_path)
    rw = resolve_region_weights(run_cfg.band_edges, run_cfg.weights, spec)
    image = read_rgba(image_path)
    cfg = SamplingConfig(points_per_band=run_cfg.points_per_band, rng_seed=run_cfg.seed, epsilon=run_cfg.epsilon)

    report, field = score_chart(image, spec, rw, cfg, exhaustive=exhaustive)
    if debug_field:
        dump_field_png(field, debug_field)
        logger.info("Campo de distancias escrito en %s", debug_field)
    click.echo(report.model_dump_json(indent=2))
