import json

import click

from pictochart.cli.common import config_option, handle_errors, parse_float_list
from pictochart.core.logger import MyLogger
from pictochart.schemas.attention import GateConfig, GateMode, MaskNormalization
from pictochart.services.attention_gate import beta_sweep, spatially_gated_attention
from pictochart.storage.run_config import load_run_config
from pictochart.storage.tensors import load_gate_bundle, write_tensor, write_tensor_json

logger = MyLogger().get_logger()


@click.command(help="Aplica la compuerta espacial a la atención sujeto de un bloque Q/K.")
@click.argument("bundle_path", type=click.Path(dir_okay=False))
@click.option("--beta", type=click.FloatRange(0, 1), default=None, help="Factor de control del sujeto (0.6).")
@click.option("--mask-normalization", type=click.Choice([m.value for m in MaskNormalization]), default=None,
              help="Normalización de la máscara M.")
@click.option("--mode", type=click.Choice([m.value for m in GateMode]), default=GateMode.PROBABILITIES.value,
              show_default=True, help="Compuerta sobre probabilidades o sesgo en logits.")
@click.option("--out-mask", type=click.Path(dir_okay=False), default=None, help="Tensor de salida con M.")
@click.option("--out-weights", type=click.Path(dir_okay=False), default=None, help="Tensor de salida con W_gated.")
@click.option("--format", "fmt", type=click.Choice(["bin", "json"]), default="bin", show_default=True,
              help="Formato de los tensores de salida.")
@click.option("--beta-sweep", "sweep", callback=parse_float_list, default=None,
              help="Lista de β; imprime la masa de atención previa a renormalizar para cada uno.")
@config_option
@handle_errors
def gate(bundle_path, beta, mask_normalization, mode, out_mask, out_weights, fmt, sweep, config_path):
    """
    Lee el paquete (Q_S, K_X, Q_X, K_R, I_S) y escribe M y W_gated.

    - En stdout imprime un resumen JSON (o el barrido de β si se pidió).
    """
    run_cfg = load_run_config(config_path, {"beta": beta, "mask_normalization": mask_normalization})
    block, index_set = load_gate_bundle(bundle_path)
    cfg = GateConfig(beta=run_cfg.beta, index_set=index_set, mask_normalization=run_cfg.mask_normalization)

    if sweep is not None:
        if any(not 0 <= value <= 1 for value in sweep):
            raise click.BadParameter("Cada β debe estar en [0, 1]", param_hint="--beta-sweep")
        rows = [{"beta": b, "mass": mass} for b, mass in beta_sweep(block, cfg, sweep)]
        click.echo(json.dumps(rows, indent=2))
        return

    gated = spatially_gated_attention(block, cfg, GateMode(mode))
    writer = write_tensor_json if fmt == "json" else write_tensor
    if out_mask:
        writer(out_mask, gated.mask)
    if out_weights:
        writer(out_weights, gated.w_gated)
    logger.info("Compuerta aplicada con β=%s (%s)", cfg.beta, mode)

    click.echo(json.dumps({
        "beta": cfg.beta,
        "mode": mode,
        "mask_normalization": cfg.mask_normalization.value,
        "n_x": block.n_x,
        "n_r": block.n_r,
        "index_set_size": len(index_set),
        "mask": gated.mask.tolist(),
    }, indent=2))
