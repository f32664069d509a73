import click

from pictochart.cli.commands.assemble import assemble
from pictochart.cli.commands.batch import batch
from pictochart.cli.commands.gate import gate
from pictochart.cli.commands.score import score
from pictochart.cli.commands.skeleton import skeleton


@click.group(help="Esqueletos, métrica de fidelidad, compuerta de atención y ensamblado de gráficos pictóricos.")
def cli():
    pass


cli.add_command(skeleton)
cli.add_command(score)
cli.add_command(batch)
cli.add_command(gate)
cli.add_command(assemble)
