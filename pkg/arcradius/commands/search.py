import click
from flask import Blueprint, current_app

from ..digraph import expand_canonical, format_canonical
from ..enumeration import brute_max_rho, enumerate_dss
from ..schemas.report import OracleSchema, round_significant
from ..spectral import perron_root
from .common import emit, reports_errors, require_long_running, run_config, run_options, to_json

bp = Blueprint("search", __name__, cli_group=None)


@bp.cli.command("enumerate")
@click.option("--arcs", "e", type=int, required=True, help="Arc count e.")
@click.option("--max-vertices", type=int, default=None, help="Override the vertex cap.")
@click.option("--rho/--no-rho", "with_rho", default=False, help="Append the spectral radius to each form.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def enumerate_command(e, max_vertices, with_rho, out, **flags):
    """List the prefix-nested strongly connected digraphs with e arcs, one canonical form per line."""
    config = run_config(**flags)
    require_long_running(e, config)
    lines = []
    for form in enumerate_dss(e, max_vertices):
        line = format_canonical(form)
        if with_rho:
            rho = perron_root(expand_canonical(form), config.tolerance, config.max_iter)
            line += f"  {round_significant(rho)!r}"
        lines.append(line)
    current_app.logger.info("enumerated %d forms for e=%d", len(lines), e)
    emit("".join(line + "\n" for line in lines), out)


@bp.cli.command("oracle")
@click.option("--arcs", "e", type=int, required=True, help="Arc count e.")
@click.option("--vertices", "n", type=int, required=True, help="Vertex count n.")
@click.option("--budget", type=int, default=None, help="Largest number of arc subsets to try.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def oracle_command(e, n, budget, out, **flags):
    """Brute-force maximum spectral radius over every e-arc digraph on n vertices."""
    config = run_config(**flags)
    budget = budget if budget is not None else current_app.config["BRUTE_FORCE_BUDGET"]
    result = brute_max_rho(e, n, config.tolerance, config.max_iter, budget, current_app.config["TIE_TOLERANCE"])
    emit(to_json(OracleSchema().dump(result)), out)
