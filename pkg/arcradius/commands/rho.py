import click
from flask import Blueprint, current_app

from ..bounds import digraph_id
from ..digraph import format_digraph, is_member_dss
from ..errors import PreconditionError
from ..rewire import rewire_to_dss
from ..schemas.report import SpectralSchema
from ..spectral import block_form, series_equation, spectral_radius
from .common import DIGRAPH_FILE, emit, read_digraph, reports_errors, run_config, run_options, to_json, to_text

bp = Blueprint("rho", __name__, cli_group=None)


@bp.cli.command("rho")
@click.option("--digraph", "path", required=True, type=DIGRAPH_FILE, help="Digraph file ('-' for stdin).")
@click.option("--vectors/--no-vectors", default=False, help="Include the Perron vectors.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def rho_command(path, vectors, out, **flags):
    """Spectral radius, Perron vectors and prefix-nested membership of a digraph."""
    config = run_config(**flags)
    d = read_digraph(path)
    result = spectral_radius(d, config.tolerance, config.max_iter)
    membership = is_member_dss(d)
    series = _series(d) if membership else None
    data = {
        "digraph_id": digraph_id(d),
        "n": d.n,
        "e": d.arc_count,
        "rho": result.rho,
        "residual": result.residual,
        "iterations": result.iterations,
        "reducible": result.reducible,
        "member": membership.member,
        "condition": membership.condition,
        "series": series,
        "right": list(result.right),
        "left": list(result.left),
    }
    exclude = () if vectors else ("right", "left")
    report = SpectralSchema(exclude=exclude).dump(data)
    emit(to_text(report) if config.output_format == "text" else to_json(report), out)


@bp.cli.command("rewire")
@click.option("--digraph", "path", required=True, type=DIGRAPH_FILE, help="Strongly connected digraph file ('-' for stdin).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def rewire_command(path, out, **flags):
    """Rewire a strongly connected digraph into the prefix-nested class."""
    config = run_config(**flags)
    d = read_digraph(path)
    rewired = rewire_to_dss(d, config.tolerance, config.max_iter)
    current_app.logger.info("rewired %s into %s", digraph_id(d), digraph_id(rewired))
    emit(format_digraph(rewired), out)


def _series(d, depth=4):
    try:
        blocks = block_form(d)
    except PreconditionError:
        return None
    eq = series_equation(blocks.w, blocks.a12, blocks.a21, depth)
    return {"clique": blocks.w, "moments": list(eq.moments), "tail_bound": eq.tail_bound}
