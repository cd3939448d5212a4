import click
from flask import Blueprint

from ..bounds import trace_bounds
from ..errors import PreconditionError
from ..extremal import build_dsharp
from ..schemas.report import BoundTraceSchema
from .common import DIGRAPH_FILE, emit, read_digraph, reports_errors, run_config, run_options, to_json

bp = Blueprint("bounds", __name__, cli_group=None)


@bp.cli.command("bounds")
@click.option("--digraph", "path", default=None, type=DIGRAPH_FILE, help="Digraph file ('-' for stdin).")
@click.option("--arcs", "e", type=int, default=None, help="Arc count, used with --family.")
@click.option("--family", type=click.Choice(["dsharp"]), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def bounds_command(path, e, family, out, **flags):
    """Audit a digraph against every spectral radius bound."""
    config = run_config(**flags)
    if path is not None:
        d = read_digraph(path)
    elif e is not None and family == "dsharp":
        d = build_dsharp(e)
    else:
        raise PreconditionError("give --digraph FILE or --arcs E --family dsharp")
    trace = trace_bounds(d, config.tolerance, config.max_iter)
    emit(to_json(BoundTraceSchema().dump(trace)), out)
