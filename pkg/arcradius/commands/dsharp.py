import click
from flask import Blueprint

from ..digraph import format_digraph
from ..extremal import build_dsharp, dsharp_spec, rho_dsharp
from ..schemas.report import DsharpSchema
from .common import emit, reports_errors, run_config, run_options, to_json, to_text

bp = Blueprint("dsharp", __name__, cli_group=None)


@bp.cli.command("dsharp")
@click.option("--arcs", "e", type=int, required=True, help="Arc count e.")
@click.option("--emit", "what", type=click.Choice(["digraph", "rho", "both"]), default="both")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def dsharp_command(e, what, out, **flags):
    """Build the extremal candidate D# for e arcs and/or report its spectral radius."""
    config = run_config(**flags)
    parts = []
    if what in ("digraph", "both"):
        parts.append(format_digraph(build_dsharp(e)))
    if what in ("rho", "both"):
        spec = dsharp_spec(e)
        summary = DsharpSchema().dump(
            {"e": e, "k": spec.k, "t": spec.t, "p": spec.p, "q": spec.q, "rho": rho_dsharp(e, config.tolerance, config.max_iter)}
        )
        parts.append(to_text(summary) if config.output_format == "text" else to_json(summary))
    emit("".join(parts), out)
