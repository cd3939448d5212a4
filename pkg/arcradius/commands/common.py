import functools
import json
from pathlib import Path

import click
from flask import current_app
from marshmallow import ValidationError

from ..digraph import expand_canonical, parse_canonical, parse_digraph
from ..errors import PreconditionError
from ..schemas.run import FORMATS, load_run_config

DIGRAPH_FILE = click.Path(exists=True, dir_okay=False, allow_dash=True)


def run_options(f):
    """--tol, --max-iter, --jobs, --format and --long-running, merged into a RunConfig."""
    options = [
        click.option("--tol", "tolerance", type=float, default=None, help="Residual tolerance."),
        click.option("--max-iter", type=int, default=None, help="Power iteration cap."),
        click.option("--jobs", type=int, default=None, help="Worker processes for sweeps."),
        click.option("--format", "output_format", type=click.Choice(FORMATS), default=None),
        click.option("--long-running", is_flag=True, default=None, help="Allow sweeps above the arc limit."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def run_config(**flags):
    return load_run_config(current_app.config, **flags)


def reports_errors(f):
    """Map invalid input to exit code 2 with a JSON diagnostic on stderr."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except PreconditionError as exc:
            click.echo(json.dumps({"msg": str(exc)}), err=True)
            raise click.exceptions.Exit(2)
        except ValidationError as exc:
            click.echo(json.dumps({"msg": "invalid options", "errors": exc.messages}), err=True)
            raise click.exceptions.Exit(2)

    return wrapper


def require_long_running(e, config):
    limit = current_app.config["LONG_RUNNING_ARCS"]
    if e > limit and not config.long_running:
        raise PreconditionError(f"sweeps above {limit} arcs need --long-running (got e={e})")


def read_digraph(path):
    """Digraph from a file ('-' for stdin) in arc-list or canonical-form text."""
    text = click.get_text_stream("stdin").read() if path == "-" else Path(path).read_text()
    first = next((line for line in text.splitlines() if line.strip()), "")
    if ":" in first:
        return expand_canonical(parse_canonical(first))
    return parse_digraph(text)


def to_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def to_text(data) -> str:
    lines = []
    for key, value in sorted(data.items()):
        if isinstance(value, list):
            value = ", ".join(str(x) for x in value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def emit(text, out=None):
    if out:
        Path(out).write_text(text)
        current_app.logger.info("wrote %s", out)
    else:
        click.echo(text, nl=False)
