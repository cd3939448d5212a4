"""Command-line entry point: ``python -m arcradius <command> ...``.

Exit codes: 0 on success, 2 for invalid input or usage, 1 for anything else.
"""

import json
import sys

import click
from flask.cli import ScriptInfo
from marshmallow import ValidationError

from . import create_app
from .errors import PreconditionError


def run_cli(argv=None, app=None) -> int:
    app = app or create_app()
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = app.cli.main(
            args=args,
            prog_name="arcradius",
            obj=ScriptInfo(create_app=lambda: app),
            standalone_mode=False,
        )
    except click.exceptions.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (PreconditionError, ValidationError) as exc:
        click.echo(json.dumps({"msg": str(exc)}), err=True)
        return 2
    except Exception:
        app.logger.exception("command failed: %s", " ".join(args))
        return 1
    return rv if isinstance(rv, int) else 0


def main():
    sys.exit(run_cli())
