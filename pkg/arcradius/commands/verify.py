import click
from flask import Blueprint, current_app

from ..bounds import large_clique_threshold
from ..enumeration import brute_max_rho, sweep_dss
from ..errors import PreconditionError
from ..extremal import decompose_arcs
from ..schemas.report import (
    ClosedFormTableSchema,
    LargeCliqueSchema,
    OracleComparisonSchema,
    report_schema,
    reports_to_csv,
)
from ..verify import MATCH_TOL, verify_closed_forms, verify_conjecture, verify_large_clique
from .common import emit, reports_errors, require_long_running, run_config, run_options, to_json, to_text

bp = Blueprint("verify", __name__, cli_group=None)

MODES = ("conjecture", "closed-form", "large-clique", "oracle")


def parse_range(text):
    """'A..B' -> range(A, B + 1)."""
    low, sep, high = text.partition("..")
    try:
        low, high = int(low), int(high)
    except ValueError:
        sep = ""
    if not sep or low > high:
        raise PreconditionError(f"range must look like 'A..B' with A <= B, got {text!r}")
    return range(low, high + 1)


def _conjecture(arcs, config, max_vertices, timing, out, as_range):
    reports = []
    for e in arcs:
        require_long_running(e, config)
        reports.append(verify_conjecture(e, config.tolerance, config.max_iter, config.jobs, max_vertices))
    current_app.logger.info(
        "verified %d arc counts, conjecture held for %d",
        len(reports),
        sum(1 for r in reports if r.conjecture_holds),
    )
    fmt = config.output_format
    if fmt == "csv":
        emit(reports_to_csv(reports, timing), out)
        return
    schema = report_schema(timing, many=as_range)
    data = schema.dump(reports if as_range else reports[0])
    if fmt == "text":
        rows = data if as_range else [data]
        emit("\n".join(to_text(row) for row in rows), out)
    else:
        emit(to_json(data), out)


def _closed_forms(e, k_max, config, out):
    if k_max is None:
        if e is None:
            raise PreconditionError("closed-form mode needs --k-max or --arcs")
        k_max = decompose_arcs(e).k
    limit = k_max * (k_max + 1) if config.long_running else current_app.config["LONG_RUNNING_ARCS"]
    checks = verify_closed_forms(k_max, config.tolerance, config.max_iter, sweep_limit=limit, jobs=config.jobs)
    table = {"k_max": k_max, "passed": all(c.passed for c in checks), "checks": checks}
    emit(to_json(ClosedFormTableSchema().dump(table)), out)


def _large_clique(e, config, out):
    _, k, t = decompose_arcs(e)
    if not (t >= 2 and k > large_clique_threshold(t)):
        require_long_running(e, config)
    record = verify_large_clique(e, config.tolerance, config.max_iter, config.jobs)
    emit(to_json(LargeCliqueSchema().dump(record)), out)


def _oracle(e, vertices, config, out):
    require_long_running(e, config)
    _, k, t = decompose_arcs(e)
    budget = current_app.config["BRUTE_FORCE_BUDGET"]
    tie = current_app.config["TIE_TOLERANCE"]
    oracle_rho = None
    for n in range(2, vertices + 1):
        if e > n * (n - 1):
            continue
        result = brute_max_rho(e, n, config.tolerance, config.max_iter, budget, tie)
        if result.rho_max is not None and (oracle_rho is None or result.rho_max > oracle_rho):
            oracle_rho = result.rho_max
    sweep_rho = sweep_dss(e, config.tolerance, config.max_iter, tie=tie, jobs=config.jobs).rho_max
    agree = None
    if t != 1:
        agree = (oracle_rho is None and sweep_rho is None) or (
            oracle_rho is not None and sweep_rho is not None and abs(oracle_rho - sweep_rho) <= MATCH_TOL
        )
    data = {"e": e, "k": k, "t": t, "max_vertices": vertices, "oracle_rho": oracle_rho, "sweep_rho": sweep_rho, "agree": agree}
    emit(to_json(OracleComparisonSchema().dump(data)), out)


@bp.cli.command("verify")
@click.option("--arcs", "e", type=int, default=None, help="Single arc count.")
@click.option("--range", "span", default=None, help="Arc count range 'A..B'.")
@click.option("--mode", type=click.Choice(MODES), default="conjecture")
@click.option("--k-max", type=int, default=None, help="Largest k for closed-form mode.")
@click.option("--vertices", type=int, default=4, help="Largest vertex count for oracle mode.")
@click.option("--max-vertices", type=int, default=None, help="Override the enumeration vertex cap.")
@click.option("--timing", is_flag=True, default=False, help="Include elapsed times in reports.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@run_options
@reports_errors
def verify_command(e, span, mode, k_max, vertices, max_vertices, timing, out, **flags):
    """Verify D# optimality, the closed forms or the large-clique bound chain."""
    if span is not None and flags.get("output_format") is None:
        flags["output_format"] = "csv"
    config = run_config(**flags)

    if mode == "closed-form":
        _closed_forms(e, k_max, config, out)
        return
    if span is not None and e is not None:
        raise PreconditionError("give either --arcs or --range, not both")
    if span is not None:
        if mode != "conjecture":
            raise PreconditionError(f"--range is only supported in conjecture mode, not {mode}")
        _conjecture(parse_range(span), config, max_vertices, timing, out, as_range=True)
        return
    if e is None:
        raise PreconditionError("give --arcs E or --range A..B")
    if mode == "conjecture":
        _conjecture([e], config, max_vertices, timing, out, as_range=False)
    elif mode == "large-clique":
        _large_clique(e, config, out)
    else:
        _oracle(e, vertices, config, out)
