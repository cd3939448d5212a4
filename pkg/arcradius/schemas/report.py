import csv
import io

from marshmallow import Schema, fields

from ..digraph import format_canonical

SCHEMA_VERSION = "1"
SIGNIFICANT_DIGITS = 15


def round_significant(value):
    if value is None:
        return None
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


class Significant(fields.Field):
    """Float rounded to 15 significant digits on dump."""

    def _serialize(self, value, attr, obj, **kwargs):
        return round_significant(value)


class Versioned(Schema):
    schema_version = fields.Constant(SCHEMA_VERSION)


class DsharpSchema(Versioned):
    e = fields.Int()
    k = fields.Int()
    t = fields.Int()
    p = fields.Int()
    q = fields.Int()
    rho = Significant()


class SeriesSchema(Schema):
    clique = fields.Int()
    moments = fields.List(Significant())
    tail_bound = Significant()


class SpectralSchema(Versioned):
    digraph_id = fields.Str()
    n = fields.Int()
    e = fields.Int()
    rho = Significant()
    residual = Significant()
    iterations = fields.Int()
    reducible = fields.Bool()
    member = fields.Bool()
    condition = fields.Str(allow_none=True)
    series = fields.Nested(SeriesSchema, allow_none=True)
    right = fields.List(Significant())
    left = fields.List(Significant())


class BoundEntrySchema(Schema):
    name = fields.Str()
    bound = Significant(allow_none=True)
    observed = Significant(allow_none=True)
    slack = Significant(allow_none=True)
    applicable = fields.Bool()


class BoundTraceSchema(Versioned):
    digraph_id = fields.Str()
    e = fields.Int()
    rho = Significant()
    clique = fields.Int()
    member = fields.Bool()
    entries = fields.List(fields.Nested(BoundEntrySchema))


class VerificationReportSchema(Versioned):
    e = fields.Int()
    k = fields.Int()
    t = fields.Int()
    case = fields.Str()
    n_candidates = fields.Int()
    rho_max = Significant(allow_none=True)
    argmax = fields.Function(lambda report: [format_canonical(form) for form in report.argmax])
    argmax_classes = fields.Int()
    dsharp_rho = Significant()
    conjecture_holds = fields.Bool(allow_none=True)
    max_vertices = fields.Int()
    cap_certified = fields.Bool()
    elapsed_ms = fields.Function(lambda report: round(report.elapsed * 1000, 3))


class ClosedFormCheckSchema(Schema):
    e = fields.Int()
    k = fields.Int()
    t = fields.Int()
    case = fields.Str()
    expected = Significant()
    rho_max = Significant()
    families = fields.List(fields.Str())
    source = fields.Str()
    passed = fields.Bool()


class ClosedFormTableSchema(Versioned):
    k_max = fields.Int()
    passed = fields.Bool()
    checks = fields.List(fields.Nested(ClosedFormCheckSchema))


class ChainLinkSchema(Schema):
    s = fields.Int()
    bound = Significant()
    target = Significant()


class LargeCliqueSchema(Versioned):
    e = fields.Int()
    k = fields.Int()
    t = fields.Int()
    mode = fields.Str()
    dsharp_rho = Significant()
    passed = fields.Bool()
    chain = fields.List(fields.Nested(ChainLinkSchema))
    report = fields.Nested(VerificationReportSchema, allow_none=True, exclude=("schema_version", "elapsed_ms"))


class OracleSchema(Versioned):
    e = fields.Int()
    n = fields.Int()
    n_digraphs = fields.Int()
    rho_max = Significant(allow_none=True)
    argmax = fields.Function(lambda result: [[list(arc) for arc in d.arcs()] for d in result.argmax])


class OracleComparisonSchema(Versioned):
    e = fields.Int()
    k = fields.Int()
    t = fields.Int()
    max_vertices = fields.Int()
    oracle_rho = Significant(allow_none=True)
    sweep_rho = Significant(allow_none=True)
    agree = fields.Bool(allow_none=True)


def report_schema(timing=False, **kwargs) -> VerificationReportSchema:
    """Elapsed time is dumped only on request so reports stay byte-stable."""
    if timing:
        return VerificationReportSchema(**kwargs)
    return VerificationReportSchema(exclude=("elapsed_ms",), **kwargs)


CSV_COLUMNS = ("e", "k", "t", "n_candidates", "rho_max", "dsharp_rho", "conjecture_holds", "elapsed_ms")


def _csv_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def reports_to_csv(reports, timing=False) -> str:
    """One row per report; elapsed_ms stays empty unless timing is on."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        row = [
            report.e,
            report.k,
            report.t,
            report.n_candidates,
            report.rho_max,
            report.dsharp_rho,
            report.conjecture_holds,
            round(report.elapsed * 1000, 3) if timing else None,
        ]
        writer.writerow([_csv_value(x) for x in row])
    return buffer.getvalue()
