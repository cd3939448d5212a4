from dataclasses import dataclass

from marshmallow import Schema, ValidationError, fields, post_load, validate, validates

MAX_TOLERANCE = 1e-3
FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    tolerance: float
    max_iter: int
    jobs: int
    output_format: str
    long_running: bool


class RunConfigSchema(Schema):
    tolerance = fields.Float(required=True)
    max_iter = fields.Int(required=True, validate=validate.Range(min=1))
    jobs = fields.Int(required=True, validate=validate.Range(min=1))
    output_format = fields.Str(required=True, validate=validate.OneOf(FORMATS))
    long_running = fields.Bool(load_default=False)

    @validates("tolerance")
    def validate_tolerance(self, value, **kwargs):
        if not 0 < value <= MAX_TOLERANCE:
            raise ValidationError(f"tolerance must lie in (0, {MAX_TOLERANCE:g}]")

    @post_load
    def make_config(self, data, **kwargs):
        return RunConfig(**data)


def load_run_config(defaults, **flags) -> RunConfig:
    """Merge app config defaults with command-line flags; flags left as None keep the default."""
    data = {
        "tolerance": defaults["TOLERANCE"],
        "max_iter": defaults["MAX_ITER"],
        "jobs": defaults["JOBS"],
        "output_format": defaults["OUTPUT_FORMAT"],
        "long_running": defaults["LONG_RUNNING"],
    }
    data.update({key: value for key, value in flags.items() if value is not None})
    return RunConfigSchema().load(data)
