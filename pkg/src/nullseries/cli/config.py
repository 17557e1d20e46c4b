"""Run configuration: a published JSON schema, validated before any computation."""

import json

import jsonschema

from ..fourier_core import DEFAULT_DEGREE_CAP
from .jsonutil import sha256_bytes

SCHEMA_VERSION = 1

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "RunConfig",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "stages"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "stages": {"type": "integer", "minimum": 1},
        "eps_override": {
            "oneOf": [
                {"type": "null"},
                {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
            ]
        },
        "precision_bits": {"type": "integer", "minimum": 53},
        "degree_cap": {"type": "integer", "minimum": 1},
        "observation_grid": {"type": "integer", "minimum": 16},
    },
}

DEFAULTS = {
    "eps_override": None,
    "precision_bits": 53,
    "degree_cap": DEFAULT_DEGREE_CAP,
    "observation_grid": 1 << 23,
}


class ConfigError(ValueError):
    """Schema violation; carries the validator's path and message."""

    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = list(path)


def validate(config):
    try:
        jsonschema.validate(config, RUN_CONFIG_SCHEMA)
    except jsonschema.ValidationError as err:
        raise ConfigError(err.message, err.absolute_path) from None
    eps = config.get("eps_override")
    if eps is not None and len(eps) < config["stages"] - 1:
        raise ConfigError("eps_override needs one tolerance per stage after the first", ["eps_override"])
    return config


def make_config(raw):
    """Validate ``raw`` then fill defaults; the result is what gets hashed."""
    validate(raw)
    cfg = dict(DEFAULTS)
    cfg.update(raw)
    return cfg


def config_hash(cfg):
    return sha256_bytes(json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode())


def load_config_file(path):
    with open(path) as fh:
        return json.load(fh)
