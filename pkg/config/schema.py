"""
JSON schemas of the run configuration of every CLI command.

A run configuration is the flat mapping of command parameters (the names of the
click parameters) with every default filled in. It is validated here before any
computation and echoed verbatim into the run manifest, so a manifest passed back
through ``--config`` is validated by the same documents.

Attributes
----------
SCHEMAS : dict
    Draft 2020-12 schema per command name.

Functions
---------
validate_config(command, config)
    Validate a run configuration, raising `ConfigError` with every problem found.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


from jsonschema import Draft202012Validator

from utils.errors import ConfigError


_ALPHA = {"type": ["string", "number"]}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_SEED = {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1}
_BACKEND = {"enum": ["ql", "lapack"]}
_WORKERS = {"type": "integer", "minimum": 1}
_WINDOW = {"type": "string", "pattern": r"^\s*-?\d+(\s*:\s*-?\d+)?\s*$"}
_INT_LIST = {"type": "string", "pattern": r"^[\s\d,:+-]+$"}

_BASE = {
    "alpha": _ALPHA,
    "seed": _SEED,
    "profile": {"type": "boolean"},
}
_OPERATOR = {
    "lam": _POSITIVE,
    "window": _WINDOW,
    "backend": _BACKEND,
}


def _command_schema(title: str, properties: dict, operator: bool = True) -> dict:
    props = {**_BASE, **(_OPERATOR if operator else {}), **properties}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": title,
        "type": "object",
        "properties": props,
        "required": sorted(props),
        "additionalProperties": False,
    }


SCHEMAS = {
    "spectrum": _command_schema("amo-lab spectrum", {
        "theta": {"type": "number"},
        "dump_eig": {"type": "boolean"},
    }),
    "gamma": _command_schema("amo-lab gamma", {
        "phases": {"type": "integer", "minimum": 1},
        "strategy": {"enum": ["midpoint-grid", "jittered-grid", "uniform-random"]},
        "k_list": _INT_LIST,
        "workers": _WORKERS,
        "synthetic_rate": {"type": ["number", "null"], "exclusiveMinimum": 0},
    }),
    "resonances": _command_schema("amo-lab resonances", {
        "theta": {"type": "number"},
        "eta": _POSITIVE,
        "c0": {"type": "number", "minimum": 1},
        "horizon": {"type": "integer", "minimum": 1},
    }, operator=False),
    "verify": _command_schema("amo-lab verify", {
        "theta": {"type": "number"},
        "t_max": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "t_count": {"type": "integer", "minimum": 2},
        "pairs": {"type": ["string", "null"]},
        "pair_count": {"type": "integer", "minimum": 1},
        "phases": {"type": "integer", "minimum": 1},
        "workers": _WORKERS,
        "inject_fault": {"type": "boolean"},
    }),
}


def validate_config(command: str, config: dict) -> dict:
    """
    Validate `config` against the schema of `command`.

    Parameters
    ----------
    command : str
        One of the keys of `SCHEMAS`.
    config : dict
        Effective run configuration.

    Returns
    -------
    dict
        `config` itself, for chaining.

    Raises
    ------
    ConfigError
        On an unknown command or any schema violation (all messages joined).
    """
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    validator = Draft202012Validator(SCHEMAS[command])
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        details = "; ".join(f"{'.'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors)
        raise ConfigError(f"invalid {command} configuration: {details}")
    return config


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
